#pragma once

#include "akreg/bandwidth.hpp"
#include "akreg/io.hpp"
#include "akreg/kernels.hpp"
#include "akreg/simulation.hpp"

#include <nlohmann/json.hpp>

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace akreg {

//! Outcome of `fit`: selected bandwidth, full-sample fit and metrics.
struct FitResult
{
  std::string source;
  Schema schema;
  Dataset data;
  std::string kernel_label;
  Algorithm algorithm = Algorithm::diagonal;
  std::uint64_t seed = 1;
  GridSpec grid;
  LscvResult selection;
  std::vector<Prediction> fitted;
  //! Computed over rows with a defined fitted value.
  std::optional<double> rmse;
  std::optional<double> r2;
  std::size_t undefined_fitted = 0;
};

//! Loads the dataset named by `config` (fixture or CSV input) together with
//! the schema it was typed under, kernel overrides applied.
std::pair<Dataset, Schema> load_run_data(const RunConfig& config);

//! Bandwidth selection and fit. A1 needs two unit-interval regressors.
FitResult run_fit(const RunConfig& config);

nlohmann::ordered_json fit_report_json(const FitResult& result);
void write_fit_report(std::ostream& out, const FitResult& result, ReportFormat format);

//! `timing` adds wall-clock fields, which makes output run-dependent.
nlohmann::ordered_json sim_report_json(const SimReport& report, bool timing);
void write_sim_report(std::ostream& out, const SimReport& report, ReportFormat format,
                      bool timing);

//! Numeric dump of kernel densities at a common target and bandwidth.
struct KernelDump
{
  std::vector<KernelSpec> kernels;
  double x = 0.0;
  double h = 0.1;
  std::optional<double> from;
  std::optional<double> to;
  //! Evaluation points for continuous kernels; discrete ones use integers.
  std::size_t points = 201;
};

//! Kernel comparison presets: "discrete" (DiracDU, DTr3, Bin at x = 4,
//! h = 0.13) and "continuous" (Epan, Beta, Gamma at x = 0.8, h = 0.3).
KernelDump kernel_preset(const std::string& name);

struct KernelCurve
{
  std::string label;
  std::vector<double> u;
  std::vector<double> density;
};

std::vector<KernelCurve> evaluate_dump(const KernelDump& dump);
void write_kernel_dump(std::ostream& out, const KernelDump& dump, ReportFormat format);

//! 0 success, 2 configuration, 3 data, 4 selection failure, 1 otherwise.
int exit_code_for(const std::exception& e);
//! Single-line JSON description of an error for stderr.
std::string error_json(const std::exception& e);

} // namespace akreg
