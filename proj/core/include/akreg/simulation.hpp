#pragma once

#include "akreg/bandwidth.hpp"
#include "akreg/regression.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace akreg {

//! Closed-form regression surfaces used in the simulation study.
//!   A  bivariate beta density, Beta(3,2) x Beta(5,2)          [unit, unit]
//!   B  Dirichlet(5,5,6) density on the simplex                 [unit, unit]
//!   C  independent Poisson(2) x Poisson(3) mass                [count, count]
//!   D  correlated bivariate Poisson sum, theta = (2, 3, 4)     [count, count]
//!   E  Beta(3,3) density x Poisson(3) mass                     [unit, count]
//!   F  Beta(3,2) x Poisson(2) x Poisson(3)                     [unit, count, count]
//!   G  Beta(3,2) x Beta(5,2) x Poisson(2) x Poisson(3)         [unit, unit, count, count]
//! Every surface is zero outside its domain.
class TargetFunction
{
public:
  enum class Name
  {
    A,
    B,
    C,
    D,
    E,
    F,
    G
  };

  explicit TargetFunction(Name name)
    : name_(name)
  {}
  //! Accepts "A".."G" (case-insensitive); throws config_error otherwise.
  static TargetFunction parse(const std::string& text);

  Name name() const { return name_; }
  std::string label() const;
  std::size_t dim() const;
  std::vector<VariableKind> kinds() const;
  //! Correlation between the regressors implied by the surface's
  //! parametrization (metadata only).
  double correlation() const;

  //! Throws std::domain_error on dimension mismatch; out-of-domain points
  //! evaluate to zero.
  double operator()(std::span<const double> x) const;

private:
  Name name_;
};

struct SimDesign
{
  TargetFunction target{TargetFunction::Name::A};
  std::size_t n = 100;
  std::size_t n_sim = 100;
  //! Gaussian noise sd; unset means 0.1 x sd of m under the covariate law.
  std::optional<double> noise_sd;
  std::uint64_t seed = 1;
  //! Count axes are Poisson(poisson_mean) truncated to [0, poisson_max].
  double poisson_mean = 5.0;
  int poisson_max = 15;
};

//! Noise level actually used by a design (resolves the default by Monte
//! Carlo with 10^4 covariate draws).
double resolved_noise_sd(const SimDesign& design);

//! One simulated sample. Unit axes are Uniform(0,1) (uniform on the simplex
//! for B), count axes truncated Poisson; Y = m(X) + N(0, sd^2).
//! Deterministic in (design.seed, replication).
Dataset generate(const SimDesign& design, std::size_t replication = 0);
Dataset generate(const SimDesign& design, std::size_t replication, double noise_sd);

//! A kernel configuration of the study: a product kernel (DiracDU axes may
//! take their category count from the data) or the beta-Sarmanov kernel.
struct KernelConfig
{
  std::vector<KernelSpec> axes;
  //! Per axis: DiracDU category count set to 1 + max observed value.
  std::vector<bool> auto_categories;
  bool sarmanov = false;

  std::string label() const;
  //! Parses "beta*beta", "dtr2*dtr2", "dirdu*dirdu", "sarmanov" (alias
  //! "bivbeta"); "x" may replace "*". A DiracDU axis without ":c" gets its
  //! category count from the data.
  static KernelConfig parse(const std::string& text);
  ProductKernel resolve(const Dataset& data) const;
};

//! Kernel line-up used when none is given: the appropriate product kernel
//! (Beta on unit axes, DTr2 on count axes), Bin and DiracDU variants for the
//! count surfaces C and D, Epanechnikov everywhere, and the beta-Sarmanov
//! kernel for A and B.
std::vector<KernelConfig> default_study_configs(const TargetFunction& target);

struct StudyOptions
{
  std::size_t grid_count = 20;
  std::size_t h12_count = 5;
  //! Worker threads over replications; results are schedule-independent.
  unsigned threads = 1;
};

struct KernelSummary
{
  std::string label;
  std::vector<double> ase; // one entry per successful replication
  std::vector<std::size_t> replications; // 0-based index of each ase entry
  std::size_t failed = 0;
  double mean_ase = 0.0;
  double sd_ase = 0.0;
  double mean_seconds = 0.0; // wall time per replication (selection + fit)
};

struct SimReport
{
  std::string target;
  std::size_t n = 0;
  std::size_t n_sim = 0;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
  std::vector<KernelSummary> kernels;
};

//! Fits every configuration on the same simulated sample per replication:
//! LSCV bandwidth selection on the default grid, full-sample fit, ASE
//! against the true surface at the sampled points. Replications whose
//! selection or fit fails are counted in `failed` and excluded.
SimReport run_study(const SimDesign& design, std::span<const KernelConfig> configs,
                    const StudyOptions& options = {});

//! ASE of a single configuration on a given dataset.
double replicate_ase(const KernelConfig& config, const Dataset& data,
                     const TargetFunction& target, const StudyOptions& options = {});

} // namespace akreg
