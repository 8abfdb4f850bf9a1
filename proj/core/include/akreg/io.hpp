#pragma once

#include "akreg/bandwidth.hpp"
#include "akreg/kernels.hpp"
#include "akreg/regression.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace akreg {

struct ColumnSchema
{
  enum class Role
  {
    response,
    regressor
  };

  std::string name;
  Role role = Role::regressor;
  VariableKind kind = VariableKind::continuous_unbounded();
  std::optional<KernelSpec> kernel;

  //! Explicit kernel, or the default for the kind: Beta (unit), Gamma
  //! (nonneg), DTr2 (count), DiracDU (categorical), Epanechnikov (real).
  KernelSpec effective_kernel() const;
};

//! Column roles for a CSV file. Textual form, entries separated by ',' or
//! newlines: `name:response` or `name:regressor:<kind>[:<kernel>]`, e.g.
//! "income:regressor:nonneg:gamma, persons:regressor:count:dtr:2, share:response".
class Schema
{
public:
  Schema() = default;
  //! Throws config_error unless there is exactly one response, at least one
  //! regressor, unique names and kind-compatible kernels.
  explicit Schema(std::vector<ColumnSchema> columns);
  static Schema parse(const std::string& text);

  const std::vector<ColumnSchema>& columns() const { return columns_; }
  const ColumnSchema& response() const;
  std::vector<ColumnSchema> regressors() const;
  ProductKernel product_kernel() const;
  //! Replaces the regressor kernels in order; throws config_error on
  //! count or kind mismatch.
  void set_kernels(const std::vector<KernelSpec>& kernels);

  std::string str() const;

private:
  std::vector<ColumnSchema> columns_;
};

//! Raw CSV contents: header plus string cells.
struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines; // 1-based source line of each row
};

//! Reads comma-separated text with a header row. Throws data_error on an
//! empty input or ragged rows.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

//! Preprocessing applied before typing: `derive` adds ratio columns
//! ("share=food/income"), `append_head` re-appends the first k rows.
struct Preprocess
{
  std::vector<std::string> derive;
  std::size_t append_head = 0;
};

void apply_preprocess(CsvTable& table, const Preprocess& prep);

//! Types a table under a schema; kind violations name the line and column.
Dataset to_dataset(const CsvTable& table, const Schema& schema);

Dataset load_csv(const std::string& path, const Schema& schema, const Preprocess& prep = {});
Dataset load_csv(std::istream& in, const Schema& schema, const Preprocess& prep = {});

//! Writes regressors then the response with shortest round-trip formatting.
void write_csv(std::ostream& out, const Dataset& data);

//! Shortest decimal text that parses back to the same double.
std::string format_double(double v);

//! Turnover survey data: 80 branches, x1 and x2 are the surveyed
//! proportions (stored as rates in [0,1]), y is turnover.
Dataset turnover_dataset();
Schema turnover_schema();

enum class Algorithm
{
  diagonal, // A2
  full2x2   // A1, beta-Sarmanov
};

enum class ReportFormat
{
  json,
  csv
};

//! Per-regressor grid overrides keyed by column name; missing axes use the
//! defaults of default_grid().
struct GridConfig
{
  std::map<std::string, AxisGrid> axes;
  std::optional<std::size_t> count;
  std::optional<std::size_t> h12_count;
  std::optional<bool> h12_include_zero;
};

struct RunConfig
{
  std::string input;
  std::string fixture;
  Schema schema;
  bool schema_set = false;
  std::vector<KernelSpec> kernels; // optional override of schema kernels
  Preprocess preprocess;
  Algorithm algorithm = Algorithm::diagonal;
  GridConfig grid;
  std::string out;
  ReportFormat format = ReportFormat::json;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

//! Parses the flat key = value configuration format (see README):
//! top-level keys plus `[grid <column>]` / `[grid h12]` blocks.
void parse_config(std::istream& in, RunConfig& config);
void parse_config_file(const std::string& path, RunConfig& config);
//! Reads only the grid blocks/keys of a configuration file.
GridConfig parse_grid_file(const std::string& path);

Algorithm parse_algorithm(const std::string& text);
//! Product-kernel list for a fit, e.g. "beta*beta" or "gamma x dtr:2";
//! DiracDU entries need an explicit category count.
std::vector<KernelSpec> parse_kernel_list(const std::string& text);
ReportFormat parse_format(const std::string& text);

//! Builds the search grid for a dataset from defaults and overrides.
GridSpec resolve_grid(const GridConfig& config, const ProductKernel& kernel,
                      const Dataset& data, Algorithm algorithm);

} // namespace akreg
