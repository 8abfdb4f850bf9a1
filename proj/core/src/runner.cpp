#include "akreg/runner.hpp"
#include "akreg/errors.hpp"
#include "akreg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace akreg {

namespace {

using ojson = nlohmann::ordered_json;

const char* algorithm_name(Algorithm a)
{
  return a == Algorithm::full2x2 ? "A1" : "A2";
}

ojson number_or_null(std::optional<double> v)
{
  if (!v || !std::isfinite(*v))
    return nullptr;
  return *v;
}

std::string text_or_na(std::optional<double> v)
{
  if (!v || !std::isfinite(*v))
    return "NA";
  return format_double(*v);
}

ojson bandwidth_json(const BandwidthMatrix& H)
{
  ojson out;
  out["diagonal"] = H.diagonal_entries();
  out["h12"] = H.is_diagonal() ? ojson(nullptr) : ojson(H.h12());
  return out;
}

void check_a1_data(const Dataset& data)
{
  const bool ok = data.d() == 2 &&
                  std::all_of(data.kinds().begin(), data.kinds().end(), [](const VariableKind& k) {
                    return k.type() == VariableKind::Type::continuous_unit;
                  });
  if (!ok)
    throw config_error("algorithm A1 needs exactly two unit-interval regressors");
}

} // namespace

std::pair<Dataset, Schema> load_run_data(const RunConfig& config)
{
  if (!config.fixture.empty() && !config.input.empty())
    throw config_error("give either an input file or a fixture, not both");
  if (config.fixture.empty() && config.input.empty())
    throw config_error("no input file or fixture given");

  Dataset data;
  Schema schema;
  if (!config.fixture.empty()) {
    if (config.fixture != "turnover")
      throw config_error("unknown fixture '" + config.fixture + "'");
    if (config.schema_set)
      throw config_error("the turnover fixture has a fixed schema; use kernels to change kernels");
    data = turnover_dataset();
    schema = turnover_schema();
  } else {
    if (!config.schema_set)
      throw config_error("CSV input needs a schema");
    schema = config.schema;
    data = load_csv(config.input, schema, config.preprocess);
  }
  if (!config.kernels.empty())
    schema.set_kernels(config.kernels);
  return {std::move(data), std::move(schema)};
}

FitResult run_fit(const RunConfig& config)
{
  FitResult r;
  auto [data, schema] = load_run_data(config);
  r.source = config.fixture.empty() ? config.input : "fixture:" + config.fixture;
  r.schema = std::move(schema);
  r.data = std::move(data);
  r.algorithm = config.algorithm;
  r.seed = config.seed;

  const ProductKernel pk = r.schema.product_kernel();
  const SelectOptions options{std::max(1u, config.threads)};
  r.grid = resolve_grid(config.grid, pk, r.data, config.algorithm);
  for (const auto& axis : r.grid.axes)
    axis.validate();

  std::optional<RegressorModel> model;
  if (config.algorithm == Algorithm::full2x2) {
    check_a1_data(r.data);
    r.selection = select_full_2x2(r.data, r.grid, options);
    model.emplace(SarmanovBetaKernel{}, r.selection.best_H);
  } else {
    RegressorModel(pk, BandwidthMatrix::diagonal(std::vector<double>(pk.dim(), 0.5)))
      .check_compatible(r.data);
    r.selection = select_diagonal(pk, r.data, r.grid, options);
    model.emplace(pk, r.selection.best_H);
  }
  r.kernel_label = model->label();
  r.fitted = fit_all(*model, r.data);

  std::vector<double> y;
  std::vector<double> f;
  for (std::size_t i = 0; i < r.fitted.size(); ++i) {
    if (r.fitted[i].defined()) {
      y.push_back(r.data.y()[i]);
      f.push_back(*r.fitted[i].value);
    } else {
      ++r.undefined_fitted;
    }
  }
  if (!y.empty()) {
    r.rmse = rmse(y, f);
    try {
      r.r2 = r2(y, f);
    } catch (const std::domain_error&) {
      r.r2.reset();
    }
  }
  return r;
}

nlohmann::ordered_json fit_report_json(const FitResult& r)
{
  ojson out;
  out["command"] = "fit";
  out["source"] = r.source;
  out["schema"] = r.schema.str();
  out["n"] = r.data.n();
  out["d"] = r.data.d();
  out["kernel"] = r.kernel_label;
  out["algorithm"] = algorithm_name(r.algorithm);
  out["seed"] = r.seed;

  ojson grid;
  ojson axes = ojson::array();
  for (std::size_t j = 0; j < r.grid.axes.size(); ++j) {
    const auto& a = r.grid.axes[j];
    axes.push_back({{"column", r.data.names()[j]},
                    {"lo", a.lo},
                    {"hi", a.hi},
                    {"count", a.count},
                    {"spacing", a.spacing == Spacing::linear ? "linear" : "geometric"}});
  }
  grid["axes"] = std::move(axes);
  if (r.algorithm == Algorithm::full2x2) {
    grid["h12_count"] = r.grid.h12_count;
    grid["h12_include_zero"] = r.grid.h12_include_zero;
  }
  out["grid"] = std::move(grid);

  out["bandwidth"] = bandwidth_json(r.selection.best_H);
  out["lscv"] = {{"score", number_or_null(r.selection.best_score)},
                 {"evaluated", r.selection.evaluated},
                 {"skipped_undefined", r.selection.skipped_undefined}};
  out["metrics"] = {{"rmse", number_or_null(r.rmse)}, {"r2", number_or_null(r.r2)}};
  out["undefined_fitted"] = r.undefined_fitted;

  ojson rows = ojson::array();
  for (std::size_t i = 0; i < r.data.n(); ++i) {
    ojson row;
    row["row"] = i + 1;
    row["x"] = std::vector<double>(r.data.row(i).begin(), r.data.row(i).end());
    row["y"] = r.data.y()[i];
    row["fitted"] = number_or_null(r.fitted[i].value);
    rows.push_back(std::move(row));
  }
  out["fitted"] = std::move(rows);
  return out;
}

void write_fit_report(std::ostream& out, const FitResult& r, ReportFormat format)
{
  if (format == ReportFormat::json) {
    out << fit_report_json(r).dump(2) << '\n';
    return;
  }
  const auto& H = r.selection.best_H;
  out << "# command=fit\n";
  out << "# source=" << r.source << '\n';
  out << "# kernel=" << r.kernel_label << '\n';
  out << "# algorithm=" << algorithm_name(r.algorithm) << '\n';
  out << "# seed=" << r.seed << '\n';
  out << "# n=" << r.data.n() << '\n';
  out << "# d=" << r.data.d() << '\n';
  out << "# bandwidth_diagonal=";
  for (std::size_t j = 0; j < H.dim(); ++j)
    out << (j ? ";" : "") << format_double(H.diag(j));
  out << '\n';
  out << "# bandwidth_h12=" << (H.is_diagonal() ? "NA" : format_double(H.h12())) << '\n';
  out << "# lscv_score=" << text_or_na(r.selection.best_score) << '\n';
  out << "# lscv_evaluated=" << r.selection.evaluated << '\n';
  out << "# lscv_skipped_undefined=" << r.selection.skipped_undefined << '\n';
  out << "# rmse=" << text_or_na(r.rmse) << '\n';
  out << "# r2=" << text_or_na(r.r2) << '\n';
  out << "# undefined_fitted=" << r.undefined_fitted << '\n';
  out << "row";
  for (const auto& name : r.data.names())
    out << ',' << name;
  out << ',' << r.data.response_name() << ",fitted\n";
  for (std::size_t i = 0; i < r.data.n(); ++i) {
    out << i + 1;
    for (double v : r.data.row(i))
      out << ',' << format_double(v);
    out << ',' << format_double(r.data.y()[i]) << ',' << text_or_na(r.fitted[i].value) << '\n';
  }
}

nlohmann::ordered_json sim_report_json(const SimReport& report, bool timing)
{
  ojson out;
  out["command"] = "sim";
  out["function"] = report.target;
  out["n"] = report.n;
  out["n_sim"] = report.n_sim;
  out["noise_sd"] = report.noise_sd;
  out["seed"] = report.seed;
  ojson kernels = ojson::array();
  for (const auto& k : report.kernels) {
    ojson e;
    e["kernel"] = k.label;
    e["replications"] = k.ase.size();
    e["failed"] = k.failed;
    e["mean_ase"] = k.ase.empty() ? ojson(nullptr) : ojson(k.mean_ase);
    e["sd_ase"] = k.ase.size() < 2 ? ojson(nullptr) : ojson(k.sd_ase);
    ojson reps = ojson::array();
    for (std::size_t i = 0; i < k.ase.size(); ++i)
      reps.push_back({{"replication", k.replications[i] + 1}, {"ase", k.ase[i]}});
    e["ase"] = std::move(reps);
    if (timing)
      e["mean_seconds"] = k.mean_seconds;
    kernels.push_back(std::move(e));
  }
  out["kernels"] = std::move(kernels);
  return out;
}

void write_sim_report(std::ostream& out, const SimReport& report, ReportFormat format, bool timing)
{
  if (format == ReportFormat::json) {
    out << sim_report_json(report, timing).dump(2) << '\n';
    return;
  }
  out << "# command=sim\n";
  out << "# function=" << report.target << '\n';
  out << "# n=" << report.n << '\n';
  out << "# n_sim=" << report.n_sim << '\n';
  out << "# noise_sd=" << format_double(report.noise_sd) << '\n';
  out << "# seed=" << report.seed << '\n';
  for (const auto& k : report.kernels) {
    out << "# " << k.label << ": replications=" << k.ase.size() << " failed=" << k.failed
        << " mean_ase=" << (k.ase.empty() ? "NA" : format_double(k.mean_ase))
        << " sd_ase=" << (k.ase.size() < 2 ? "NA" : format_double(k.sd_ase));
    if (timing)
      out << " mean_seconds=" << format_double(k.mean_seconds);
    out << '\n';
  }
  out << "kernel,replication,ase\n";
  for (const auto& k : report.kernels)
    for (std::size_t r = 0; r < k.ase.size(); ++r)
      out << k.label << ',' << k.replications[r] + 1 << ',' << format_double(k.ase[r]) << '\n';
}

KernelDump kernel_preset(const std::string& name)
{
  KernelDump d;
  if (name == "discrete") {
    d.kernels = {KernelSpec::dirac_du(10), KernelSpec::discrete_triangular(3), KernelSpec::binomial()};
    d.x = 4.0;
    d.h = 0.13;
    d.from = 0.0;
    d.to = 9.0;
  } else if (name == "continuous") {
    d.kernels = {KernelSpec::epanechnikov(), KernelSpec::beta(), KernelSpec::gamma()};
    d.x = 0.8;
    d.h = 0.3;
    d.from = 0.0;
    d.to = 2.0;
  } else {
    throw config_error("unknown kernel preset '" + name + "' (expected discrete or continuous)");
  }
  return d;
}

std::vector<KernelCurve> evaluate_dump(const KernelDump& dump)
{
  if (dump.kernels.empty())
    throw config_error("no kernels to evaluate");
  if (dump.points < 2)
    throw config_error("need at least 2 evaluation points");
  std::vector<KernelCurve> curves;
  for (const auto& spec : dump.kernels) {
    if (!is_legal(spec, dump.x, dump.h))
      throw config_error("x = " + format_double(dump.x) + ", h = " + format_double(dump.h) +
                         " is not legal for kernel " + spec.label());
    const Support s = support(spec, dump.x, dump.h);
    double lo = dump.from.value_or(s.lo);
    double hi = dump.to.value_or(s.hi);
    if (!std::isfinite(hi)) {
      const double mean = dump.x + dump.h;
      hi = mean + 8.0 * std::sqrt(dump.h * mean);
    }
    if (!(lo <= hi))
      throw config_error("empty evaluation range");
    KernelCurve c;
    c.label = spec.label();
    if (spec.is_discrete()) {
      for (double u = std::ceil(lo); u <= hi; u += 1.0)
        c.u.push_back(u);
    } else {
      for (std::size_t k = 0; k < dump.points; ++k)
        c.u.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(dump.points - 1));
    }
    for (double u : c.u)
      c.density.push_back(pdf(spec, dump.x, dump.h, u));
    curves.push_back(std::move(c));
  }
  return curves;
}

void write_kernel_dump(std::ostream& out, const KernelDump& dump, ReportFormat format)
{
  const auto curves = evaluate_dump(dump);
  if (format == ReportFormat::json) {
    ojson j;
    j["command"] = "kernel";
    j["x"] = dump.x;
    j["h"] = dump.h;
    ojson arr = ojson::array();
    for (const auto& c : curves)
      arr.push_back({{"kernel", c.label}, {"u", c.u}, {"density", c.density}});
    j["kernels"] = std::move(arr);
    out << j.dump(2) << '\n';
    return;
  }
  out << "kernel,x,h,u,density\n";
  for (const auto& c : curves)
    for (std::size_t k = 0; k < c.u.size(); ++k)
      out << c.label << ',' << format_double(dump.x) << ',' << format_double(dump.h) << ','
          << format_double(c.u[k]) << ',' << format_double(c.density[k]) << '\n';
}

int exit_code_for(const std::exception& e)
{
  if (dynamic_cast<const config_error*>(&e) || dynamic_cast<const std::domain_error*>(&e) ||
      dynamic_cast<const std::invalid_argument*>(&e))
    return 2;
  if (dynamic_cast<const data_error*>(&e))
    return 3;
  if (dynamic_cast<const selection_error*>(&e))
    return 4;
  return 1;
}

std::string error_json(const std::exception& e)
{
  ojson j;
  const int code = exit_code_for(e);
  const char* kind = code == 2 ? "config" : code == 3 ? "data" : code == 4 ? "selection" : "internal";
  j["error"] = kind;
  j["message"] = e.what();
  if (const auto* d = dynamic_cast<const data_error*>(&e)) {
    if (d->line())
      j["line"] = d->line();
    if (!d->column().empty())
      j["column"] = d->column();
  }
  if (const auto* s = dynamic_cast<const selection_error*>(&e))
    j["skipped"] = s->skipped();
  j["exit_code"] = code;
  return j.dump();
}

} // namespace akreg
