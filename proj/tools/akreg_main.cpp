// akreg command-line front end: fit, sim and kernel subcommands.

#include "akreg/errors.hpp"
#include "akreg/io.hpp"
#include "akreg/runner.hpp"
#include "akreg/simulation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::string> split_commas(const std::string& text)
{
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& writer)
{
  if (path.empty() || path == "-") {
    writer(std::cout);
    std::cout.flush();
    return;
  }
  std::ostringstream buffer;
  writer(buffer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw akreg::config_error("cannot write '" + path + "'");
  out << buffer.str();
  if (!out)
    throw akreg::config_error("failed writing '" + path + "'");
}

struct FitArgs
{
  std::optional<std::string> config, input, fixture, schema, kernels, algorithm, grid, out, format;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::size_t> grid_count, h12_count, append_head;
  std::vector<std::string> derive;
};

int run_fit(const FitArgs& a)
{
  akreg::RunConfig cfg;
  if (a.config)
    akreg::parse_config_file(*a.config, cfg);
  if (a.input) {
    cfg.input = *a.input;
    cfg.fixture.clear();
  }
  if (a.fixture) {
    cfg.fixture = *a.fixture;
    cfg.input.clear();
  }
  if (a.schema) {
    cfg.schema = akreg::Schema::parse(*a.schema);
    cfg.schema_set = true;
  }
  if (a.kernels)
    cfg.kernels = akreg::parse_kernel_list(*a.kernels);
  if (a.algorithm)
    cfg.algorithm = akreg::parse_algorithm(*a.algorithm);
  if (a.grid) {
    const auto g = akreg::parse_grid_file(*a.grid);
    for (const auto& [name, axis] : g.axes)
      cfg.grid.axes[name] = axis;
    if (g.count)
      cfg.grid.count = g.count;
    if (g.h12_count)
      cfg.grid.h12_count = g.h12_count;
    if (g.h12_include_zero)
      cfg.grid.h12_include_zero = g.h12_include_zero;
  }
  if (a.grid_count)
    cfg.grid.count = *a.grid_count;
  if (a.h12_count)
    cfg.grid.h12_count = *a.h12_count;
  if (a.out)
    cfg.out = *a.out;
  if (a.format)
    cfg.format = akreg::parse_format(*a.format);
  if (a.seed)
    cfg.seed = *a.seed;
  if (a.threads)
    cfg.threads = *a.threads;
  if (!a.derive.empty())
    cfg.preprocess.derive = a.derive;
  if (a.append_head)
    cfg.preprocess.append_head = *a.append_head;

  const auto result = akreg::run_fit(cfg);
  emit(cfg.out, [&](std::ostream& os) { akreg::write_fit_report(os, result, cfg.format); });
  return 0;
}

struct SimArgs
{
  std::string function = "A";
  std::size_t n = 100;
  std::size_t nsim = 100;
  std::optional<double> noise_sd;
  std::optional<std::string> kernels;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t grid_count = 20;
  std::size_t h12_count = 5;
  bool timing = false;
  std::string out;
  std::string format = "json";
};

int run_sim(const SimArgs& a)
{
  akreg::SimDesign design;
  design.target = akreg::TargetFunction::parse(a.function);
  design.n = a.n;
  design.n_sim = a.nsim;
  design.noise_sd = a.noise_sd;
  design.seed = a.seed;
  if (design.n_sim == 0)
    throw akreg::config_error("--nsim must be positive");

  std::vector<akreg::KernelConfig> configs;
  if (a.kernels) {
    for (const auto& item : split_commas(*a.kernels))
      configs.push_back(akreg::KernelConfig::parse(item));
  } else {
    configs = akreg::default_study_configs(design.target);
  }
  akreg::StudyOptions options;
  options.grid_count = a.grid_count;
  options.h12_count = a.h12_count;
  options.threads = std::max(1u, a.threads);

  const auto format = akreg::parse_format(a.format);
  const auto report = akreg::run_study(design, configs, options);
  emit(a.out, [&](std::ostream& os) { akreg::write_sim_report(os, report, format, a.timing); });
  return 0;
}

struct KernelArgs
{
  std::optional<std::string> preset;
  std::optional<std::string> kernels;
  std::optional<double> x, h, from, to;
  std::size_t points = 201;
  std::string out;
  std::string format = "csv";
};

int run_kernel(const KernelArgs& a)
{
  akreg::KernelDump dump;
  if (a.preset) {
    dump = akreg::kernel_preset(*a.preset);
  } else {
    if (!a.kernels || !a.x || !a.h)
      throw akreg::config_error("kernel needs --preset or all of --kernels, --x and --h");
    for (const auto& item : split_commas(*a.kernels))
      dump.kernels.push_back(akreg::KernelSpec::parse(item));
  }
  if (a.kernels && a.preset) {
    dump.kernels.clear();
    for (const auto& item : split_commas(*a.kernels))
      dump.kernels.push_back(akreg::KernelSpec::parse(item));
  }
  if (a.x)
    dump.x = *a.x;
  if (a.h)
    dump.h = *a.h;
  if (a.from)
    dump.from = a.from;
  if (a.to)
    dump.to = a.to;
  dump.points = a.points;
  const auto format = akreg::parse_format(a.format);
  emit(a.out, [&](std::ostream& os) { akreg::write_kernel_dump(os, dump, format); });
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Nadaraya-Watson regression with associated kernels"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Select a bandwidth by LSCV and fit a dataset");
  fit_cmd->add_option("--config", fit.config, "Configuration file (flags override it)");
  fit_cmd->add_option("--input", fit.input, "CSV input file");
  fit_cmd->add_option("--fixture", fit.fixture, "Built-in dataset (turnover)");
  fit_cmd->add_option("--schema", fit.schema, "Column schema, e.g. 'x:regressor:unit:beta, y:response'");
  fit_cmd->add_option("--kernels", fit.kernels, "Regressor kernels, e.g. 'epan*epan'");
  fit_cmd->add_option("--algorithm", fit.algorithm, "A2 (diagonal) or A1 (beta-Sarmanov)");
  fit_cmd->add_option("--grid", fit.grid, "Grid file with [grid <column>] blocks");
  fit_cmd->add_option("--grid-count", fit.grid_count, "Default candidates per axis");
  fit_cmd->add_option("--h12-count", fit.h12_count, "Off-diagonal candidates (A1)");
  fit_cmd->add_option("--seed", fit.seed, "Seed (recorded for reproducibility)");
  fit_cmd->add_option("--out", fit.out, "Report path (default stdout)");
  fit_cmd->add_option("--format", fit.format, "json or csv");
  fit_cmd->add_option("--threads", fit.threads, "Threads for candidate scoring");
  fit_cmd->add_option("--derive", fit.derive, "Derived ratio column new=num/den (repeatable)");
  fit_cmd->add_option("--append-head", fit.append_head, "Re-append the first k rows");

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("sim", "Run a replicated simulation study");
  sim_cmd->add_option("--function", sim.function, "Target surface A..G")->capture_default_str();
  sim_cmd->add_option("--n", sim.n, "Sample size")->capture_default_str();
  sim_cmd->add_option("--nsim", sim.nsim, "Replications")->capture_default_str();
  sim_cmd->add_option("--noise-sd", sim.noise_sd, "Noise sd (default 0.1 x sd of the surface)");
  sim_cmd->add_option("--kernels", sim.kernels, "Comma-separated configurations, e.g. 'beta*beta,sarmanov'");
  sim_cmd->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads")->capture_default_str();
  sim_cmd->add_option("--grid-count", sim.grid_count, "Candidates per axis")->capture_default_str();
  sim_cmd->add_option("--h12-count", sim.h12_count, "Off-diagonal candidates")->capture_default_str();
  sim_cmd->add_flag("--timing", sim.timing, "Include wall-clock timings");
  sim_cmd->add_option("--out", sim.out, "Report path (default stdout)");
  sim_cmd->add_option("--format", sim.format, "json or csv")->capture_default_str();

  KernelArgs kern;
  auto* kernel_cmd = app.add_subcommand("kernel", "Dump kernel densities");
  kernel_cmd->set_help_flag("--help", "Print this help message and exit");
  kernel_cmd->add_option("--preset", kern.preset, "Preset: discrete or continuous");
  kernel_cmd->add_option("--kernels", kern.kernels, "Comma-separated kernels, e.g. 'bin,dtr:3'");
  kernel_cmd->add_option("--x", kern.x, "Target");
  kernel_cmd->add_option("--h", kern.h, "Bandwidth");
  kernel_cmd->add_option("--from", kern.from, "Lower evaluation bound");
  kernel_cmd->add_option("--to", kern.to, "Upper evaluation bound");
  kernel_cmd->add_option("--points", kern.points, "Points for continuous kernels")->capture_default_str();
  kernel_cmd->add_option("--out", kern.out, "Output path (default stdout)");
  kernel_cmd->add_option("--format", kern.format, "json or csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << akreg::error_json(akreg::config_error(e.what())) << '\n';
    return 2;
  }

  try {
    if (*fit_cmd)
      return run_fit(fit);
    if (*sim_cmd)
      return run_sim(sim);
    return run_kernel(kern);
  } catch (const std::exception& e) {
    std::cerr << akreg::error_json(e) << '\n';
    return akreg::exit_code_for(e);
  }
}
