#include "akreg/simulation.hpp"
#include "akreg/errors.hpp"
#include "akreg/metrics.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace akreg {

namespace {

using Engine = std::mt19937_64;

bool is_count(double v)
{
  return std::isfinite(v) && v >= 0.0 && std::floor(v) == v;
}

double beta_density(double x, double p, double q)
{
  if (!(x >= 0.0 && x <= 1.0))
    return 0.0;
  const double log_b = std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
  return std::pow(x, p - 1.0) * std::pow(1.0 - x, q - 1.0) * std::exp(-log_b);
}

double poisson_mass(double x, double rate)
{
  if (!is_count(x))
    return 0.0;
  return std::exp(x * std::log(rate) - rate - std::lgamma(x + 1.0));
}

double dirichlet_density(double x1, double x2)
{
  constexpr double a1 = 5.0, a2 = 5.0, a3 = 6.0;
  if (!(x1 >= 0.0 && x2 >= 0.0 && x1 + x2 <= 1.0))
    return 0.0;
  const double log_norm =
    std::lgamma(a1 + a2 + a3) - std::lgamma(a1) - std::lgamma(a2) - std::lgamma(a3);
  return std::exp(log_norm) * std::pow(x1, a1 - 1.0) * std::pow(x2, a2 - 1.0) *
         std::pow(1.0 - x1 - x2, a3 - 1.0);
}

double correlated_poisson(double x1, double x2)
{
  constexpr double t1 = 2.0, t2 = 3.0, t12 = 4.0;
  if (!is_count(x1) || !is_count(x2))
    return 0.0;
  const double upper = std::min(x1, x2);
  double sum = 0.0;
  for (double i = 0.0; i <= upper; i += 1.0) {
    const double log_term = (x1 + i) * std::log(t1) + (x2 + i) * std::log(t2) +
                            i * std::log(t12) - std::lgamma(x1 + i + 1.0) -
                            std::lgamma(x2 + i + 1.0) - std::lgamma(i + 1.0);
    sum += std::exp(log_term);
  }
  return std::exp(-(t1 + t2 + t12)) * sum;
}

Engine replication_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t purpose)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return Engine(seq);
}

std::vector<double> draw_covariates(const SimDesign& design, Engine& rng)
{
  const auto kinds = design.target.kinds();
  boost::random::uniform_01<double> unif;
  boost::random::poisson_distribution<int, double> pois(design.poisson_mean);
  std::vector<double> x(kinds.size());
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    if (kinds[j].type() == VariableKind::Type::count) {
      int v = 0;
      do {
        v = pois(rng);
      } while (v > design.poisson_max);
      x[j] = v;
    } else {
      x[j] = unif(rng);
    }
  }
  if (design.target.name() == TargetFunction::Name::B && x[0] + x[1] > 1.0) {
    x[0] = 1.0 - x[0];
    x[1] = 1.0 - x[1];
  }
  return x;
}

} // namespace

TargetFunction TargetFunction::parse(const std::string& text)
{
  if (text.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (c >= 'A' && c <= 'G')
      return TargetFunction(static_cast<Name>(c - 'A'));
  }
  throw config_error("unknown target function '" + text + "' (expected A-G)");
}

std::string TargetFunction::label() const
{
  return std::string(1, static_cast<char>('A' + static_cast<int>(name_)));
}

std::size_t TargetFunction::dim() const
{
  switch (name_) {
    case Name::F:
      return 3;
    case Name::G:
      return 4;
    default:
      return 2;
  }
}

std::vector<VariableKind> TargetFunction::kinds() const
{
  const auto unit = VariableKind::continuous_unit();
  const auto count = VariableKind::count();
  switch (name_) {
    case Name::A:
    case Name::B:
      return {unit, unit};
    case Name::C:
    case Name::D:
      return {count, count};
    case Name::E:
      return {unit, count};
    case Name::F:
      return {unit, count, count};
    case Name::G:
      return {unit, unit, count, count};
  }
  return {};
}

double TargetFunction::correlation() const
{
  switch (name_) {
    case Name::B:
      return -std::sqrt(5.0 * 5.0) / std::sqrt((5.0 + 6.0) * (5.0 + 6.0));
    case Name::D:
      return 4.0 / std::sqrt((2.0 + 4.0) * (3.0 + 4.0));
    default:
      return 0.0;
  }
}

double TargetFunction::operator()(std::span<const double> x) const
{
  if (x.size() != dim())
    throw std::domain_error("target function " + label() + " expects " +
                            std::to_string(dim()) + " coordinates");
  switch (name_) {
    case Name::A:
      return beta_density(x[0], 3, 2) * beta_density(x[1], 5, 2);
    case Name::B:
      return dirichlet_density(x[0], x[1]);
    case Name::C:
      return poisson_mass(x[0], 2) * poisson_mass(x[1], 3);
    case Name::D:
      return correlated_poisson(x[0], x[1]);
    case Name::E:
      return beta_density(x[0], 3, 3) * poisson_mass(x[1], 3);
    case Name::F:
      return beta_density(x[0], 3, 2) * poisson_mass(x[1], 2) * poisson_mass(x[2], 3);
    case Name::G:
      return beta_density(x[0], 3, 2) * beta_density(x[1], 5, 2) * poisson_mass(x[2], 2) *
             poisson_mass(x[3], 3);
  }
  return 0.0;
}

double resolved_noise_sd(const SimDesign& design)
{
  if (design.noise_sd) {
    if (!(*design.noise_sd >= 0.0))
      throw config_error("noise sd must be >= 0");
    return *design.noise_sd;
  }
  constexpr std::size_t draws = 10'000;
  Engine rng = replication_engine(design.seed, 0, 0x6e6f697365ULL);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < draws; ++k) {
    const double v = design.target(draw_covariates(design, rng));
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  return 0.1 * std::sqrt(m2 / static_cast<double>(draws - 1));
}

Dataset generate(const SimDesign& design, std::size_t replication, double noise_sd)
{
  Engine rng = replication_engine(design.seed, replication, 1);
  boost::random::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(design.n * design.target.dim());
  ys.reserve(design.n);
  for (std::size_t i = 0; i < design.n; ++i) {
    const auto x = draw_covariates(design, rng);
    const double eps = noise_sd * noise(rng);
    ys.push_back(design.target(x) + eps);
    xs.insert(xs.end(), x.begin(), x.end());
  }
  return Dataset(design.target.kinds(), std::move(xs), std::move(ys));
}

Dataset generate(const SimDesign& design, std::size_t replication)
{
  return generate(design, replication, resolved_noise_sd(design));
}

std::string KernelConfig::label() const
{
  if (sarmanov)
    return "BivariateBeta";
  std::string out;
  for (std::size_t j = 0; j < axes.size(); ++j)
    out += (j ? "x" : "") + axes[j].label();
  return out;
}

KernelConfig KernelConfig::parse(const std::string& text)
{
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  KernelConfig cfg;
  if (t == "sarmanov" || t == "bivbeta" || t == "bivariatebeta") {
    cfg.sarmanov = true;
    return cfg;
  }
  std::size_t start = 0;
  while (start <= t.size()) {
    std::size_t end = t.find_first_of("*x", start);
    if (end == std::string::npos)
      end = t.size();
    const std::string tok = t.substr(start, end - start);
    if (tok.empty())
      throw config_error("empty kernel in configuration '" + text + "'");
    if ((tok == "dirdu" || tok == "diracdu")) {
      cfg.axes.push_back(KernelSpec::dirac_du(2));
      cfg.auto_categories.push_back(true);
    } else {
      cfg.axes.push_back(KernelSpec::parse(tok));
      cfg.auto_categories.push_back(false);
    }
    start = end + 1;
  }
  return cfg;
}

std::vector<KernelConfig> default_study_configs(const TargetFunction& target)
{
  std::vector<KernelConfig> out;
  const auto kinds = target.kinds();
  auto uniform = [&](const char* unit_kernel, const char* count_kernel) {
    std::string text;
    for (std::size_t j = 0; j < kinds.size(); ++j) {
      if (j)
        text += "*";
      text += kinds[j].type() == VariableKind::Type::count ? count_kernel : unit_kernel;
    }
    out.push_back(KernelConfig::parse(text));
  };
  uniform("beta", "dtr2");
  if (target.name() == TargetFunction::Name::C || target.name() == TargetFunction::Name::D) {
    uniform("beta", "bin");
    uniform("beta", "dirdu");
  }
  uniform("epan", "epan");
  if (target.name() == TargetFunction::Name::A || target.name() == TargetFunction::Name::B)
    out.push_back(KernelConfig::parse("sarmanov"));
  return out;
}

ProductKernel KernelConfig::resolve(const Dataset& data) const
{
  if (sarmanov)
    throw std::logic_error("beta-Sarmanov configuration has no product kernel");
  if (axes.size() != data.d())
    throw config_error("kernel configuration " + label() + " has " +
                       std::to_string(axes.size()) + " axes, data has " +
                       std::to_string(data.d()));
  ProductKernel pk{axes};
  for (std::size_t j = 0; j < axes.size(); ++j) {
    if (!auto_categories[j])
      continue;
    const auto col = data.column(j);
    const double mx = *std::max_element(col.begin(), col.end());
    pk.specs[j] = KernelSpec::dirac_du(std::max(2, static_cast<int>(mx) + 1));
  }
  return pk;
}

double replicate_ase(const KernelConfig& config, const Dataset& data,
                     const TargetFunction& target, const StudyOptions& options)
{
  std::vector<double> truth(data.n());
  for (std::size_t i = 0; i < data.n(); ++i)
    truth[i] = target(data.row(i));
  if (config.sarmanov) {
    const auto sel =
      select_full_2x2(data, default_sarmanov_grid(data, options.grid_count, options.h12_count));
    return ase(truth, fit_all(RegressorModel(SarmanovBetaKernel{}, sel.best_H), data));
  }
  const ProductKernel pk = config.resolve(data);
  const auto sel = select_diagonal(pk, data, default_grid(pk, data, options.grid_count));
  return ase(truth, fit_all(RegressorModel(pk, sel.best_H), data));
}

SimReport run_study(const SimDesign& design, std::span<const KernelConfig> configs,
                    const StudyOptions& options)
{
  if (design.n < 2)
    throw config_error("simulation needs n >= 2");
  for (const auto& c : configs)
    if (!c.sarmanov && c.axes.size() != design.target.dim())
      throw config_error("kernel configuration " + c.label() + " does not match target " +
                         design.target.label());

  const double sd = resolved_noise_sd(design);
  struct Cell
  {
    std::optional<double> ase;
    double seconds = 0.0;
  };
  std::vector<std::vector<Cell>> cells(design.n_sim, std::vector<Cell>(configs.size()));

  auto run_one = [&](std::size_t r) {
    const Dataset data = generate(design, r, sd);
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        cells[r][c].ase = replicate_ase(configs[c], data, design.target, options);
      } catch (const selection_error&) {
      } catch (const std::domain_error&) {
        // undefined fitted value
      }
      cells[r][c].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  if (options.threads <= 1) {
    for (std::size_t r = 0; r < design.n_sim; ++r)
      run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < options.threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < design.n_sim; r = next++)
          run_one(r);
      });
  }

  SimReport report;
  report.target = design.target.label();
  report.n = design.n;
  report.n_sim = design.n_sim;
  report.noise_sd = sd;
  report.seed = design.seed;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    KernelSummary s;
    s.label = configs[c].label();
    double seconds = 0.0;
    for (std::size_t r = 0; r < design.n_sim; ++r) {
      seconds += cells[r][c].seconds;
      if (cells[r][c].ase) {
        s.ase.push_back(*cells[r][c].ase);
        s.replications.push_back(r);
      } else
        ++s.failed;
    }
    if (!s.ase.empty()) {
      double sum = 0.0;
      for (double v : s.ase)
        sum += v;
      s.mean_ase = sum / static_cast<double>(s.ase.size());
      double ss = 0.0;
      for (double v : s.ase)
        ss += (v - s.mean_ase) * (v - s.mean_ase);
      s.sd_ase = s.ase.size() > 1 ? std::sqrt(ss / static_cast<double>(s.ase.size() - 1)) : 0.0;
    } else {
      s.mean_ase = std::numeric_limits<double>::quiet_NaN();
    }
    s.mean_seconds = design.n_sim ? seconds / static_cast<double>(design.n_sim) : 0.0;
    report.kernels.push_back(std::move(s));
  }
  return report;
}

} // namespace akreg
