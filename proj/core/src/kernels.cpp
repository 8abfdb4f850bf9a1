#include "akreg/kernels.hpp"
#include "akreg/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <vector>

namespace akreg {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

bool is_integer(double v)
{
  return std::isfinite(v) && std::floor(v) == v;
}

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

int parse_int(const std::string& text, const std::string& context)
{
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw config_error("invalid integer '" + text + "' in " + context);
  return value;
}

// t * log(v) with the convention 0 * log(0) = 0.
double xlogy(double t, double v)
{
  if (t == 0.0)
    return 0.0;
  return t * std::log(v);
}

double log_beta_fn(double a, double b)
{
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

} // namespace

VariableKind VariableKind::categorical(int categories)
{
  if (categories < 2)
    throw std::domain_error("categorical kind needs at least 2 categories");
  return VariableKind(Type::categorical, categories);
}

bool VariableKind::contains(double value) const
{
  if (!std::isfinite(value))
    return false;
  switch (type_) {
    case Type::continuous_unbounded:
      return true;
    case Type::continuous_nonneg:
      return value >= 0.0;
    case Type::continuous_unit:
      return value >= 0.0 && value <= 1.0;
    case Type::count:
      return value >= 0.0 && is_integer(value);
    case Type::categorical:
      return value >= 0.0 && is_integer(value) && value < categories_;
  }
  return false;
}

std::string VariableKind::name() const
{
  switch (type_) {
    case Type::continuous_unbounded:
      return "real";
    case Type::continuous_nonneg:
      return "nonneg";
    case Type::continuous_unit:
      return "unit";
    case Type::count:
      return "count";
    case Type::categorical:
      return "categorical:" + std::to_string(categories_);
  }
  return "?";
}

VariableKind VariableKind::parse(const std::string& text)
{
  const std::string t = lower(text);
  if (t == "real" || t == "continuous")
    return continuous_unbounded();
  if (t == "nonneg" || t == "positive")
    return continuous_nonneg();
  if (t == "unit" || t == "rate")
    return continuous_unit();
  if (t == "count")
    return count();
  const std::string prefix = "categorical:";
  if (t.rfind(prefix, 0) == 0) {
    const int c = parse_int(t.substr(prefix.size()), "categorical kind");
    if (c < 2)
      throw config_error("categorical kind needs at least 2 categories");
    return categorical(c);
  }
  throw config_error("unknown variable kind '" + text + "'");
}

KernelSpec KernelSpec::discrete_triangular(int arm)
{
  if (arm < 1)
    throw std::domain_error("discrete triangular arm must be >= 1");
  return KernelSpec(Family::discrete_triangular, arm, 0);
}

KernelSpec KernelSpec::dirac_du(int categories)
{
  if (categories < 2)
    throw std::domain_error("DiracDU needs at least 2 categories");
  return KernelSpec(Family::dirac_du, 0, categories);
}

bool KernelSpec::is_discrete() const
{
  return family_ == Family::binomial || family_ == Family::discrete_triangular ||
         family_ == Family::dirac_du;
}

VariableKind KernelSpec::compatible_kind() const
{
  switch (family_) {
    case Family::binomial:
    case Family::discrete_triangular:
      return VariableKind::count();
    case Family::dirac_du:
      return VariableKind::categorical(categories_);
    case Family::epanechnikov:
      return VariableKind::continuous_unbounded();
    case Family::gamma:
      return VariableKind::continuous_nonneg();
    case Family::beta:
      return VariableKind::continuous_unit();
  }
  return VariableKind::continuous_unbounded();
}

bool KernelSpec::accepts(const VariableKind& kind) const
{
  using T = VariableKind::Type;
  const T t = kind.type();
  switch (family_) {
    case Family::epanechnikov:
      return true;
    case Family::gamma:
      return t != T::continuous_unbounded;
    case Family::beta:
      return t == T::continuous_unit;
    case Family::binomial:
    case Family::discrete_triangular:
      return t == T::count || t == T::categorical;
    case Family::dirac_du:
      return t == T::count || (t == T::categorical && kind.categories() <= categories_);
  }
  return false;
}

double KernelSpec::max_bandwidth() const
{
  if (family_ == Family::binomial || family_ == Family::dirac_du)
    return 1.0;
  return std::numeric_limits<double>::infinity();
}

std::string KernelSpec::label() const
{
  switch (family_) {
    case Family::binomial:
      return "Bin";
    case Family::discrete_triangular:
      return "DTr" + std::to_string(arm_);
    case Family::dirac_du:
      return "DirDU";
    case Family::epanechnikov:
      return "Epan";
    case Family::gamma:
      return "Gamma";
    case Family::beta:
      return "Beta";
  }
  return "?";
}

std::string KernelSpec::token() const
{
  switch (family_) {
    case Family::discrete_triangular:
      return "dtr:" + std::to_string(arm_);
    case Family::dirac_du:
      return "dirdu:" + std::to_string(categories_);
    default:
      return lower(label());
  }
}

KernelSpec KernelSpec::parse(const std::string& text)
{
  const std::string t = lower(text);
  if (t == "bin" || t == "binomial")
    return binomial();
  if (t == "epan" || t == "epanechnikov")
    return epanechnikov();
  if (t == "gamma")
    return gamma();
  if (t == "beta")
    return beta();
  if (t.rfind("dtr", 0) == 0) {
    std::string rest = t.substr(3);
    if (!rest.empty() && rest.front() == ':')
      rest.erase(0, 1);
    const int arm = parse_int(rest, "kernel '" + text + "'");
    if (arm < 1)
      throw config_error("discrete triangular arm must be >= 1 in '" + text + "'");
    return discrete_triangular(arm);
  }
  if (t.rfind("dirdu", 0) == 0 || t.rfind("diracdu", 0) == 0) {
    const auto colon = t.find(':');
    if (colon == std::string::npos)
      throw config_error("DiracDU needs a category count, e.g. dirdu:4");
    const int c = parse_int(t.substr(colon + 1), "kernel '" + text + "'");
    if (c < 2)
      throw config_error("DiracDU needs at least 2 categories in '" + text + "'");
    return dirac_du(c);
  }
  throw config_error("unknown kernel '" + text + "'");
}

bool is_legal(const KernelSpec& spec, double x, double h) noexcept
{
  if (!std::isfinite(h) || !(h > 0.0) || !std::isfinite(x))
    return false;
  switch (spec.family()) {
    case KernelSpec::Family::binomial:
      return h <= 1.0 && x >= 0.0 && is_integer(x);
    case KernelSpec::Family::discrete_triangular:
      return x >= 0.0 && is_integer(x);
    case KernelSpec::Family::dirac_du:
      return h <= 1.0 && x >= 0.0 && is_integer(x) && x < spec.categories();
    case KernelSpec::Family::epanechnikov:
      return true;
    case KernelSpec::Family::gamma:
      return x >= 0.0;
    case KernelSpec::Family::beta:
      return x >= 0.0 && x <= 1.0;
  }
  return false;
}

void check_legal(const KernelSpec& spec, double x, double h)
{
  if (!is_legal(spec, x, h))
    throw std::domain_error("illegal target/bandwidth for " + spec.label() +
                            " kernel: x=" + std::to_string(x) +
                            ", h=" + std::to_string(h));
}

Support support(const KernelSpec& spec, double x, double h)
{
  check_legal(spec, x, h);
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (spec.family()) {
    case KernelSpec::Family::binomial:
      return {true, 0.0, x + 1.0};
    case KernelSpec::Family::discrete_triangular:
      return {true, x - spec.arm(), x + spec.arm()};
    case KernelSpec::Family::dirac_du:
      return {true, 0.0, static_cast<double>(spec.categories() - 1)};
    case KernelSpec::Family::epanechnikov:
      return {false, x - h, x + h};
    case KernelSpec::Family::gamma:
      return {false, 0.0, inf};
    case KernelSpec::Family::beta:
      return {false, 0.0, 1.0};
  }
  return {};
}

double discrete_triangular_norm(int arm, double h)
{
  double tail = 0.0;
  for (int k = 1; k <= arm; ++k)
    tail += std::pow(static_cast<double>(k), h);
  return (2.0 * arm + 1.0) * std::pow(arm + 1.0, h) - 2.0 * tail;
}

namespace {

double log_binomial(int x, double h, double u)
{
  if (!is_integer(u) || u < 0.0 || u > x + 1.0)
    return neg_inf;
  const double trials = x + 1.0;
  const double log_choose =
    std::lgamma(trials + 1.0) - std::lgamma(u + 1.0) - std::lgamma(trials - u + 1.0);
  return log_choose + xlogy(u, (x + h) / trials) + xlogy(trials - u, (1.0 - h) / trials);
}

double log_discrete_triangular(int x, double h, int arm, double u)
{
  if (!is_integer(u))
    return neg_inf;
  const double dist = std::abs(u - x);
  if (dist > arm)
    return neg_inf;
  const double top = std::pow(arm + 1.0, h) - std::pow(dist, h);
  return std::log(top) - std::log(discrete_triangular_norm(arm, h));
}

double log_dirac_du(int x, double h, int categories, double u)
{
  if (!is_integer(u) || u < 0.0 || u > categories - 1.0)
    return neg_inf;
  if (u == x)
    return std::log1p(-h);
  return std::log(h / (categories - 1.0));
}

double log_epanechnikov(double x, double h, double u)
{
  const double z = (u - x) / h;
  if (!(std::abs(z) < 1.0))
    return neg_inf;
  return std::log(0.75 / h) + std::log1p(-z * z);
}

double log_gamma_kernel(double x, double h, double u)
{
  if (!(u >= 0.0) || !std::isfinite(u))
    return neg_inf;
  const double shape = 1.0 + x / h;
  return xlogy(x / h, u) - u / h - std::lgamma(shape) - shape * std::log(h);
}

double log_beta_kernel(double x, double h, double u)
{
  if (!(u >= 0.0 && u <= 1.0))
    return neg_inf;
  const double p = x / h;
  const double q = (1.0 - x) / h;
  return xlogy(p, u) + xlogy(q, 1.0 - u) - log_beta_fn(1.0 + p, 1.0 + q);
}

} // namespace

double pdf_binomial(int x, double h, double u)
{
  return std::exp(log_binomial(x, h, u));
}

double pdf_discrete_triangular(int x, double h, int arm, double u)
{
  if (!is_integer(u) || std::abs(u - x) > arm)
    return 0.0;
  const double top = std::pow(arm + 1.0, h) - std::pow(std::abs(u - x), h);
  return top / discrete_triangular_norm(arm, h);
}

double pdf_dirac_du(int x, double h, int categories, double u)
{
  if (!is_integer(u) || u < 0.0 || u > categories - 1.0)
    return 0.0;
  return u == x ? 1.0 - h : h / (categories - 1.0);
}

double pdf_epanechnikov(double x, double h, double u)
{
  const double z = (u - x) / h;
  if (!(std::abs(z) <= 1.0))
    return 0.0;
  return 0.75 / h * (1.0 - z * z);
}

double pdf_gamma(double x, double h, double u)
{
  return std::exp(log_gamma_kernel(x, h, u));
}

double pdf_beta(double x, double h, double u)
{
  return std::exp(log_beta_kernel(x, h, u));
}

double log_pdf(const KernelSpec& spec, double x, double h, double u)
{
  switch (spec.family()) {
    case KernelSpec::Family::binomial:
      return log_binomial(static_cast<int>(x), h, u);
    case KernelSpec::Family::discrete_triangular:
      return log_discrete_triangular(static_cast<int>(x), h, spec.arm(), u);
    case KernelSpec::Family::dirac_du:
      return log_dirac_du(static_cast<int>(x), h, spec.categories(), u);
    case KernelSpec::Family::epanechnikov:
      return log_epanechnikov(x, h, u);
    case KernelSpec::Family::gamma:
      return log_gamma_kernel(x, h, u);
    case KernelSpec::Family::beta:
      return log_beta_kernel(x, h, u);
  }
  return neg_inf;
}

double pdf(const KernelSpec& spec, double x, double h, double u)
{
  check_legal(spec, x, h);
  switch (spec.family()) {
    case KernelSpec::Family::binomial:
      return pdf_binomial(static_cast<int>(x), h, u);
    case KernelSpec::Family::discrete_triangular:
      return pdf_discrete_triangular(static_cast<int>(x), h, spec.arm(), u);
    case KernelSpec::Family::dirac_du:
      return pdf_dirac_du(static_cast<int>(x), h, spec.categories(), u);
    case KernelSpec::Family::epanechnikov:
      return pdf_epanechnikov(x, h, u);
    case KernelSpec::Family::gamma:
      return pdf_gamma(x, h, u);
    case KernelSpec::Family::beta:
      return pdf_beta(x, h, u);
  }
  return 0.0;
}

namespace {

struct Raw
{
  double mass = 0.0;
  double first = 0.0;  // integral of (u - x) K
  double second = 0.0; // integral of (u - x)^2 K
};

Raw discrete_raw(const KernelSpec& spec, double x, double h)
{
  const Support s = support(spec, x, h);
  Raw r;
  for (double u = s.lo; u <= s.hi; u += 1.0) {
    const double p = pdf(spec, x, h, u);
    r.mass += p;
    r.first += (u - x) * p;
    r.second += (u - x) * (u - x) * p;
  }
  return r;
}

// Breakpoints around the mode so narrow kernels are resolved by the
// adaptive rule; `spread` only needs to be the right order of magnitude.
std::vector<double> breakpoints(double lo, double hi, double centre, double spread)
{
  std::vector<double> pts{lo, hi};
  if (centre > lo && centre < hi)
    pts.push_back(centre);
  for (double k = 1.0; k <= 64.0; k *= 2.0) {
    for (double p : {centre - k * spread, centre + k * spread})
      if (p > lo && p < hi)
        pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

Raw continuous_raw(const KernelSpec& spec, double x, double h)
{
  using boost::math::quadrature::gauss_kronrod;
  using boost::math::quadrature::tanh_sinh;
  constexpr double tol = 1e-10;

  double lo = 0.0;
  double hi = 1.0;
  double spread = h;
  switch (spec.family()) {
    case KernelSpec::Family::epanechnikov:
      lo = x - h;
      hi = x + h;
      spread = h;
      break;
    case KernelSpec::Family::gamma: {
      const double sd = std::sqrt(h * (x + h));
      lo = 0.0;
      hi = std::max(x + 40.0 * h + 40.0, x + h + 40.0 * sd);
      spread = sd;
      break;
    }
    case KernelSpec::Family::beta:
      lo = 0.0;
      hi = 1.0;
      spread = std::sqrt(h * (x + h) * (1.0 - x + h)) / (1.0 + 2.0 * h);
      break;
    default:
      break;
  }

  const auto pts = breakpoints(lo, hi, x, spread);
  Raw r;
  double err_total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k];
    const double b = pts[k + 1];
    double err = 0.0;
    const bool boundary_segment =
      spec.family() != KernelSpec::Family::epanechnikov && (k == 0 || b == 1.0);
    auto integrate = [&](auto&& f) {
      double e = 0.0;
      const double v = boundary_segment ? tanh_sinh<double>().integrate(f, a, b, tol, &e)
                                        : gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &e);
      err = std::max(err, e);
      return v;
    };
    r.mass += integrate([&](double u) { return pdf(spec, x, h, u); });
    r.first += integrate([&](double u) { return (u - x) * pdf(spec, x, h, u); });
    r.second += integrate([&](double u) { return (u - x) * (u - x) * pdf(spec, x, h, u); });
    err_total += err;
  }
  if (!std::isfinite(r.mass) || err_total > 1e-8 * std::max(1.0, r.mass))
    throw numeric_error("kernel quadrature did not converge for " + spec.label(),
                        err_total);
  return r;
}

Raw raw_moments(const KernelSpec& spec, double x, double h)
{
  check_legal(spec, x, h);
  return spec.is_discrete() ? discrete_raw(spec, x, h) : continuous_raw(spec, x, h);
}

} // namespace

KernelDiagnostics kernel_moments(const KernelSpec& spec, double x, double h)
{
  const Raw r = raw_moments(spec, x, h);
  KernelDiagnostics d;
  d.mass = r.mass;
  d.mean_shift = r.first / r.mass;
  d.variance = std::max(0.0, r.second / r.mass - d.mean_shift * d.mean_shift);
  return d;
}

double kernel_mass(const KernelSpec& spec, double x, double h)
{
  return raw_moments(spec, x, h).mass;
}

} // namespace akreg
