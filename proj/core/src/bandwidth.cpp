#include "akreg/bandwidth.hpp"
#include "akreg/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace akreg {

std::vector<double> AxisGrid::values() const
{
  validate();
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double steps = static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / steps;
    out[k] = spacing == Spacing::linear ? lo + t * (hi - lo) : lo * std::pow(hi / lo, t);
  }
  out.back() = hi;
  return out;
}

void AxisGrid::validate() const
{
  if (!(lo > 0.0) || !(lo <= hi) || !std::isfinite(hi))
    throw config_error("grid axis needs 0 < lo <= hi");
  if (count < 1)
    throw config_error("grid axis needs at least one subdivision");
}

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double pos_inf = std::numeric_limits<double>::infinity();

// Cap on cached log-kernel entries (doubles) before falling back to
// per-candidate evaluation.
constexpr std::size_t cache_limit = 40'000'000;

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body)
{
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const unsigned workers = std::min<std::size_t>(threads, count);
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++)
        body(i);
    });
}

struct Candidate
{
  std::vector<double> diag;
  double h12 = 0.0;
  LscvScore score;
};

// Strict ordering used for the argmin: score, then diagonal entries in axis
// order, then |h12|, then negative h12 first.
bool better(const Candidate& a, const Candidate& b)
{
  if (a.score.value != b.score.value)
    return a.score.value < b.score.value;
  if (a.diag != b.diag)
    return std::lexicographical_compare(a.diag.begin(), a.diag.end(), b.diag.begin(),
                                        b.diag.end());
  if (std::abs(a.h12) != std::abs(b.h12))
    return std::abs(a.h12) < std::abs(b.h12);
  return a.h12 < b.h12;
}

LscvResult reduce(const std::vector<Candidate>& cands, bool full)
{
  LscvResult out;
  out.evaluated = cands.size();
  const Candidate* best = nullptr;
  for (const auto& c : cands) {
    if (c.score.penalized()) {
      ++out.skipped_undefined;
      continue;
    }
    if (!best || better(c, *best))
      best = &c;
  }
  if (!best)
    throw selection_error("every bandwidth candidate leaves some observation without "
                          "kernel weight",
                          out.skipped_undefined);
  out.best_score = best->score.value;
  out.best_H = full ? BandwidthMatrix::full2x2(best->diag[0], best->diag[1], best->h12)
                    : BandwidthMatrix::diagonal(best->diag);
  return out;
}

// Squared-error accumulation shared by every scoring path.
template <class RowPrediction>
LscvScore accumulate_loo(std::size_t n, std::span<const double> y, RowPrediction&& loo)
{
  LscvScore s;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Prediction p = loo(i);
    if (!p.defined()) {
      ++s.undefined_rows;
      continue;
    }
    const double r = y[i] - *p.value;
    sse += r * r;
  }
  s.value = s.undefined_rows ? pos_inf : sse / static_cast<double>(n);
  return s;
}

// log K(X_k; X_i, h) for one axis and one bandwidth, row-major in (i, k).
std::vector<double> axis_log_kernel(const KernelSpec& spec, const Dataset& data,
                                    std::size_t j, double h)
{
  const std::size_t n = data.n();
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = data.at(i, j);
    for (std::size_t k = 0; k < n; ++k)
      out[i * n + k] = log_pdf(spec, x, h, data.at(k, j));
  }
  return out;
}

std::vector<double> axis_sarmanov_factor(const Dataset& data, std::size_t j, double h)
{
  const std::size_t n = data.n();
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = data.at(i, j);
    for (std::size_t k = 0; k < n; ++k)
      out[i * n + k] = sarmanov_factor(x, h, data.at(k, j));
  }
  return out;
}

void check_axis_values(const KernelSpec& spec, const Dataset& data, std::size_t j,
                       const std::vector<double>& values)
{
  for (double h : values) {
    if (h > spec.max_bandwidth())
      throw config_error("grid value " + std::to_string(h) + " exceeds the legal bandwidth of " +
                         spec.label() + " (column '" + data.names()[j] + "')");
    for (std::size_t i = 0; i < data.n(); ++i)
      if (!is_legal(spec, data.at(i, j), h))
        throw std::domain_error(spec.label() + " kernel cannot target value " +
                                std::to_string(data.at(i, j)) + " in column '" +
                                data.names()[j] + "'");
  }
}

double column_range(const Dataset& data, std::size_t j)
{
  const auto col = data.column(j);
  const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
  const double r = *mx - *mn;
  return r > 0.0 ? r : 1.0;
}

} // namespace

LscvScore lscv_score(const RegressorModel& model, const Dataset& data)
{
  if (data.n() < 2)
    throw std::domain_error("cross-validation needs n >= 2");
  return accumulate_loo(data.n(), data.y(),
                        [&](std::size_t i) { return predict_loo(model, data, i); });
}

GridSpec default_grid(const ProductKernel& kernel, const Dataset& data, std::size_t count)
{
  if (kernel.dim() != data.d())
    throw std::domain_error("kernel dimension does not match the dataset");
  GridSpec g;
  for (std::size_t j = 0; j < kernel.dim(); ++j) {
    const auto& spec = kernel.specs[j];
    switch (spec.family()) {
      case KernelSpec::Family::binomial:
      case KernelSpec::Family::dirac_du:
        g.axes.push_back({1.0 / static_cast<double>(count), 1.0, count, Spacing::linear});
        break;
      case KernelSpec::Family::discrete_triangular:
        g.axes.push_back({0.01, 5.0, count, Spacing::geometric});
        break;
      default: {
        const double r = column_range(data, j);
        g.axes.push_back({0.01 * r, r, count, Spacing::geometric});
      }
    }
  }
  return g;
}

GridSpec default_sarmanov_grid(const Dataset& data, std::size_t count, std::size_t h12_count)
{
  GridSpec g = default_grid(ProductKernel{{KernelSpec::beta(), KernelSpec::beta()}}, data, count);
  g.h12_count = h12_count;
  return g;
}

LscvResult select_diagonal(const ProductKernel& kernel, const Dataset& data,
                           const GridSpec& grid, const SelectOptions& options)
{
  const std::size_t d = kernel.dim();
  const std::size_t n = data.n();
  if (grid.axes.size() != d)
    throw config_error("grid has " + std::to_string(grid.axes.size()) + " axes, kernel has " +
                       std::to_string(d));
  if (n < 2)
    throw std::domain_error("cross-validation needs n >= 2");
  RegressorModel(kernel, BandwidthMatrix::diagonal(std::vector<double>(d, 1e-3)))
    .check_compatible(data);

  std::vector<std::vector<double>> values(d);
  std::size_t total = 1;
  std::size_t cached = 0;
  for (std::size_t j = 0; j < d; ++j) {
    values[j] = grid.axes[j].values();
    check_axis_values(kernel.specs[j], data, j, values[j]);
    total *= values[j].size();
    cached += values[j].size() * n * n;
  }

  std::vector<Candidate> cands(total);
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t rest = c;
    cands[c].diag.resize(d);
    for (std::size_t j = d; j-- > 0;) {
      cands[c].diag[j] = values[j][rest % values[j].size()];
      rest /= values[j].size();
    }
  }

  if (cached > cache_limit) {
    parallel_for(total, options.threads, [&](std::size_t c) {
      const RegressorModel model(kernel, BandwidthMatrix::diagonal(cands[c].diag));
      cands[c].score = lscv_score(model, data);
    });
    return reduce(cands, false);
  }

  // cache[j][v] holds the n x n log-kernel matrix of axis j at its v-th value.
  std::vector<std::vector<std::vector<double>>> cache(d);
  for (std::size_t j = 0; j < d; ++j) {
    cache[j].resize(values[j].size());
    parallel_for(values[j].size(), options.threads, [&](std::size_t v) {
      cache[j][v] = axis_log_kernel(kernel.specs[j], data, j, values[j][v]);
    });
  }

  parallel_for(total, options.threads, [&](std::size_t c) {
    std::vector<std::size_t> idx(d);
    std::size_t rest = c;
    for (std::size_t j = d; j-- > 0;) {
      idx[j] = rest % values[j].size();
      rest /= values[j].size();
    }
    std::vector<double> lw(n);
    cands[c].score = accumulate_loo(n, data.y(), [&](std::size_t i) {
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j)
          acc += cache[j][idx[j]][i * n + k];
        lw[k] = acc;
      }
      return weighted_average(lw, data.y(), i);
    });
  });
  return reduce(cands, false);
}

Interval common_h12_interval(const Dataset& data, double h11, double h22)
{
  Interval out{neg_inf, pos_inf};
  for (std::size_t i = 0; i < data.n(); ++i) {
    const Interval iv = admissible_h12_interval(data.at(i, 0), data.at(i, 1), h11, h22);
    out.lo = std::max(out.lo, iv.lo);
    out.hi = std::min(out.hi, iv.hi);
  }
  if (!(out.lo <= out.hi))
    return {0.0, 0.0};
  return out;
}

std::vector<double> h12_candidates(const Interval& interval, std::size_t count,
                                   bool include_zero)
{
  if (count < 1)
    throw config_error("h12 grid needs at least one subdivision");
  std::vector<double> out;
  if (interval.lo == interval.hi) {
    out.push_back(interval.lo);
  } else {
    const double width = (interval.hi - interval.lo) / static_cast<double>(count);
    for (std::size_t k = 0; k < count; ++k)
      out.push_back(interval.lo + (static_cast<double>(k) + 0.5) * width);
  }
  if (include_zero && std::find(out.begin(), out.end(), 0.0) == out.end() &&
      interval.contains(0.0)) {
    out.push_back(0.0);
    std::sort(out.begin(), out.end());
  }
  return out;
}

LscvResult select_full_2x2(const Dataset& data, const GridSpec& grid,
                           const SelectOptions& options)
{
  if (data.d() != 2)
    throw config_error("the beta-Sarmanov search needs exactly two regressors");
  for (const auto& k : data.kinds())
    if (k.type() != VariableKind::Type::continuous_unit)
      throw config_error("the beta-Sarmanov search needs unit-interval regressors");
  if (grid.axes.size() != 2)
    throw config_error("the beta-Sarmanov search needs two grid axes");
  const std::size_t n = data.n();
  if (n < 2)
    throw std::domain_error("cross-validation needs n >= 2");

  const auto beta = KernelSpec::beta();
  const std::vector<double> v1 = grid.axes[0].values();
  const std::vector<double> v2 = grid.axes[1].values();
  check_axis_values(beta, data, 0, v1);
  check_axis_values(beta, data, 1, v2);

  std::vector<Candidate> cands;
  for (double h11 : v1)
    for (double h22 : v2) {
      const Interval iv = common_h12_interval(data, h11, h22);
      for (double h12 : h12_candidates(iv, grid.h12_count, grid.h12_include_zero))
        cands.push_back({{h11, h22}, h12, {}});
    }

  const std::size_t cached = 2 * (v1.size() + v2.size()) * n * n;
  if (cached > cache_limit) {
    parallel_for(cands.size(), options.threads, [&](std::size_t c) {
      const auto& cd = cands[c];
      const RegressorModel model(SarmanovBetaKernel{},
                                 BandwidthMatrix::full2x2(cd.diag[0], cd.diag[1], cd.h12));
      cands[c].score = lscv_score(model, data);
    });
    return reduce(cands, true);
  }

  std::vector<std::vector<double>> log1(v1.size()), log2(v2.size()), t1(v1.size()),
    t2(v2.size());
  parallel_for(v1.size(), options.threads, [&](std::size_t v) {
    log1[v] = axis_log_kernel(beta, data, 0, v1[v]);
    t1[v] = axis_sarmanov_factor(data, 0, v1[v]);
  });
  parallel_for(v2.size(), options.threads, [&](std::size_t v) {
    log2[v] = axis_log_kernel(beta, data, 1, v2[v]);
    t2[v] = axis_sarmanov_factor(data, 1, v2[v]);
  });
  auto index_of = [](const std::vector<double>& vals, double h) {
    return static_cast<std::size_t>(std::find(vals.begin(), vals.end(), h) - vals.begin());
  };

  parallel_for(cands.size(), options.threads, [&](std::size_t c) {
    const std::size_t a = index_of(v1, cands[c].diag[0]);
    const std::size_t b = index_of(v2, cands[c].diag[1]);
    const double h12 = cands[c].h12;
    std::vector<double> lw(n);
    cands[c].score = accumulate_loo(n, data.y(), [&](std::size_t i) {
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t ik = i * n + k;
        const double base = log1[a][ik] + log2[b][ik];
        lw[k] = base == neg_inf ? base : base + sarmanov_log_term(h12, t1[a][ik], t2[b][ik]);
      }
      return weighted_average(lw, data.y(), i);
    });
  });
  return reduce(cands, true);
}

} // namespace akreg
