#pragma once

//! Brute-force bandwidth selection by explicit nested loops over the
//! candidate grid, scoring with the direct-arithmetic oracles.

#include "akreg/bandwidth.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

inline double univariate(const akreg::KernelSpec& spec, double x, double h, double u)
{
  using F = akreg::KernelSpec::Family;
  const int xi = static_cast<int>(x);
  const int ui = static_cast<int>(u);
  switch (spec.family()) {
    case F::binomial:
      return binomial(xi, h, ui);
    case F::discrete_triangular:
      return discrete_triangular(xi, h, spec.arm(), ui);
    case F::dirac_du:
      return dirac_du(xi, h, spec.categories(), ui);
    case F::epanechnikov:
      return epanechnikov(x, h, u);
    case F::gamma:
      return gamma(x, h, u);
    case F::beta:
      return beta(x, h, u);
  }
  return 0.0;
}

struct Table
{
  std::vector<std::vector<double>> X;
  std::vector<double> y;
};

inline Table table_of(const akreg::Dataset& data)
{
  Table t;
  for (std::size_t i = 0; i < data.n(); ++i) {
    t.X.emplace_back(data.row(i).begin(), data.row(i).end());
    t.y.push_back(data.y()[i]);
  }
  return t;
}

struct Choice
{
  double h11 = 0.0;
  double h22 = 0.0;
  double h12 = 0.0;
  double score = std::numeric_limits<double>::infinity();
  std::size_t evaluated = 0;
};

//! Two-axis product kernel: double loop, ascending grids, strict improvement
//! keeps the smallest (h11, h22) among ties.
inline Choice brute_force_diagonal(const akreg::ProductKernel& pk, const akreg::Dataset& data,
                                   const std::vector<double>& g1, const std::vector<double>& g2)
{
  const Table t = table_of(data);
  Choice best;
  for (double h1 : g1)
    for (double h2 : g2) {
      const Weight w = [&](const std::vector<double>& x, const std::vector<double>& u) {
        return univariate(pk.specs[0], x[0], h1, u[0]) * univariate(pk.specs[1], x[1], h2, u[1]);
      };
      const double s = lscv(w, t.X, t.y);
      ++best.evaluated;
      if (s < best.score) {
        best = Choice{h1, h2, 0.0, s, best.evaluated};
      }
    }
  return best;
}

//! h12 interval valid at every observed target: corner bounds intersected
//! with the shrunken positive-definiteness interval.
inline std::pair<double, double> common_interval(const Table& t, double h1, double h2)
{
  const double pd = (1.0 - 1e-9) * std::sqrt(h1 * h2);
  double lo = -pd;
  double hi = pd;
  for (const auto& x : t.X) {
    const auto [l, h] = sarmanov_corner_bounds(x[0], x[1], h1, h2);
    lo = std::max(lo, l);
    hi = std::min(hi, h);
  }
  if (lo > hi)
    return {0.0, 0.0};
  return {lo, hi};
}

//! Triple loop over (h11, h22, h12) with midpoint h12 candidates.
inline Choice brute_force_full(const akreg::Dataset& data, const std::vector<double>& g1,
                               const std::vector<double>& g2, std::size_t h12_count)
{
  const Table t = table_of(data);
  Choice best;
  auto better = [](const Choice& a, const Choice& b) {
    if (a.score != b.score)
      return a.score < b.score;
    if (a.h11 != b.h11)
      return a.h11 < b.h11;
    if (a.h22 != b.h22)
      return a.h22 < b.h22;
    if (std::abs(a.h12) != std::abs(b.h12))
      return std::abs(a.h12) < std::abs(b.h12);
    return a.h12 < b.h12;
  };
  std::size_t evaluated = 0;
  for (double h1 : g1)
    for (double h2 : g2) {
      const auto [lo, hi] = common_interval(t, h1, h2);
      std::vector<double> cands;
      if (lo == hi) {
        cands.push_back(lo);
      } else {
        const double width = (hi - lo) / static_cast<double>(h12_count);
        for (std::size_t k = 0; k < h12_count; ++k)
          cands.push_back(lo + (static_cast<double>(k) + 0.5) * width);
      }
      for (double h12 : cands) {
        const Weight w = [&](const std::vector<double>& x, const std::vector<double>& u) {
          return sarmanov(x[0], x[1], h1, h2, h12, u[0], u[1]);
        };
        const Choice c{h1, h2, h12, lscv(w, t.X, t.y), 0};
        ++evaluated;
        if (better(c, best))
          best = c;
      }
    }
  best.evaluated = evaluated;
  return best;
}

} // namespace oracle
