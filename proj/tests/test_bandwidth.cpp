#include "akreg/bandwidth.hpp"
#include "akreg/errors.hpp"
#include "selection_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace akreg;

namespace {

const VariableKind unit_kind = VariableKind::continuous_unit();

Dataset random_unit_data(std::mt19937_64& rng, std::size_t n)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = unit(rng), b = unit(rng);
    x.push_back(a);
    x.push_back(b);
    y.push_back(std::sin(3 * a) + b * b + 0.1 * unit(rng));
  }
  return Dataset({unit_kind, unit_kind}, x, y);
}

AxisGrid axis(double lo, double hi, std::size_t count)
{
  return AxisGrid{lo, hi, count, Spacing::geometric};
}

ProductKernel beta_beta()
{
  return ProductKernel{{KernelSpec::beta(), KernelSpec::beta()}};
}

} // namespace

TEST(AxisGrid, Values)
{
  const auto g = AxisGrid{0.01, 1.0, 3, Spacing::geometric}.values();
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g.front(), 0.01);
  EXPECT_NEAR(g[1], 0.1, 1e-15);
  EXPECT_EQ(g.back(), 1.0);
  const auto l = AxisGrid{0.25, 1.0, 4, Spacing::linear}.values();
  EXPECT_EQ(l, (std::vector<double>{0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(AxisGrid({0.3, 0.9, 1, Spacing::linear}).values(), std::vector<double>{0.3});
  EXPECT_THROW((AxisGrid{0.0, 1.0, 3}.validate()), config_error);
  EXPECT_THROW((AxisGrid{0.5, 0.1, 3}.validate()), config_error);
  EXPECT_THROW((AxisGrid{0.1, 0.5, 0}.validate()), config_error);
}

TEST(LscvScore, ConstantResponsesScoreZero)
{
  std::mt19937_64 rng(1);
  const Dataset d = random_unit_data(rng, 10);
  const Dataset c = d.with_responses(std::vector<double>(10, 2.0));
  const RegressorModel m(beta_beta(), BandwidthMatrix::diagonal({0.3, 0.3}));
  const auto s = lscv_score(m, c);
  EXPECT_FALSE(s.penalized());
  EXPECT_NEAR(s.value, 0.0, 1e-28);
}

TEST(LscvScore, TwoPointHandComputation)
{
  const Dataset d({unit_kind}, {0.3, 0.6}, {0.0, 1.0});
  const RegressorModel m(ProductKernel{{KernelSpec::beta()}}, BandwidthMatrix::diagonal({0.5}));
  const auto s = lscv_score(m, d);
  // Each held-out prediction is the other response: residuals -1 and 1.
  EXPECT_EQ(s.value, 1.0);
  EXPECT_EQ(s.undefined_rows, 0u);
}

TEST(LscvScore, IsolatedRowIsPenalized)
{
  const Dataset d({VariableKind::count()}, {0, 1, 9}, {1.0, 2.0, 3.0});
  const RegressorModel m(ProductKernel{{KernelSpec::discrete_triangular(1)}},
                         BandwidthMatrix::diagonal({0.5}));
  const auto s = lscv_score(m, d);
  EXPECT_TRUE(s.penalized());
  EXPECT_EQ(s.undefined_rows, 1u);
  EXPECT_TRUE(std::isinf(s.value));
}

TEST(LscvScore, MatchesOracle)
{
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset d = random_unit_data(rng, 12);
    const double h1 = 0.05 + 0.1 * rep, h2 = 0.3;
    const RegressorModel m(beta_beta(), BandwidthMatrix::diagonal({h1, h2}));
    const auto t = oracle::table_of(d);
    const oracle::Weight w = [&](const std::vector<double>& x, const std::vector<double>& u) {
      return oracle::beta(x[0], h1, u[0]) * oracle::beta(x[1], h2, u[1]);
    };
    EXPECT_NEAR(lscv_score(m, d).value, oracle::lscv(w, t.X, t.y), 1e-12);
  }
}

TEST(SelectDiagonal, SingleCandidate)
{
  std::mt19937_64 rng(3);
  const Dataset d = random_unit_data(rng, 8);
  GridSpec g{{axis(0.2, 0.2, 1), axis(0.4, 0.4, 1)}};
  const auto r = select_diagonal(beta_beta(), d, g);
  EXPECT_EQ(r.best_H, BandwidthMatrix::diagonal({0.2, 0.4}));
  EXPECT_EQ(r.evaluated, 1u);
}

TEST(SelectDiagonal, MatchesBruteForce3x3)
{
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = random_unit_data(rng, 10);
    const GridSpec g{{axis(0.02, 0.8, 3), axis(0.05, 1.0, 3)}};
    const auto r = select_diagonal(beta_beta(), d, g);
    const auto o = oracle::brute_force_diagonal(beta_beta(), d, g.axes[0].values(), g.axes[1].values());
    EXPECT_EQ(r.best_H, BandwidthMatrix::diagonal({o.h11, o.h22}));
    EXPECT_NEAR(r.best_score, o.score, 1e-12 * o.score);
    EXPECT_EQ(r.evaluated, 9u);
  }
}

TEST(SelectDiagonal, MixedDiscreteKernelsMatchBruteForce)
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ProductKernel pk{{KernelSpec::gamma(), KernelSpec::binomial()}};
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 12; ++i) {
      x.push_back(2 * unit(rng));
      x.push_back(static_cast<double>(rng() % 4));
      y.push_back(unit(rng) + x[x.size() - 1]);
    }
    const Dataset d({VariableKind::continuous_nonneg(), VariableKind::count()}, x, y);
    const GridSpec g{{axis(0.05, 2.0, 6), AxisGrid{1.0 / 6, 1.0, 6, Spacing::linear}}};
    const auto r = select_diagonal(pk, d, g);
    const auto o = oracle::brute_force_diagonal(pk, d, g.axes[0].values(), g.axes[1].values());
    EXPECT_EQ(r.best_H, BandwidthMatrix::diagonal({o.h11, o.h22}));
    EXPECT_NEAR(r.best_score, o.score, 1e-12 * o.score);
  }
}

TEST(SelectDiagonal, ScoreEqualsLscvScoreOfBest)
{
  std::mt19937_64 rng(6);
  const Dataset d = random_unit_data(rng, 15);
  const GridSpec g{{axis(0.01, 1.0, 7), axis(0.01, 1.0, 5)}};
  const auto r = select_diagonal(beta_beta(), d, g);
  double best = std::numeric_limits<double>::infinity();
  for (double a : g.axes[0].values())
    for (double b : g.axes[1].values())
      best = std::min(best, lscv_score(RegressorModel(beta_beta(), BandwidthMatrix::diagonal({a, b})), d).value);
  EXPECT_EQ(r.best_score, best);
  EXPECT_EQ(r.best_score,
            lscv_score(RegressorModel(beta_beta(), r.best_H), d).value);
}

TEST(SelectDiagonal, AllPenalizedThrows)
{
  const Dataset d({VariableKind::count()}, {0, 5, 10}, {1.0, 2.0, 3.0});
  const GridSpec g{{axis(0.1, 1.0, 4)}};
  try {
    select_diagonal(ProductKernel{{KernelSpec::discrete_triangular(1)}}, d, g);
    FAIL() << "expected selection_error";
  } catch (const selection_error& e) {
    EXPECT_EQ(e.skipped(), 4u);
  }
}

TEST(SelectDiagonal, SkippedCountsPenalizedCandidates)
{
  const Dataset d({VariableKind::continuous_unbounded()}, {0.0, 1.0, 2.0, 3.5}, {1.0, 2.0, 3.0, 4.0});
  const GridSpec g{{AxisGrid{0.5, 2.0, 4, Spacing::linear}}};
  const auto r = select_diagonal(ProductKernel{{KernelSpec::epanechnikov()}}, d, g);
  EXPECT_EQ(r.evaluated, 4u);
  EXPECT_EQ(r.skipped_undefined, 3u);
  EXPECT_EQ(r.best_H, BandwidthMatrix::diagonal({2.0}));
}

TEST(SelectDiagonal, MonotoneRefinement)
{
  std::mt19937_64 rng(7);
  const Dataset d = random_unit_data(rng, 12);
  const GridSpec coarse{{axis(0.01, 1.0, 3), axis(0.01, 1.0, 3)}};
  const GridSpec fine{{axis(0.01, 1.0, 5), axis(0.01, 1.0, 5)}};
  ASSERT_NEAR(fine.axes[0].values()[2], coarse.axes[0].values()[1], 1e-15);
  EXPECT_LE(select_diagonal(beta_beta(), d, fine).best_score,
            select_diagonal(beta_beta(), d, coarse).best_score * (1 + 1e-12));
}

TEST(SelectDiagonal, ParallelMatchesSerial)
{
  std::mt19937_64 rng(8);
  const Dataset d = random_unit_data(rng, 20);
  const GridSpec g{{axis(0.01, 1.0, 9), axis(0.01, 1.0, 9)}};
  const auto a = select_diagonal(beta_beta(), d, g, {1});
  const auto b = select_diagonal(beta_beta(), d, g, {4});
  EXPECT_EQ(a.best_H, b.best_H);
  EXPECT_EQ(a.best_score, b.best_score);
  EXPECT_EQ(a.skipped_undefined, b.skipped_undefined);
}

TEST(SelectDiagonal, TieBreakPrefersSmallerBandwidths)
{
  const Dataset d = Dataset({unit_kind, unit_kind}, {0.2, 0.3, 0.6, 0.7, 0.4, 0.9}, {4.0, 4.0, 4.0});
  const GridSpec g{{axis(0.1, 1.0, 3), axis(0.1, 1.0, 3)}};
  const auto r = select_diagonal(beta_beta(), d, g);
  EXPECT_EQ(r.best_H, BandwidthMatrix::diagonal({0.1, 0.1}));
}

TEST(H12Candidates, MidpointRule)
{
  const auto c = h12_candidates(Interval{-1.0, 1.0}, 4, false);
  EXPECT_EQ(c, (std::vector<double>{-0.75, -0.25, 0.25, 0.75}));
  const auto z = h12_candidates(Interval{-1.0, 1.0}, 4, true);
  EXPECT_EQ(z, (std::vector<double>{-0.75, -0.25, 0.0, 0.25, 0.75}));
  EXPECT_EQ(h12_candidates(Interval{-1.0, 1.0}, 1, false), std::vector<double>{0.0});
  EXPECT_EQ(h12_candidates(Interval{0.0, 0.0}, 5, false), std::vector<double>{0.0});
  EXPECT_THROW(h12_candidates(Interval{-1.0, 1.0}, 0, false), config_error);
}

TEST(CommonInterval, IsInsideEveryTargetInterval)
{
  std::mt19937_64 rng(9);
  const Dataset d = random_unit_data(rng, 25);
  const Interval c = common_h12_interval(d, 0.2, 0.35);
  EXPECT_TRUE(c.contains(0.0));
  for (std::size_t i = 0; i < d.n(); ++i) {
    const Interval iv = admissible_h12_interval(d.at(i, 0), d.at(i, 1), 0.2, 0.35);
    EXPECT_GE(c.lo, iv.lo);
    EXPECT_LE(c.hi, iv.hi);
  }
}

TEST(SelectFull2x2, MatchesBruteForce)
{
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = random_unit_data(rng, 8);
    GridSpec g{{axis(0.05, 0.6, 2), axis(0.1, 0.8, 2)}};
    g.h12_count = 3;
    const auto r = select_full_2x2(d, g);
    const auto o = oracle::brute_force_full(d, g.axes[0].values(), g.axes[1].values(), 3);
    EXPECT_EQ(r.best_H.diag(0), o.h11);
    EXPECT_EQ(r.best_H.diag(1), o.h22);
    EXPECT_NEAR(r.best_H.h12(), o.h12, 1e-12 * std::max(1e-3, std::abs(o.h12)));
    EXPECT_NEAR(r.best_score, o.score, 1e-12 * o.score);
    EXPECT_EQ(r.evaluated, o.evaluated);
    EXPECT_EQ(r.evaluated, 12u);
  }
}

TEST(SelectFull2x2, EvaluatedCountsIntervalSubdivisions)
{
  std::mt19937_64 rng(11);
  const Dataset d = random_unit_data(rng, 10);
  GridSpec g{{axis(0.01, 1.0, 4), axis(0.01, 1.0, 3)}};
  g.h12_count = 5;
  const auto r = select_full_2x2(d, g);
  std::size_t expected = 0;
  for (double a : g.axes[0].values())
    for (double b : g.axes[1].values())
      expected += h12_candidates(common_h12_interval(d, a, b), 5, false).size();
  EXPECT_EQ(r.evaluated, expected);
}

TEST(SelectFull2x2, ZeroPlaneScoresNoWorseThanDiagonal)
{
  std::mt19937_64 rng(12);
  const Dataset d = random_unit_data(rng, 15);
  GridSpec g{{axis(0.02, 1.0, 5), axis(0.02, 1.0, 5)}};
  g.h12_count = 4;
  g.h12_include_zero = true;
  const auto full = select_full_2x2(d, g);
  const auto diag = select_diagonal(beta_beta(), d, g);
  EXPECT_LE(full.best_score, diag.best_score);
}

TEST(SelectFull2x2, SingleMidpointFallsBackToDiagonal)
{
  const Dataset d({unit_kind, unit_kind}, {0.2, 0.2, 0.8, 0.8, 0.2, 0.8, 0.8, 0.2, 0.5, 0.5},
                  {1.0, 2.0, 1.5, 3.0, 0.5});
  GridSpec g{{axis(0.05, 1.0, 4), axis(0.05, 1.0, 4)}};
  g.h12_count = 1;
  const auto full = select_full_2x2(d, g);
  const auto diag = select_diagonal(beta_beta(), d, g);
  EXPECT_NEAR(full.best_H.h12(), 0.0, 1e-15);
  EXPECT_EQ(full.best_H.diag(0), diag.best_H.diag(0));
  EXPECT_EQ(full.best_H.diag(1), diag.best_H.diag(1));
  EXPECT_NEAR(full.best_score, diag.best_score, 1e-13 * diag.best_score);
}

TEST(SelectFull2x2, ParallelMatchesSerial)
{
  std::mt19937_64 rng(13);
  const Dataset d = random_unit_data(rng, 20);
  GridSpec g{{axis(0.01, 1.0, 6), axis(0.01, 1.0, 6)}};
  const auto a = select_full_2x2(d, g, {1});
  const auto b = select_full_2x2(d, g, {3});
  EXPECT_EQ(a.best_H, b.best_H);
  EXPECT_EQ(a.best_score, b.best_score);
}

TEST(SelectFull2x2, RejectsNonUnitData)
{
  const Dataset d({VariableKind::count(), unit_kind}, {1, 0.5, 2, 0.3}, {1.0, 2.0});
  GridSpec g{{axis(0.1, 1.0, 2), axis(0.1, 1.0, 2)}};
  EXPECT_THROW(select_full_2x2(d, g), config_error);
}

TEST(DefaultGrid, FollowsKernelFamilies)
{
  const Dataset d({VariableKind::continuous_nonneg(), VariableKind::count(), VariableKind::count()},
                  {0.5, 1, 2, 4.5, 3, 0}, {1.0, 2.0});
  const ProductKernel pk{{KernelSpec::gamma(), KernelSpec::binomial(), KernelSpec::discrete_triangular(2)}};
  const GridSpec g = default_grid(pk, d);
  ASSERT_EQ(g.axes.size(), 3u);
  EXPECT_NEAR(g.axes[0].lo, 0.04, 1e-15);
  EXPECT_NEAR(g.axes[0].hi, 4.0, 1e-15);
  EXPECT_EQ(g.axes[0].spacing, Spacing::geometric);
  EXPECT_EQ(g.axes[1].hi, 1.0);
  EXPECT_EQ(g.axes[1].spacing, Spacing::linear);
  EXPECT_EQ(g.axes[2].lo, 0.01);
  EXPECT_EQ(g.axes[2].hi, 5.0);
  for (const auto& a : g.axes)
    EXPECT_EQ(a.count, 20u);
}
