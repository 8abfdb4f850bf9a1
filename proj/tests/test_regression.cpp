#include "akreg/errors.hpp"
#include "akreg/regression.hpp"
#include "oracles.hpp"
#include "property_checks.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace akreg;

namespace {

const VariableKind unit_kind = VariableKind::continuous_unit();

RegressorModel beta_model(double h1, double h2)
{
  return RegressorModel(ProductKernel{{KernelSpec::beta(), KernelSpec::beta()}},
                        BandwidthMatrix::diagonal({h1, h2}));
}

Dataset small_unit_data()
{
  return Dataset({unit_kind, unit_kind}, {0.1, 0.2, 0.5, 0.4, 0.9, 0.8, 0.3, 0.7, 0.6, 0.1},
                 {1.0, 2.0, 4.0, 3.0, 2.5});
}

} // namespace

TEST(Dataset, ValidatesShapesAndKinds)
{
  EXPECT_THROW(Dataset({unit_kind}, {0.1, 0.2}, {1.0}), data_error);
  EXPECT_THROW(Dataset({unit_kind}, {1.5}, {1.0}), data_error);
  EXPECT_THROW(Dataset({VariableKind::count()}, {2.5}, {1.0}), data_error);
  const Dataset d = small_unit_data();
  EXPECT_EQ(d.n(), 5u);
  EXPECT_EQ(d.d(), 2u);
  EXPECT_EQ(d.at(2, 1), 0.8);
  EXPECT_EQ(d.names()[1], "x2");
  EXPECT_EQ(d.column(0), (std::vector<double>{0.1, 0.5, 0.9, 0.3, 0.6}));
}

TEST(RegressorModel, ShapeChecks)
{
  EXPECT_THROW(RegressorModel(ProductKernel{{KernelSpec::beta()}}, BandwidthMatrix::diagonal({0.1, 0.1})),
               std::domain_error);
  EXPECT_THROW(RegressorModel(SarmanovBetaKernel{}, BandwidthMatrix::diagonal({0.1, 0.1})),
               std::domain_error);
  EXPECT_THROW(RegressorModel(ProductKernel{{KernelSpec::binomial()}}, BandwidthMatrix::diagonal({1.5})),
               std::domain_error);
  const auto m = beta_model(0.2, 0.2);
  const Dataset counts({VariableKind::count(), VariableKind::count()}, {1, 2}, {1.0});
  EXPECT_THROW(m.check_compatible(counts), std::domain_error);
  EXPECT_THROW(predict(m, small_unit_data(), std::vector<double>{0.5}), std::domain_error);
  EXPECT_EQ(m.label(), "BetaxBeta");
}

TEST(Predict, ConstantResponses)
{
  const Dataset d = small_unit_data().with_responses({3.5, 3.5, 3.5, 3.5, 3.5});
  const auto p = predict(beta_model(0.3, 0.3), d, std::vector<double>{0.42, 0.77});
  ASSERT_TRUE(p.defined());
  EXPECT_NEAR(*p.value, 3.5, 1e-14);
  for (const auto& f : fit_all(beta_model(0.3, 0.3), d))
    EXPECT_NEAR(*f.value, 3.5, 1e-14);
}

TEST(Predict, SingleObservation)
{
  const Dataset d({unit_kind}, {0.4}, {7.25});
  const RegressorModel m(ProductKernel{{KernelSpec::beta()}}, BandwidthMatrix::diagonal({0.2}));
  EXPECT_EQ(*predict(m, d, std::vector<double>{0.9}).value, 7.25);
  const auto all = fit_all(m, d);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(*all[0].value, 7.25);
}

TEST(Predict, BinomialHandExample)
{
  const Dataset d({VariableKind::count()}, {0, 5}, {1.0, 3.0});
  const RegressorModel m(ProductKernel{{KernelSpec::binomial()}}, BandwidthMatrix::diagonal({0.5}));
  const auto p = predict(m, d, std::vector<double>{0});
  ASSERT_TRUE(p.defined());
  EXPECT_EQ(*p.value, 1.0);
  EXPECT_NEAR(p.total_weight(), 0.5, 1e-15);
}

TEST(Predict, UndefinedWhenNoWeight)
{
  const Dataset d({VariableKind::count()}, {0, 1}, {1.0, 3.0});
  const RegressorModel m(ProductKernel{{KernelSpec::discrete_triangular(1)}},
                         BandwidthMatrix::diagonal({0.5}));
  const auto p = predict(m, d, std::vector<double>{9});
  EXPECT_FALSE(p.defined());
  EXPECT_EQ(p.total_weight(), 0.0);
  EXPECT_THROW(predict(m, Dataset{}, std::vector<double>{0}), std::domain_error);
}

TEST(Predict, MatchesDirectOracle)
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::vector<double>> X;
    for (int i = 0; i < 15; ++i) {
      X.push_back({unit(rng), 4 * unit(rng)});
      x.insert(x.end(), X.back().begin(), X.back().end());
      y.push_back(unit(rng));
    }
    const Dataset d({unit_kind, VariableKind::continuous_nonneg()}, x, y);
    const double h1 = 0.05 + unit(rng), h2 = 0.05 + unit(rng);
    const RegressorModel m(ProductKernel{{KernelSpec::beta(), KernelSpec::gamma()}},
                           BandwidthMatrix::diagonal({h1, h2}));
    const oracle::Weight w = [&](const std::vector<double>& t, const std::vector<double>& u) {
      return oracle::beta(t[0], h1, u[0]) * oracle::gamma(t[1], h2, u[1]);
    };
    const std::vector<double> q{unit(rng), 4 * unit(rng)};
    const auto expected = oracle::nw(w, X, y, q);
    const auto p = predict(m, d, q);
    ASSERT_EQ(p.defined(), expected.has_value());
    EXPECT_NEAR(*p.value, *expected, 1e-12);
  }
}

TEST(PredictLoo, TwoPoints)
{
  const Dataset d({unit_kind}, {0.2, 0.6}, {1.0, 5.0});
  const RegressorModel m(ProductKernel{{KernelSpec::beta()}}, BandwidthMatrix::diagonal({0.3}));
  EXPECT_EQ(*predict_loo(m, d, 0).value, 5.0);
  EXPECT_EQ(*predict_loo(m, d, 1).value, 1.0);
  EXPECT_THROW(predict_loo(m, Dataset({unit_kind}, {0.2}, {1.0}), 0), std::domain_error);
  EXPECT_THROW(predict_loo(m, d, 2), std::out_of_range);
}

TEST(PredictLoo, DuplicatedRowsStayDefined)
{
  const Dataset d({VariableKind::count()}, {0, 4, 9, 0, 4, 9}, {1, 2, 3, 1, 2, 3});
  const RegressorModel m(ProductKernel{{KernelSpec::discrete_triangular(1)}},
                         BandwidthMatrix::diagonal({0.5}));
  for (std::size_t i = 0; i < d.n(); ++i) {
    const auto p = predict_loo(m, d, i);
    ASSERT_TRUE(p.defined());
    EXPECT_EQ(*p.value, d.y()[i]);
  }
  const Dataset single = d.select_rows(std::vector<std::size_t>{0, 1, 2});
  EXPECT_FALSE(predict_loo(m, single, 0).defined());
}

TEST(PredictLoo, MatchesRefitWithoutRow)
{
  const Dataset d = small_unit_data();
  const auto m = beta_model(0.15, 0.4);
  for (std::size_t i = 0; i < d.n(); ++i) {
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < d.n(); ++j)
      if (j != i)
        keep.push_back(j);
    const auto refit = predict(m, d.select_rows(keep), d.row(i));
    EXPECT_NEAR(*predict_loo(m, d, i).value, *refit.value, 1e-13);
  }
}

TEST(FitAll, AgreesWithPredictLoop)
{
  const Dataset d = small_unit_data();
  const RegressorModel m(SarmanovBetaKernel{}, BandwidthMatrix::full2x2(0.3, 0.3, 0.01));
  const auto all = fit_all(m, d);
  for (std::size_t i = 0; i < d.n(); ++i)
    EXPECT_EQ(all[i].value, predict(m, d, d.row(i)).value);
}

TEST(Sarmanov, RejectsTargetWithInadmissibleCorrelation)
{
  const Dataset d = small_unit_data();
  const auto iv = admissible_h12_interval(0.5, 0.5, 0.3, 0.3);
  const double h12 = iv.lo;
  const auto iv_corner = admissible_h12_interval(0.0, 0.0, 0.3, 0.3);
  ASSERT_LT(h12, iv_corner.lo);
  const RegressorModel m(SarmanovBetaKernel{}, BandwidthMatrix::full2x2(0.3, 0.3, h12));
  EXPECT_NO_THROW(predict(m, d, std::vector<double>{0.5, 0.5}));
  EXPECT_THROW(predict(m, d, std::vector<double>{0.0, 0.0}), std::domain_error);
}

TEST(WeightedAverage, ExtremeLogWeights)
{
  const std::vector<double> lw{-1000.0, -1001.0, -std::numeric_limits<double>::infinity()};
  const std::vector<double> y{1.0, 2.0, 100.0};
  const auto p = weighted_average(lw, y);
  ASSERT_TRUE(p.defined());
  const double w1 = 1.0, w2 = std::exp(-1.0);
  EXPECT_NEAR(*p.value, (w1 + 2 * w2) / (w1 + w2), 1e-14);
  EXPECT_NEAR(p.log_total_weight, -1000.0 + std::log(w1 + w2), 1e-12);
  const auto skipped = weighted_average(lw, y, 0);
  EXPECT_NEAR(*skipped.value, 2.0, 1e-15);
}

TEST(Properties, ConvexCombination)
{
  EXPECT_EQ(props::convex_combination(101, 1000), 0u);
}

TEST(Properties, AffineEquivariance)
{
  EXPECT_EQ(props::affine_equivariance(102, 1000), 0u);
}

TEST(Properties, PermutationInvariance)
{
  EXPECT_EQ(props::permutation_invariance(103, 1000), 0u);
}

TEST(Properties, SarmanovZeroCorrelationIdentity)
{
  EXPECT_EQ(props::sarmanov_zero_identity(104, 1000), 0u);
}

TEST(Properties, InteriorWeightPositivity)
{
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 10; ++i) {
      x.push_back(unit(rng));
      x.push_back(3 * unit(rng));
      y.push_back(unit(rng));
    }
    const Dataset d({unit_kind, VariableKind::continuous_nonneg()}, x, y);
    const RegressorModel m(ProductKernel{{KernelSpec::beta(), KernelSpec::gamma()}},
                           BandwidthMatrix::diagonal({0.01 + unit(rng), 0.01 + unit(rng)}));
    const auto p = predict(m, d, std::vector<double>{0.05 + 0.9 * unit(rng), 3 * unit(rng)});
    EXPECT_TRUE(p.defined());
    EXPECT_GT(p.log_total_weight, -std::numeric_limits<double>::infinity());
  }
}
