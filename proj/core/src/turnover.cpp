#include "akreg/io.hpp"

#include <array>

namespace akreg {

namespace {

struct TurnoverRow
{
  double like_company; // percent
  double like_product; // percent
  double turnover;
};

// Survey of 80 branches, listed column block by column block as published.
constexpr std::array<TurnoverRow, 80> turnover_rows{{
  {68.1, 54.6, 0.8},
  {60.8, 4.4, 1.3},
  {34.4, 36.2, 1.2},
  {59.4, 27.5, 1.3},
  {4.7, 81.0, 2.9},
  {19.9, 97.4, 1.2},
  {20.6, 73.6, 2.4},
  {16.4, 42.9, 1.1},
  {29.9, 74.4, 2.0},
  {84.8, 26.6, 1.6},
  {46.1, 66.9, 1.2},
  {10.2, 86.3, 2.5},
  {89.4, 32.5, 1.6},
  {30.9, 46.3, 1.1},
  {24.3, 37.8, 1.2},
  {27.4, 74.6, 1.9},
  {47.7, 61.7, 1.1},
  {33.1, 83.8, 1.5},
  {0.3, 83.3, 3.0},
  {76.9, 35.4, 1.2},
  {29.5, 44.6, 1.3},
  {19.6, 67.7, 1.9},
  {96.2, 26.1, 1.7},
  {85.9, 28.0, 1.5},
  {5.6, 39.1, 1.1},
  {99.9, 7.15, 1.3},
  {61.0, 31.1, 1.4},
  {80.3, 9.1, 1.5},
  {23.1, 83.1, 2.3},
  {16.9, 90.4, 2.0},
  {9.4, 79.2, 2.8},
  {55.8, 21.9, 1.3},
  {27.5, 75.0, 2.2},
  {59.1, 12.9, 1.4},
  {2.7, 93.9, 2.4},
  {13.9, 56.9, 1.4},
  {14.0, 92.9, 2.1},
  {22.9, 43.9, 1.1},
  {53.8, 56.2, 1.0},
  {23.7, 61.5, 1.5},
  {39.6, 67.2, 1.4},
  {59.5, 45.1, 0.9},
  {17.3, 81.2, 2.6},
  {93.7, 28.5, 1.5},
  {28.7, 82.7, 2.0},
  {61.3, 70.9, 0.6},
  {67.1, 24.0, 1.7},
  {85.8, 36.5, 1.2},
  {35.5, 76.9, 1.8},
  {18.8, 55.9, 1.3},
  {50.4, 17.7, 1.4},
  {67.2, 8.7, 1.5},
  {13.1, 59.4, 1.7},
  {13.7, 75.8, 2.5},
  {78.6, 31.0, 1.6},
  {44.9, 3.2, 1.0},
  {78.2, 13.9, 1.8},
  {60.2, 35.2, 1.1},
  {65.6, 26.1, 1.6},
  {74.4, 12.6, 1.6},
  {83.5, 13.3, 1.8},
  {10.9, 83.5, 2.6},
  {27.0, 77.1, 2.2},
  {3.1, 67.0, 2.2},
  {14.8, 72.9, 2.5},
  {80.6, 16.5, 1.6},
  {64.1, 28.6, 1.5},
  {15.6, 90.5, 2.0},
  {3.9, 68.6, 2.5},
  {66.9, 43.7, 0.9},
  {1.5, 65.8, 2.3},
  {35.6, 43.7, 1.0},
  {13.9, 25.0, 0.8},
  {13.2, 70.8, 2.2},
  {34.5, 73.7, 1.8},
  {55.6, 6.9, 1.3},
  {30.7, 9.1, 0.9},
  {43.5, 15.1, 1.0},
  {31.5, 36.7, 1.2},
  {30.0, 21.5, 0.8},
}};

} // namespace

Dataset turnover_dataset()
{
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(2 * turnover_rows.size());
  for (const auto& r : turnover_rows) {
    x.push_back(r.like_company / 100.0);
    x.push_back(r.like_product / 100.0);
    y.push_back(r.turnover);
  }
  return Dataset({VariableKind::continuous_unit(), VariableKind::continuous_unit()},
                 std::move(x), std::move(y), {"x1", "x2"}, "y");
}

Schema turnover_schema()
{
  return Schema::parse("x1:regressor:unit:beta, x2:regressor:unit:beta, y:response");
}

} // namespace akreg
