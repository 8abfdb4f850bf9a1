#pragma once

#include "akreg/multikernel.hpp"
#include "akreg/regression.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace akreg {

enum class Spacing
{
  linear,
  geometric
};

//! Candidate values of one diagonal bandwidth entry: `count` points from lo
//! to hi inclusive (a single point is lo).
struct AxisGrid
{
  double lo = 0.01;
  double hi = 1.0;
  std::size_t count = 20;
  Spacing spacing = Spacing::geometric;

  std::vector<double> values() const;
  //! Throws config_error unless 0 < lo <= hi, count >= 1.
  void validate() const;
};

//! Candidate sets for the least-squares cross-validation search. For the
//! beta-Sarmanov search, each admissible h12 interval is split into
//! `h12_count` equal cells whose midpoints are the candidates.
struct GridSpec
{
  std::vector<AxisGrid> axes;
  std::size_t h12_count = 5;
  //! Also try h12 = 0 when no midpoint is exactly zero.
  bool h12_include_zero = false;
};

struct SelectOptions
{
  //! Worker threads for candidate scoring; results do not depend on it.
  unsigned threads = 1;
};

//! Mean squared leave-one-out error. A bandwidth that leaves some held-out
//! row with zero total weight is penalized (value = +inf).
struct LscvScore
{
  double value = std::numeric_limits<double>::infinity();
  std::size_t undefined_rows = 0;
  bool penalized() const { return undefined_rows > 0; }
};

struct LscvResult
{
  BandwidthMatrix best_H = BandwidthMatrix::diagonal({1.0});
  double best_score = std::numeric_limits<double>::infinity();
  std::size_t evaluated = 0;
  //! Candidates rejected because some leave-one-out prediction was undefined.
  std::size_t skipped_undefined = 0;
};

LscvScore lscv_score(const RegressorModel& model, const Dataset& data);

//! Default candidate grid: continuous axes geometric on [0.01, 1] x column
//! range, binomial/DiracDU axes linear on [0.05, 1], discrete triangular
//! axes geometric on [0.01, 5]; 20 values each.
GridSpec default_grid(const ProductKernel& kernel, const Dataset& data,
                      std::size_t count = 20);
//! Default beta-Sarmanov grid: beta defaults on both axes, h12_count cells.
GridSpec default_sarmanov_grid(const Dataset& data, std::size_t count = 20,
                               std::size_t h12_count = 5);

//! Exhaustive search over the Cartesian product of diagonal axis grids.
//! Ties are broken towards smaller h11, then h22, and so on. Throws
//! selection_error if every candidate is penalized.
LscvResult select_diagonal(const ProductKernel& kernel, const Dataset& data,
                           const GridSpec& grid, const SelectOptions& options = {});

//! The h12 interval shared by every observed target for the given diagonal.
Interval common_h12_interval(const Dataset& data, double h11, double h22);

//! Candidate h12 values inside `interval` (midpoint rule).
std::vector<double> h12_candidates(const Interval& interval, std::size_t count,
                                   bool include_zero);

//! Full 2x2 search for the beta-Sarmanov kernel: for each (h11, h22) the h12
//! candidates come from the interval admissible at every observed target.
//! Ties are broken by h11, h22, |h12|, then negative h12 first.
LscvResult select_full_2x2(const Dataset& data, const GridSpec& grid,
                           const SelectOptions& options = {});

} // namespace akreg
