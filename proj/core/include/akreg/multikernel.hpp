#pragma once

#include "akreg/kernels.hpp"

#include <span>
#include <string>
#include <vector>

namespace akreg {

//! Symmetric positive-definite bandwidth matrix, stored either as a
//! diagonal of any dimension or as a full 2x2 matrix.
class BandwidthMatrix
{
public:
  static BandwidthMatrix diagonal(std::vector<double> diag);
  //! Requires h11, h22 > 0 and h12^2 < h11 * h22.
  static BandwidthMatrix full2x2(double h11, double h22, double h12);

  std::size_t dim() const { return diag_.size(); }
  bool is_diagonal() const { return !full_; }
  double diag(std::size_t j) const { return diag_.at(j); }
  const std::vector<double>& diagonal_entries() const { return diag_; }
  //! Off-diagonal entry; zero for diagonal storage.
  double h12() const { return h12_; }

  std::string str() const;

  friend bool operator==(const BandwidthMatrix&, const BandwidthMatrix&) = default;

private:
  BandwidthMatrix(std::vector<double> diag, bool full, double h12)
    : diag_(std::move(diag))
    , full_(full)
    , h12_(h12)
  {}
  std::vector<double> diag_;
  bool full_ = false;
  double h12_ = 0.0;
};

//! Product (multiple) associated kernel over mixed axes.
struct ProductKernel
{
  std::vector<KernelSpec> specs;

  std::size_t dim() const { return specs.size(); }
  std::string label() const; // e.g. "BetaxBeta"
};

//! Bivariate beta kernel with Sarmanov correlation factor. Structure is
//! entirely carried by the attached full 2x2 bandwidth matrix.
struct SarmanovBetaKernel
{
  std::string label() const { return "BivariateBeta"; }
};

struct Interval
{
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

//! Relative margin by which the admissible h12 interval is kept inside the
//! open positive-definiteness interval.
inline constexpr double pd_shrink_margin = 1e-9;

//! Mean and scale of the beta factor used to standardize the Sarmanov term.
struct SarmanovStandardization
{
  double mu = 0.0;
  double sigma = 0.0;
};

//! Product kernel density at u for targets x and diagonal bandwidth H.
//! Throws std::domain_error on dimension mismatch, non-diagonal H or illegal
//! (x_j, h_jj).
double product_pdf(const ProductKernel& pk, std::span<const double> x,
                   const BandwidthMatrix& H, std::span<const double> u);
double product_log_pdf(const ProductKernel& pk, std::span<const double> x,
                       const BandwidthMatrix& H, std::span<const double> u);

SarmanovStandardization sarmanov_standardization(double x, double h);

//! Standardized factor (u - mu) / (sqrt(h) sigma) of one coordinate.
double sarmanov_factor(double x, double h, double u);

//! Log of the correlation term 1 + h12 t1 t2; the same expression is used by
//! every evaluation path so that h12 = 0 reproduces the product kernel
//! bit for bit.
inline double sarmanov_log_term(double h12, double t1, double t2)
{
  const double v = 1.0 + h12 * (t1 * t2);
  return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

//! Closed interval of h12 values keeping the beta-Sarmanov kernel a density
//! at target x, intersected with the (shrunken) positive-definiteness
//! interval. Extremes of the bilinear standardized product are taken over the
//! four corners of [0,1]^2. Returns {0, 0} if the intersection is empty.
Interval admissible_h12_interval(double x1, double x2, double h11, double h22);

//! Raw (before the PD intersection) bounds: lo = -beta, hi = beta'.
Interval sarmanov_raw_bounds(double x1, double x2, double h11, double h22);

//! Beta-Sarmanov density. Throws std::domain_error if H is not full 2x2,
//! the targets are outside [0,1] or h12 is not admissible at x.
double sarmanov_pdf(std::span<const double> x, const BandwidthMatrix& H,
                    std::span<const double> u);
double sarmanov_log_pdf(std::span<const double> x, const BandwidthMatrix& H,
                        std::span<const double> u);

} // namespace akreg
