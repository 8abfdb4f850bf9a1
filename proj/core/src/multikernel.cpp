#include "akreg/multikernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace akreg {

BandwidthMatrix BandwidthMatrix::diagonal(std::vector<double> diag)
{
  if (diag.empty())
    throw std::domain_error("bandwidth matrix needs dimension >= 1");
  for (double h : diag)
    if (!(h > 0.0) || !std::isfinite(h))
      throw std::domain_error("bandwidth diagonal entries must be finite and > 0");
  return BandwidthMatrix(std::move(diag), false, 0.0);
}

BandwidthMatrix BandwidthMatrix::full2x2(double h11, double h22, double h12)
{
  if (!(h11 > 0.0) || !(h22 > 0.0) || !std::isfinite(h11) || !std::isfinite(h22))
    throw std::domain_error("bandwidth diagonal entries must be finite and > 0");
  if (!std::isfinite(h12) || !(h12 * h12 < h11 * h22))
    throw std::domain_error("full bandwidth matrix is not positive definite");
  return BandwidthMatrix({h11, h22}, true, h12);
}

std::string BandwidthMatrix::str() const
{
  std::ostringstream os;
  os.precision(6);
  os << (full_ ? "Full[" : "Diag[");
  for (std::size_t j = 0; j < diag_.size(); ++j)
    os << (j ? ", " : "") << diag_[j];
  if (full_)
    os << "; h12=" << h12_;
  os << "]";
  return os.str();
}

std::string ProductKernel::label() const
{
  std::string out;
  for (std::size_t j = 0; j < specs.size(); ++j)
    out += (j ? "x" : "") + specs[j].label();
  return out;
}

namespace {

void check_product_shapes(const ProductKernel& pk, std::span<const double> x,
                          const BandwidthMatrix& H, std::span<const double> u)
{
  if (!H.is_diagonal())
    throw std::domain_error("product kernel requires a diagonal bandwidth matrix");
  if (pk.dim() != H.dim() || x.size() != pk.dim() || u.size() != pk.dim())
    throw std::domain_error("product kernel dimension mismatch");
  for (std::size_t j = 0; j < pk.dim(); ++j)
    check_legal(pk.specs[j], x[j], H.diag(j));
}

void check_sarmanov_shapes(std::span<const double> x, const BandwidthMatrix& H,
                           std::span<const double> u)
{
  if (H.is_diagonal() || H.dim() != 2)
    throw std::domain_error("beta-Sarmanov kernel requires a full 2x2 bandwidth matrix");
  if (x.size() != 2 || u.size() != 2)
    throw std::domain_error("beta-Sarmanov kernel is bivariate");
  for (std::size_t j = 0; j < 2; ++j)
    check_legal(KernelSpec::beta(), x[j], H.diag(j));
  const Interval ok = admissible_h12_interval(x[0], x[1], H.diag(0), H.diag(1));
  if (!ok.contains(H.h12()))
    throw std::domain_error("h12 outside the admissible Sarmanov interval");
}

} // namespace

double product_log_pdf(const ProductKernel& pk, std::span<const double> x,
                       const BandwidthMatrix& H, std::span<const double> u)
{
  check_product_shapes(pk, x, H, u);
  double acc = 0.0;
  for (std::size_t j = 0; j < pk.dim(); ++j)
    acc += log_pdf(pk.specs[j], x[j], H.diag(j), u[j]);
  return acc;
}

double product_pdf(const ProductKernel& pk, std::span<const double> x,
                   const BandwidthMatrix& H, std::span<const double> u)
{
  check_product_shapes(pk, x, H, u);
  double acc = 1.0;
  for (std::size_t j = 0; j < pk.dim(); ++j) {
    acc *= pdf(pk.specs[j], x[j], H.diag(j), u[j]);
    if (acc == 0.0)
      break;
  }
  return acc;
}

SarmanovStandardization sarmanov_standardization(double x, double h)
{
  const double denom = 1.0 + 2.0 * h;
  const double var = (x + h) * (1.0 + h - x) / (denom * denom) / (1.0 + 3.0 * h) * h;
  return {(x + h) / denom, std::sqrt(var)};
}

double sarmanov_factor(double x, double h, double u)
{
  const auto s = sarmanov_standardization(x, h);
  return (u - s.mu) / (std::sqrt(h) * s.sigma);
}

Interval sarmanov_raw_bounds(double x1, double x2, double h11, double h22)
{
  const std::array<double, 2> t1{sarmanov_factor(x1, h11, 0.0), sarmanov_factor(x1, h11, 1.0)};
  const std::array<double, 2> t2{sarmanov_factor(x2, h22, 0.0), sarmanov_factor(x2, h22, 1.0)};
  double pmax = -std::numeric_limits<double>::infinity();
  double pmin = std::numeric_limits<double>::infinity();
  for (double a : t1)
    for (double b : t2) {
      pmax = std::max(pmax, a * b);
      pmin = std::min(pmin, a * b);
    }
  // mu lies strictly inside (0,1), so t(0) < 0 < t(1): pmax > 0 > pmin.
  return {-1.0 / pmax, std::abs(1.0 / pmin)};
}

Interval admissible_h12_interval(double x1, double x2, double h11, double h22)
{
  check_legal(KernelSpec::beta(), x1, h11);
  check_legal(KernelSpec::beta(), x2, h22);
  const Interval raw = sarmanov_raw_bounds(x1, x2, h11, h22);
  const double pd = (1.0 - pd_shrink_margin) * std::sqrt(h11 * h22);
  Interval out{std::max(raw.lo, -pd), std::min(raw.hi, pd)};
  if (!(out.lo <= out.hi))
    return {0.0, 0.0};
  return out;
}

double sarmanov_log_pdf(std::span<const double> x, const BandwidthMatrix& H,
                        std::span<const double> u)
{
  check_sarmanov_shapes(x, H, u);
  const auto beta = KernelSpec::beta();
  const double base =
    log_pdf(beta, x[0], H.diag(0), u[0]) + log_pdf(beta, x[1], H.diag(1), u[1]);
  if (base == -std::numeric_limits<double>::infinity())
    return base;
  const double t1 = sarmanov_factor(x[0], H.diag(0), u[0]);
  const double t2 = sarmanov_factor(x[1], H.diag(1), u[1]);
  return base + sarmanov_log_term(H.h12(), t1, t2);
}

double sarmanov_pdf(std::span<const double> x, const BandwidthMatrix& H,
                    std::span<const double> u)
{
  check_sarmanov_shapes(x, H, u);
  if (u[0] < 0.0 || u[0] > 1.0 || u[1] < 0.0 || u[1] > 1.0)
    return 0.0;
  const double t1 = sarmanov_factor(x[0], H.diag(0), u[0]);
  const double t2 = sarmanov_factor(x[1], H.diag(1), u[1]);
  const double corr = 1.0 + H.h12() * (t1 * t2);
  return pdf_beta(x[0], H.diag(0), u[0]) * pdf_beta(x[1], H.diag(1), u[1]) * corr;
}

} // namespace akreg
