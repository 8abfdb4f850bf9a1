#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace akreg {

//! Measure-space of a single regressor axis.
class VariableKind
{
public:
  enum class Type
  {
    continuous_unbounded,
    continuous_nonneg,
    continuous_unit,
    count,
    categorical
  };

  static VariableKind continuous_unbounded() { return VariableKind(Type::continuous_unbounded, 0); }
  static VariableKind continuous_nonneg() { return VariableKind(Type::continuous_nonneg, 0); }
  static VariableKind continuous_unit() { return VariableKind(Type::continuous_unit, 0); }
  static VariableKind count() { return VariableKind(Type::count, 0); }
  //! Categories are coded 0..c-1; requires c >= 2.
  static VariableKind categorical(int categories);

  Type type() const { return type_; }
  int categories() const { return categories_; }
  bool is_discrete() const { return type_ == Type::count || type_ == Type::categorical; }

  //! Whether `value` lies in the axis support T_1.
  bool contains(double value) const;

  std::string name() const;
  //! Parses "real", "nonneg", "unit", "count", "categorical:<c>".
  static VariableKind parse(const std::string& text);

  friend bool operator==(const VariableKind&, const VariableKind&) = default;

private:
  VariableKind(Type type, int categories)
    : type_(type)
    , categories_(categories)
  {}
  Type type_;
  int categories_;
};

//! Support of a univariate kernel. Discrete supports are the integers in
//! [lo, hi]; continuous ones the closed interval [lo, hi] (hi may be +inf).
struct Support
{
  bool discrete = false;
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double u) const
  {
    if (u < lo || u > hi)
      return false;
    return !discrete || std::floor(u) == u;
  }
  friend bool operator==(const Support&, const Support&) = default;
};

//! A univariate associated kernel family together with its structural
//! parameters (arm for the discrete triangular kernel, category count for
//! DiracDU).
class KernelSpec
{
public:
  enum class Family
  {
    binomial,
    discrete_triangular,
    dirac_du,
    epanechnikov,
    gamma,
    beta
  };

  static KernelSpec binomial() { return KernelSpec(Family::binomial, 0, 0); }
  static KernelSpec discrete_triangular(int arm);
  static KernelSpec dirac_du(int categories);
  static KernelSpec epanechnikov() { return KernelSpec(Family::epanechnikov, 0, 0); }
  static KernelSpec gamma() { return KernelSpec(Family::gamma, 0, 0); }
  static KernelSpec beta() { return KernelSpec(Family::beta, 0, 0); }

  Family family() const { return family_; }
  int arm() const { return arm_; }
  int categories() const { return categories_; }
  bool is_discrete() const;

  //! The variable kind this family is built for.
  VariableKind compatible_kind() const;
  //! True when the kernel may be applied to data of `kind`. Besides the
  //! native pairing, DiracDU is accepted on count axes (with values below
  //! its category count) and Epanechnikov on every kind.
  bool accepts(const VariableKind& kind) const;

  //! Largest legal bandwidth (1 for binomial and DiracDU, +inf otherwise).
  double max_bandwidth() const;

  //! Short label: Bin, DTr2, DirDU, Epan, Gamma, Beta.
  std::string label() const;
  //! Parseable form: bin, dtr:<a>, dirdu:<c>, epan, gamma, beta.
  std::string token() const;
  //! Parses "bin", "dtr<a>" / "dtr:<a>", "dirdu:<c>", "epan", "gamma", "beta"
  //! (case-insensitive).
  static KernelSpec parse(const std::string& text);

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

private:
  KernelSpec(Family family, int arm, int categories)
    : family_(family)
    , arm_(arm)
    , categories_(categories)
  {}
  Family family_;
  int arm_;
  int categories_;
};

//! Mean shift a(x,h) = E[Z] - x and variance b(x,h) of the kernel law.
struct KernelDiagnostics
{
  double mean_shift = 0.0;
  double variance = 0.0;
  //! Total mass; 1 up to summation/quadrature error.
  double mass = 0.0;
};

//! Throws std::domain_error when (x, h) is not a legal target/bandwidth pair
//! for the family.
void check_legal(const KernelSpec& spec, double x, double h);
bool is_legal(const KernelSpec& spec, double x, double h) noexcept;

Support support(const KernelSpec& spec, double x, double h);

// Density/mass functions. Arguments are assumed legal; values outside the
// support are exactly zero.
double pdf_binomial(int x, double h, double u);
double pdf_discrete_triangular(int x, double h, int arm, double u);
double pdf_dirac_du(int x, double h, int categories, double u);
double pdf_epanechnikov(double x, double h, double u);
double pdf_gamma(double x, double h, double u);
double pdf_beta(double x, double h, double u);

//! Log density; -inf outside the support. Gamma and beta are evaluated
//! through log-gamma so small bandwidths do not overflow.
double log_pdf(const KernelSpec& spec, double x, double h, double u);

//! Kernel density at u for target x and bandwidth h (legality checked).
double pdf(const KernelSpec& spec, double x, double h, double u);

//! Normalizing constant of the discrete triangular kernel,
//! (2a+1)(a+1)^h - 2 sum_{k=1}^a k^h.
double discrete_triangular_norm(int arm, double h);

//! Mean shift and variance of the kernel law: exact summation for discrete
//! families, adaptive Gauss-Kronrod quadrature (tolerance 1e-10) otherwise.
//! Throws numeric_error if quadrature does not converge.
KernelDiagnostics kernel_moments(const KernelSpec& spec, double x, double h);

//! Integral (or sum) of the kernel over its support.
double kernel_mass(const KernelSpec& spec, double x, double h);

} // namespace akreg
