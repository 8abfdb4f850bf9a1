#pragma once

#include "akreg/kernels.hpp"
#include "akreg/multikernel.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace akreg {

//! n observations of (regressor vector, response) with per-column kinds.
//! Regressors are stored row-major.
class Dataset
{
public:
  Dataset() = default;
  //! Throws data_error if shapes disagree or a value is outside its column's
  //! kind.
  Dataset(std::vector<VariableKind> kinds, std::vector<double> x, std::vector<double> y,
          std::vector<std::string> names = {}, std::string response_name = "y");

  std::size_t n() const { return y_.size(); }
  std::size_t d() const { return kinds_.size(); }

  std::span<const double> row(std::size_t i) const { return {x_.data() + i * d(), d()}; }
  double at(std::size_t i, std::size_t j) const { return x_[i * d() + j]; }
  std::span<const double> y() const { return y_; }
  std::span<const double> x_values() const { return x_; }
  const std::vector<VariableKind>& kinds() const { return kinds_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& response_name() const { return response_name_; }

  std::vector<double> column(std::size_t j) const;

  //! Copy with responses replaced.
  Dataset with_responses(std::vector<double> y) const;
  //! Copy with rows taken in the given order (indices may repeat).
  Dataset select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

private:
  std::vector<VariableKind> kinds_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<std::string> names_;
  std::string response_name_;
};

//! A Nadaraya-Watson prediction. `value` is empty exactly when every kernel
//! weight is zero. The total weight is kept on the log scale so that tiny
//! but positive weights never read as zero.
struct Prediction
{
  std::optional<double> value;
  double log_total_weight = -std::numeric_limits<double>::infinity();

  bool defined() const { return value.has_value(); }
  double total_weight() const { return std::exp(log_total_weight); }
};

//! Kernel (product or beta-Sarmanov) plus its bandwidth matrix.
class RegressorModel
{
public:
  using Kernel = std::variant<ProductKernel, SarmanovBetaKernel>;

  //! Throws std::domain_error if kernel and bandwidth shapes disagree
  //! (product needs a diagonal H of matching dimension, Sarmanov a full 2x2).
  RegressorModel(Kernel kernel, BandwidthMatrix H);

  const Kernel& kernel() const { return kernel_; }
  const BandwidthMatrix& bandwidth() const { return H_; }
  std::size_t dim() const { return H_.dim(); }
  bool is_sarmanov() const { return std::holds_alternative<SarmanovBetaKernel>(kernel_); }
  std::string label() const;

  //! Throws std::domain_error if the data columns are incompatible with
  //! the kernel.
  void check_compatible(const Dataset& data) const;
  //! Throws std::domain_error if x is not a legal target (including h12
  //! admissibility for the Sarmanov kernel).
  void check_target(std::span<const double> x) const;

  //! log K_{x,H}(u) without legality checks.
  double log_weight(std::span<const double> x, std::span<const double> u) const;

private:
  Kernel kernel_;
  BandwidthMatrix H_;
};

//! Weighted average given log weights; entry `skip` (if any) is excluded.
//! Weights are shifted by their maximum before exponentiation.
Prediction weighted_average(std::span<const double> log_weights, std::span<const double> y,
                            std::optional<std::size_t> skip = std::nullopt);

Prediction predict(const RegressorModel& model, const Dataset& data, std::span<const double> x);

//! Leave-one-out prediction at observation i. Requires n >= 2.
Prediction predict_loo(const RegressorModel& model, const Dataset& data, std::size_t i);

//! Full-sample predictions at every observed X_i.
std::vector<Prediction> fit_all(const RegressorModel& model, const Dataset& data);

} // namespace akreg
