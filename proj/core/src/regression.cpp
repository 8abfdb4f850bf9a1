#include "akreg/regression.hpp"
#include "akreg/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace akreg {

Dataset::Dataset(std::vector<VariableKind> kinds, std::vector<double> x, std::vector<double> y,
                 std::vector<std::string> names, std::string response_name)
  : kinds_(std::move(kinds))
  , x_(std::move(x))
  , y_(std::move(y))
  , names_(std::move(names))
  , response_name_(std::move(response_name))
{
  if (kinds_.empty())
    throw data_error("dataset needs at least one regressor");
  if (x_.size() != y_.size() * kinds_.size())
    throw data_error("regressor matrix size does not match n x d");
  if (names_.empty()) {
    for (std::size_t j = 0; j < kinds_.size(); ++j)
      names_.push_back("x" + std::to_string(j + 1));
  }
  if (names_.size() != kinds_.size())
    throw data_error("regressor names do not match dimension");
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (!std::isfinite(y_[i]))
      throw data_error("non-finite response at row " + std::to_string(i + 1), i + 1,
                       response_name_);
    for (std::size_t j = 0; j < kinds_.size(); ++j)
      if (!kinds_[j].contains(at(i, j)))
        throw data_error("value " + std::to_string(at(i, j)) + " at row " +
                           std::to_string(i + 1) + ", column '" + names_[j] +
                           "' is outside kind " + kinds_[j].name(),
                         i + 1, names_[j]);
  }
}

std::vector<double> Dataset::column(std::size_t j) const
{
  std::vector<double> out(n());
  for (std::size_t i = 0; i < n(); ++i)
    out[i] = at(i, j);
  return out;
}

Dataset Dataset::with_responses(std::vector<double> y) const
{
  return Dataset(kinds_, x_, std::move(y), names_, response_name_);
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const
{
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(rows.size() * d());
  for (std::size_t r : rows) {
    if (r >= n())
      throw std::out_of_range("row index out of range");
    const auto src = row(r);
    x.insert(x.end(), src.begin(), src.end());
    y.push_back(y_[r]);
  }
  return Dataset(kinds_, std::move(x), std::move(y), names_, response_name_);
}

RegressorModel::RegressorModel(Kernel kernel, BandwidthMatrix H)
  : kernel_(std::move(kernel))
  , H_(std::move(H))
{
  if (const auto* pk = std::get_if<ProductKernel>(&kernel_)) {
    if (!H_.is_diagonal() || H_.dim() != pk->dim())
      throw std::domain_error("product kernel needs a diagonal bandwidth of matching dimension");
    for (std::size_t j = 0; j < pk->dim(); ++j)
      if (H_.diag(j) > pk->specs[j].max_bandwidth())
        throw std::domain_error("bandwidth above the legal range of " + pk->specs[j].label());
  } else if (H_.is_diagonal() || H_.dim() != 2) {
    throw std::domain_error("beta-Sarmanov kernel needs a full 2x2 bandwidth matrix");
  }
}

std::string RegressorModel::label() const
{
  return std::visit([](const auto& k) { return k.label(); }, kernel_);
}

void RegressorModel::check_compatible(const Dataset& data) const
{
  if (data.d() != dim())
    throw std::domain_error("dataset dimension does not match the kernel");
  if (const auto* pk = std::get_if<ProductKernel>(&kernel_)) {
    for (std::size_t j = 0; j < dim(); ++j)
      if (!pk->specs[j].accepts(data.kinds()[j]))
        throw std::domain_error(pk->specs[j].label() + " kernel cannot smooth column '" +
                                data.names()[j] + "' of kind " + data.kinds()[j].name());
  } else {
    for (const auto& k : data.kinds())
      if (k.type() != VariableKind::Type::continuous_unit)
        throw std::domain_error("beta-Sarmanov kernel needs unit-interval columns");
  }
}

void RegressorModel::check_target(std::span<const double> x) const
{
  if (x.size() != dim())
    throw std::domain_error("query dimension does not match the kernel");
  if (const auto* pk = std::get_if<ProductKernel>(&kernel_)) {
    for (std::size_t j = 0; j < dim(); ++j)
      check_legal(pk->specs[j], x[j], H_.diag(j));
  } else {
    const Interval ok = admissible_h12_interval(x[0], x[1], H_.diag(0), H_.diag(1));
    if (!ok.contains(H_.h12()))
      throw std::domain_error("h12 outside the admissible Sarmanov interval at the target");
  }
}

double RegressorModel::log_weight(std::span<const double> x, std::span<const double> u) const
{
  if (const auto* pk = std::get_if<ProductKernel>(&kernel_)) {
    double acc = 0.0;
    for (std::size_t j = 0; j < pk->dim(); ++j)
      acc += log_pdf(pk->specs[j], x[j], H_.diag(j), u[j]);
    return acc;
  }
  const auto beta = KernelSpec::beta();
  const double base =
    log_pdf(beta, x[0], H_.diag(0), u[0]) + log_pdf(beta, x[1], H_.diag(1), u[1]);
  if (base == -std::numeric_limits<double>::infinity())
    return base;
  return base + sarmanov_log_term(H_.h12(), sarmanov_factor(x[0], H_.diag(0), u[0]),
                                  sarmanov_factor(x[1], H_.diag(1), u[1]));
}

Prediction weighted_average(std::span<const double> log_weights, std::span<const double> y,
                            std::optional<std::size_t> skip)
{
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  double top = neg_inf;
  for (std::size_t k = 0; k < log_weights.size(); ++k)
    if (k != skip)
      top = std::max(top, log_weights[k]);
  if (top == neg_inf)
    return {};
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < log_weights.size(); ++k) {
    if (k == skip)
      continue;
    const double w = std::exp(log_weights[k] - top);
    num += w * y[k];
    den += w;
  }
  return {num / den, top + std::log(den)};
}

namespace {

Prediction predict_impl(const RegressorModel& model, const Dataset& data,
                        std::span<const double> x, std::optional<std::size_t> skip)
{
  model.check_compatible(data);
  model.check_target(x);
  std::vector<double> lw(data.n());
  for (std::size_t k = 0; k < data.n(); ++k)
    lw[k] = k == skip ? -std::numeric_limits<double>::infinity() : model.log_weight(x, data.row(k));
  return weighted_average(lw, data.y(), skip);
}

} // namespace

Prediction predict(const RegressorModel& model, const Dataset& data, std::span<const double> x)
{
  if (data.n() == 0)
    throw std::domain_error("cannot predict from an empty dataset");
  return predict_impl(model, data, x, std::nullopt);
}

Prediction predict_loo(const RegressorModel& model, const Dataset& data, std::size_t i)
{
  if (data.n() < 2)
    throw std::domain_error("leave-one-out prediction needs n >= 2");
  if (i >= data.n())
    throw std::out_of_range("leave-one-out index out of range");
  return predict_impl(model, data, data.row(i), i);
}

std::vector<Prediction> fit_all(const RegressorModel& model, const Dataset& data)
{
  std::vector<Prediction> out;
  out.reserve(data.n());
  for (std::size_t i = 0; i < data.n(); ++i)
    out.push_back(predict(model, data, data.row(i)));
  return out;
}

} // namespace akreg
