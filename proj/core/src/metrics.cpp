#include "akreg/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace akreg {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size())
    throw std::domain_error("metric inputs differ in length");
  if (a.empty())
    throw std::domain_error("metric inputs are empty");
}

double mean_squared_difference(std::span<const double> a, std::span<const double> b)
{
  check_lengths(a, b);
  double sse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = a[i] - b[i];
    sse += r * r;
  }
  return sse / static_cast<double>(a.size());
}

} // namespace

double ase(std::span<const double> true_m, std::span<const double> fitted)
{
  return mean_squared_difference(true_m, fitted);
}

double rmse(std::span<const double> y, std::span<const double> fitted)
{
  return std::sqrt(mean_squared_difference(y, fitted));
}

double r2(std::span<const double> y, std::span<const double> fitted)
{
  check_lengths(y, fitted);
  double ybar = 0.0;
  for (double v : y)
    ybar += v;
  ybar /= static_cast<double>(y.size());
  double explained = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    explained += (fitted[i] - ybar) * (fitted[i] - ybar);
    total += (y[i] - ybar) * (y[i] - ybar);
  }
  if (total == 0.0)
    throw std::domain_error("R2 is undefined for constant responses");
  return explained / total;
}

std::vector<double> defined_values(std::span<const Prediction> fitted)
{
  std::vector<double> out;
  out.reserve(fitted.size());
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    if (!fitted[i].defined())
      throw std::domain_error("prediction " + std::to_string(i) + " is undefined (zero kernel weight)");
    out.push_back(*fitted[i].value);
  }
  return out;
}

double ase(std::span<const double> true_m, std::span<const Prediction> fitted)
{
  return ase(true_m, defined_values(fitted));
}

double rmse(std::span<const double> y, std::span<const Prediction> fitted)
{
  return rmse(y, defined_values(fitted));
}

double r2(std::span<const double> y, std::span<const Prediction> fitted)
{
  return r2(y, defined_values(fitted));
}

} // namespace akreg
