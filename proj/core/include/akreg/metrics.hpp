#pragma once

#include "akreg/regression.hpp"

#include <optional>
#include <span>
#include <vector>

namespace akreg {

struct MetricReport
{
  std::optional<double> ase;
  double rmse = 0.0;
  double r2 = 0.0;
};

//! Average squared error (1/n) sum (m_i - fitted_i)^2.
double ase(std::span<const double> true_m, std::span<const double> fitted);
//! Root mean squared residual against observed responses.
double rmse(std::span<const double> y, std::span<const double> fitted);
//! Ratio form sum (fitted_i - ybar)^2 / sum (y_i - ybar)^2. Not clamped, so
//! it can exceed 1. Throws std::domain_error if the responses are constant.
double r2(std::span<const double> y, std::span<const double> fitted);

//! Values of a batch of predictions; throws std::domain_error if any is
//! undefined.
std::vector<double> defined_values(std::span<const Prediction> fitted);

double ase(std::span<const double> true_m, std::span<const Prediction> fitted);
double rmse(std::span<const double> y, std::span<const Prediction> fitted);
double r2(std::span<const double> y, std::span<const Prediction> fitted);

} // namespace akreg
