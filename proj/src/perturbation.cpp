#include "casimir/perturbation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "casimir/constants.hpp"

namespace casimir {

namespace {

constexpr double pi2 = constants::pi * constants::pi;
constexpr double third_order_bracket = 1.0 - pi2 / 210.0;
constexpr double fourth_order_bracket = 1.0 - 163.0 * pi2 / 7350.0;

} // namespace

std::string_view to_string(GeometryKind geometry) {
  return geometry == GeometryKind::plates ? "plates" : "sphere";
}

SeriesCoefficients series_coefficients(GeometryKind geometry) {
  if (geometry == GeometryKind::plates)
    return {geometry, {-16.0 / 3.0, 24.0, -640.0 / 7.0 * third_order_bracket, 2800.0 / 9.0 * fourth_order_bracket}};
  return {geometry, {-4.0, 72.0 / 5.0, -320.0 / 7.0 * third_order_bracket, 400.0 / 3.0 * fourth_order_bracket}};
}

SeriesFactor correction_factor_series(const SeriesCoefficients& coefficients, double ratio, int order) {
  if (order < 0 || order > 4) {
    std::ostringstream msg;
    msg << "series order must be in 0..4, got " << order;
    throw std::invalid_argument(msg.str());
  }
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) {
    std::ostringstream msg;
    msg << "delta0/a must be non-negative, got " << ratio;
    throw std::invalid_argument(msg.str());
  }
  double value = 1.0, power = 1.0;
  for (int k = 1; k <= order; ++k) {
    power *= ratio;
    value += coefficients.c[static_cast<std::size_t>(k - 1)] * power;
  }
  return {value, ratio > series_ratio_limit};
}

SeriesFactor correction_factor_series(GeometryKind geometry, double ratio, int order) {
  return correction_factor_series(series_coefficients(geometry), ratio, order);
}

std::vector<PftResidual> pft_order_consistency(const SeriesCoefficients& plates, const SeriesCoefficients& sphere) {
  // The k-th plate term scales as a^-(4+k); integrating over a from a to inf
  // and multiplying by 2 pi R, then normalizing by the ideal sphere force,
  // leaves the factor 3 / (3 + k).
  std::vector<PftResidual> out;
  for (int k = 1; k <= 4; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    out.push_back({k, std::abs(sphere.c[i] - 3.0 / (3.0 + k) * plates.c[i])});
  }
  return out;
}

std::vector<PftResidual> pft_order_consistency() {
  return pft_order_consistency(series_coefficients(GeometryKind::plates), series_coefficients(GeometryKind::sphere));
}

InterpolationDiscrepancy interpolation_comparison(double ratio) {
  if (!(ratio >= 0.0)) throw std::invalid_argument("delta0/a must be non-negative");
  const SeriesCoefficients sphere = series_coefficients(GeometryKind::sphere);
  const double r3 = ratio * ratio * ratio;
  const double absolute = std::abs((interpolation_c3 - sphere.c[2]) * r3 + (interpolation_c4 - sphere.c[3]) * r3 * ratio);
  const double factor = correction_factor_series(sphere, ratio, 4).value;
  return {absolute, absolute / factor};
}

} // namespace casimir
