#pragma once

// Closed-form finite-conductivity corrections to the Casimir force, as a
// power series in the relative penetration depth delta0 / a up to fourth
// order, for plates and for a sphere above a plate.

#include <array>
#include <string_view>
#include <vector>

namespace casimir {

enum class GeometryKind { plates, sphere };

std::string_view to_string(GeometryKind geometry);

struct SeriesCoefficients {
  GeometryKind geometry;
  std::array<double, 4> c; // c[k-1] multiplies (delta0 / a)^k
};

/// Exact coefficients:
///   plates: -16/3, 24, -(640/7)(1 - pi^2/210), (2800/9)(1 - 163 pi^2/7350)
///   sphere: -4, 72/5, -(320/7)(1 - pi^2/210), (400/3)(1 - 163 pi^2/7350)
SeriesCoefficients series_coefficients(GeometryKind geometry);

/// Ratios above this are far outside the range where the series means anything.
inline constexpr double series_ratio_limit = 0.5;

struct SeriesFactor {
  double value;
  bool outside_validity; // ratio > series_ratio_limit
};

/// 1 + sum_{k <= order} c_k ratio^k. Throws std::invalid_argument for
/// order outside 0..4 or a negative ratio.
SeriesFactor correction_factor_series(GeometryKind geometry, double ratio, int order);
SeriesFactor correction_factor_series(const SeriesCoefficients& coefficients, double ratio, int order);

struct PftResidual {
  int order;
  double residual; // |c_k(sphere) - 3/(3+k) c_k(plates)|
};

/// Checks that integrating the plate series over a and multiplying by 2 pi R
/// reproduces the sphere series term by term.
std::vector<PftResidual> pft_order_consistency();
std::vector<PftResidual> pft_order_consistency(const SeriesCoefficients& plates, const SeriesCoefficients& sphere);

/// Third- and fourth-order coefficients of the sphere-plate interpolation
/// formula the exact series is compared against.
inline constexpr double interpolation_c3 = -50.67;
inline constexpr double interpolation_c4 = 177.33;

struct InterpolationDiscrepancy {
  double absolute; // |delta c3 r^3 + delta c4 r^4|, in units of the ideal force
  double relative; // absolute / order-4 sphere factor
};

InterpolationDiscrepancy interpolation_comparison(double ratio);

} // namespace casimir
