#pragma once

// Independent checks of the perturbation series against the exact integrals:
// least-squares extraction of the series coefficients, and tabulated
// series-vs-exact comparisons over a separation grid.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "casimir/dielectric.hpp"
#include "casimir/perturbation.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

struct FitReport {
  GeometryKind geometry;
  Eigen::Vector4d coefficients; // fitted c1..c4
  Eigen::Vector4d uncertainty;  // one standard deviation each
  std::vector<double> ratios;   // delta0 / a, strictly increasing
  std::vector<double> factors;  // exact correction factor at each ratio
  double residual_norm;
};

/// Largest delta0 / a admitted into a fit.
inline constexpr double fit_ratio_limit = 0.02;
inline constexpr std::size_t fit_min_points = 8;

/// `count` log-spaced ratios from `lo` to `hi` inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Fits exact_factor(r) - 1 against {r, r^2, r^3, r^4} by ordinary least
/// squares. `exact_factor` maps delta0 / a to the correction factor.
FitReport fit_series_coefficients(GeometryKind geometry, const std::vector<double>& ratios,
                                  const std::function<double(double)>& exact_factor);

/// Same fit with the exact plasma-model factor from the Lifshitz integrals.
FitReport extract_coefficients(GeometryKind geometry, const std::vector<double>& ratios,
                               const QuadratureSettings& settings = {});

/// Exact correction factor for the plasma model as a function of delta0 / a
/// alone.
double plasma_exact_factor(GeometryKind geometry, double ratio, const QuadratureSettings& settings = {});

struct ComparisonRow {
  double a;     // m
  double ratio; // delta0 / a used by the series
  double exact;
  double order4;
  double order2;
  double dev4; // order4 - exact
  double dev2; // order2 - exact
  std::string warning; // "none", "below_lambda_p", "ratio_gt_0.5" or "failed"
  bool failed = false;
  std::string message; // failure context
};

/// Rows in grid order. Quadrature failures mark the row and the sweep goes on.
/// `series_wavelength` sets lambda_p for the series; it defaults to the
/// model's own (zero for the ideal conductor) and is required for tabulated
/// models.
std::vector<ComparisonRow> compare_series_vs_exact(const DielectricModel& model, GeometryKind geometry,
                                                   const std::vector<double>& a_grid,
                                                   const QuadratureSettings& settings = {},
                                                   std::optional<double> series_wavelength = std::nullopt);

} // namespace casimir
