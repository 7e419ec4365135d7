#include "casimir/analysis.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

namespace {

// Largest tolerated condition number of the column-scaled design matrix.
constexpr double max_condition = 1e10;

// Any wavelength works: the plasma-model factor depends on delta0 / a only.
constexpr double reference_wavelength = 100e-9;

void check_fit_grid(const std::vector<double>& ratios) {
  if (ratios.size() < fit_min_points) {
    std::ostringstream msg;
    msg << "coefficient fit needs at least " << fit_min_points << " grid points, got " << ratios.size();
    throw std::invalid_argument(msg.str());
  }
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!(ratios[i] > 0.0) || ratios[i] > fit_ratio_limit) {
      std::ostringstream msg;
      msg << "fit grid point " << ratios[i] << " outside (0, " << fit_ratio_limit << "]";
      throw std::invalid_argument(msg.str());
    }
    if (i > 0 && !(ratios[i] > ratios[i - 1])) throw std::invalid_argument("fit grid must be strictly increasing");
  }
}

} // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw std::invalid_argument("log_grid needs 0 < lo <= hi, count >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

double plasma_exact_factor(GeometryKind geometry, double ratio, const QuadratureSettings& settings) {
  const PlasmaModel plasma(reference_wavelength);
  const double a = plasma.penetration_depth() / ratio;
  const DielectricModel model = plasma;
  if (geometry == GeometryKind::plates) return pressure_plates_exact(model, a, settings).correction_factor;
  return force_sphere_exact(model, a, 1e3 * a, settings).correction_factor;
}

FitReport fit_series_coefficients(GeometryKind geometry, const std::vector<double>& ratios,
                                  const std::function<double(double)>& exact_factor) {
  check_fit_grid(ratios);
  const auto n = static_cast<Eigen::Index>(ratios.size());

  FitReport report{geometry, Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero(), ratios, {}, 0.0};
  report.factors.reserve(ratios.size());

  // Columns r^k scaled by r_max^k so the design matrix is O(1).
  const double r_max = ratios.back();
  Eigen::Vector4d scale;
  for (int k = 0; k < 4; ++k) scale(k) = std::pow(r_max, k + 1);

  Eigen::MatrixXd design(n, 4);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = ratios[static_cast<std::size_t>(i)];
    double factor = 0.0;
    try {
      factor = exact_factor(r);
    } catch (const ConvergenceError& e) {
      std::ostringstream msg;
      msg << "coefficient fit at delta0/a = " << r << ": " << e.what();
      throw ConvergenceError(msg.str(), e.best_value(), e.best_error());
    }
    report.factors.push_back(factor);
    rhs(i) = factor - 1.0;
    for (int k = 0; k < 4; ++k) design(i, k) = std::pow(r, k + 1) / scale(k);
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
  const auto& sigma = svd.singularValues();
  const double condition = sigma(0) / sigma(sigma.size() - 1);
  if (!std::isfinite(condition) || condition > max_condition) {
    std::ostringstream msg;
    msg << "ill-conditioned fit (condition number " << condition << "); use a wider delta0/a grid";
    throw std::runtime_error(msg.str());
  }

  const Eigen::Vector4d scaled = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd residual = rhs - design * scaled;
  const double rss = residual.squaredNorm();
  const double variance = rss / static_cast<double>(n - 4);
  const Eigen::Matrix4d normal_inverse = (design.transpose() * design).inverse();

  report.coefficients = scaled.cwiseQuotient(scale);
  report.uncertainty = (variance * normal_inverse.diagonal()).cwiseSqrt().cwiseQuotient(scale);
  report.residual_norm = std::sqrt(rss);
  return report;
}

FitReport extract_coefficients(GeometryKind geometry, const std::vector<double>& ratios,
                               const QuadratureSettings& settings) {
  return fit_series_coefficients(geometry, ratios,
                                 [&](double r) { return plasma_exact_factor(geometry, r, settings); });
}

std::vector<ComparisonRow> compare_series_vs_exact(const DielectricModel& model, GeometryKind geometry,
                                                   const std::vector<double>& a_grid,
                                                   const QuadratureSettings& settings,
                                                   std::optional<double> series_wavelength) {
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    if (!(a_grid[i] > 0.0)) throw DomainError("separations must be positive");
    if (i > 0 && !(a_grid[i] > a_grid[i - 1])) throw std::invalid_argument("separation grid must be increasing");
  }

  double wavelength = 0.0;
  if (series_wavelength) {
    wavelength = *series_wavelength;
  } else if (const auto* plasma = std::get_if<PlasmaModel>(&model)) {
    wavelength = plasma->plasma_wavelength();
  } else if (std::holds_alternative<TabulatedModel>(model)) {
    throw std::invalid_argument("series comparison for tabulated data needs a plasma wavelength");
  }
  if (!(wavelength >= 0.0)) throw DomainError("plasma wavelength must be non-negative");
  const double depth = wavelength / (2.0 * constants::pi);

  std::vector<ComparisonRow> rows;
  rows.reserve(a_grid.size());
  for (const double a : a_grid) {
    ComparisonRow row{};
    row.a = a;
    row.ratio = depth / a;
    row.order4 = correction_factor_series(geometry, row.ratio, 4).value;
    row.order2 = correction_factor_series(geometry, row.ratio, 2).value;
    row.warning = "none";
    if (row.ratio > series_ratio_limit) {
      row.warning = "ratio_gt_0.5";
    } else if (a < wavelength) {
      row.warning = "below_lambda_p";
    }
    try {
      row.exact = geometry == GeometryKind::plates ? pressure_plates_exact(model, a, settings).correction_factor
                                                   : force_sphere_exact(model, a, 1e3 * a, settings).correction_factor;
      row.dev4 = row.order4 - row.exact;
      row.dev2 = row.order2 - row.exact;
    } catch (const ConvergenceError& e) {
      row.failed = true;
      row.warning = "failed";
      row.message = e.what();
      row.exact = row.dev4 = row.dev2 = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace casimir
