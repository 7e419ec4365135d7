#include "casimir/lifshitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

namespace {

using constants::hbar_c;
using constants::pi;

void require_separation(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    std::ostringstream msg;
    msg << "separation must be positive and finite, got " << a;
    throw DomainError(msg.str());
  }
}

// Imaginary frequency at the node (x, t = 1/p) for separation a.
double node_frequency(double x, double t, double a) { return constants::speed_of_light * x * t / (2.0 * a); }

// ln(1 - r e^-x), accurate for r -> 1 and x -> 0.
double log_one_minus(double x, double r, double one_minus_r) {
  const double w = r * std::exp(-x);
  if (w < 0.5) return std::log1p(-w);
  return std::log(-std::expm1(-x) + one_minus_r * std::exp(-x));
}

// e^x - r
double shifted_exp(double x, double one_minus_r) { return std::expm1(x) + one_minus_r; }

IntegralEstimate<double> run_2d(auto&& integrand, const QuadratureSettings& settings, const char* what) {
  try {
    return integrate_2d_compact<double>(integrand, settings);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string(what) + ": " + e.what(), e.best_value(), e.best_error());
  }
}

} // namespace

std::optional<std::string> check_geometry(const Geometry& geometry, double min_radius_ratio) {
  if (const auto* plates = std::get_if<PlatesGap>(&geometry)) {
    require_separation(plates->a);
    return std::nullopt;
  }
  const auto& sphere = std::get<SpherePlate>(geometry);
  require_separation(sphere.a);
  if (!(sphere.R > 0.0) || !std::isfinite(sphere.R)) {
    std::ostringstream msg;
    msg << "sphere radius must be positive and finite, got " << sphere.R;
    throw DomainError(msg.str());
  }
  if (sphere.R / sphere.a < min_radius_ratio) {
    std::ostringstream msg;
    msg << "R/a = " << sphere.R / sphere.a << " is below " << min_radius_ratio
        << "; proximity-force approximation may be inaccurate";
    return msg.str();
  }
  return std::nullopt;
}

ReflectionPair reflection_from_excess(double u, double p) {
  if (!(u >= 0.0) || !(p >= 1.0)) {
    std::ostringstream msg;
    msg << "reflection factors need eps >= 1 and p >= 1, got eps - 1 = " << u << ", p = " << p;
    throw DomainError(msg.str());
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (std::isinf(u)) return {1.0, 1.0, inf, 0.0, 0.0};

  const double s = std::hypot(std::sqrt(u), p);

  // q2 = (s - p)/(s + p) = u / (s + p)^2
  const double q2 = std::min((u / (s + p)) / (s + p), 1.0);
  const double one_minus_r2 = 4.0 * (p / (s + p)) * (s / (s + p));

  // With rho = s / (p eps): q1 = (rho - 1)/(rho + 1) and
  // 1 - rho^2 = (u / eps) (1 + (1 - 1/p^2) / eps), free of cancellation.
  const double e = 1.0 + u;
  const double rho = s / (p * e);
  const double one_minus_rho = (u / e) * (1.0 + (1.0 - 1.0 / (p * p)) / e) / (1.0 + rho);
  const double q1 = -std::min(one_minus_rho / (1.0 + rho), 1.0);
  const double one_minus_r1 = 4.0 * rho / ((1.0 + rho) * (1.0 + rho));

  return {q1 * q1, q2 * q2, s, one_minus_r1, one_minus_r2};
}

ReflectionPair reflection_pair(double eps, double p) {
  if (!(eps >= 1.0)) {
    std::ostringstream msg;
    msg << "permittivity on the imaginary axis must be >= 1, got " << eps;
    throw DomainError(msg.str());
  }
  return reflection_from_excess(eps - 1.0, p);
}

ReflectionSensitivity reflection_sensitivity(double u, double p) {
  if (!(u >= 0.0) || !(p >= 1.0)) throw DomainError("reflection sensitivity needs eps >= 1 and p >= 1");
  if (std::isinf(u) || u == 0.0) return {0.0, 0.0};

  const double s = std::hypot(std::sqrt(u), p);
  const double e = 1.0 + u;
  const double rho = s / (p * e);
  const double one_minus_rho = (u / e) * (1.0 + (1.0 - 1.0 / (p * p)) / e) / (1.0 + rho);
  const double q1 = -one_minus_rho / (1.0 + rho);
  const double q2 = (u / (s + p)) / (s + p);

  // u dq2/du = u p / (s (s + p)^2)
  const double dq2 = (u / (s + p)) * (p / (s * (s + p)));
  // u dq1/du = u p (eps - 2 s^2) / (s (s + p eps)^2), with s + p eps = p eps (1 + rho)
  const double denominator = p * e * (1.0 + rho);
  const double dq1 = (p / denominator) * ((1.0 - u - 2.0 * p * p) / denominator) * (u / s);

  return {2.0 * q1 * dq1, 2.0 * q2 * dq2};
}

double ideal_pressure(double a) {
  require_separation(a);
  return -pi * pi * hbar_c / (240.0 * a * a * a * a);
}

double ideal_sphere_force(double a, double R) {
  require_separation(a);
  if (!(R > 0.0)) throw DomainError("sphere radius must be positive");
  return -pi * pi * pi * hbar_c * R / (360.0 * a * a * a);
}

double ideal_energy_density(double a) {
  require_separation(a);
  return -pi * pi * hbar_c / (720.0 * a * a * a);
}

ForceResult pressure_plates_exact(const DielectricModel& model, double a, const QuadratureSettings& settings) {
  require_separation(a);
  auto integrand = [&](double x, double t) {
    const double u = excess(model, node_frequency(x, t, a));
    const ReflectionPair r = reflection_from_excess(u, 1.0 / t);
    return x * x * x *
           (r.r1_sq / shifted_exp(x, r.one_minus_r1_sq) + r.r2_sq / shifted_exp(x, r.one_minus_r2_sq));
  };
  const auto integral = run_2d(integrand, settings, "plate pressure");
  const double prefactor = -hbar_c / (32.0 * pi * pi * a * a * a * a);
  const double value = prefactor * integral.value;
  const double ideal = ideal_pressure(a);
  return {value, ideal, value / ideal, std::abs(prefactor) * integral.error};
}

EnergyResult energy_density_exact(const DielectricModel& model, double a, const QuadratureSettings& settings) {
  require_separation(a);
  auto integrand = [&](double x, double t) {
    const double u = excess(model, node_frequency(x, t, a));
    const ReflectionPair r = reflection_from_excess(u, 1.0 / t);
    return x * x * (log_one_minus(x, r.r1_sq, r.one_minus_r1_sq) + log_one_minus(x, r.r2_sq, r.one_minus_r2_sq));
  };
  const auto integral = run_2d(integrand, settings, "energy density");
  const double prefactor = hbar_c / (32.0 * pi * pi * a * a * a);
  const double value = prefactor * integral.value;
  const double ideal = ideal_energy_density(a);
  return {value, ideal, value / ideal, std::abs(prefactor) * integral.error};
}

ForceResult force_sphere_exact(const DielectricModel& model, double a, double R, const QuadratureSettings& settings,
                               SphereRoute route, double min_radius_ratio) {
  const bool warn = check_geometry(SpherePlate{a, R}, min_radius_ratio).has_value();
  const double ideal = ideal_sphere_force(a, R);

  if (route == SphereRoute::log_form) {
    const EnergyResult energy = energy_density_exact(model, a, settings);
    const double value = 2.0 * pi * R * energy.value;
    return {value, ideal, value / ideal, 2.0 * pi * R * energy.error, warn};
  }

  auto integrand = [&](double x, double t) {
    const double xi = node_frequency(x, t, a);
    const double u = excess(model, xi);
    const double p = 1.0 / t;
    const ReflectionPair r = reflection_from_excess(u, p);
    double d1 = 0.0, d2 = 0.0; // d r_sq / dx
    if (std::isfinite(u)) {
      const ReflectionSensitivity sens = reflection_sensitivity(u, p);
      const double slope = excess_log_slope(model, xi) / x; // d ln u / dx at fixed p
      d1 = sens.r1_sq * slope;
      d2 = sens.r2_sq * slope;
    }
    return x * x * x *
           ((r.r1_sq - d1) / shifted_exp(x, r.one_minus_r1_sq) + (r.r2_sq - d2) / shifted_exp(x, r.one_minus_r2_sq));
  };
  const auto integral = run_2d(integrand, settings, "sphere-plate force");
  const double prefactor = -hbar_c * R / (48.0 * pi * a * a * a);
  const double value = prefactor * integral.value;
  return {value, ideal, value / ideal, std::abs(prefactor) * integral.error, warn};
}

} // namespace casimir
