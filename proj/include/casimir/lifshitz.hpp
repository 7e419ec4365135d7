#pragma once

// Exact Casimir energy density and forces between real metals at zero
// temperature, from the regularized Lifshitz integrals in the dimensionless
// variables
//
//   xi = c x / (2 p a),   k^2 = (xi / c)^2 (p^2 - 1),
//
// with x in [0, inf) and p in [1, inf).

#include <optional>
#include <string>
#include <variant>

#include "casimir/dielectric.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

struct PlatesGap {
  double a; // m
};

struct SpherePlate {
  double a; // m
  double R; // m, sphere or lens curvature radius
};

using Geometry = std::variant<PlatesGap, SpherePlate>;

/// Default lower bound on R / a for the proximity-force approximation.
inline constexpr double default_min_radius_ratio = 100.0;

/// Throws DomainError for a <= 0 or R <= 0. Returns a warning message when
/// R / a is below `min_radius_ratio`.
std::optional<std::string> check_geometry(const Geometry& geometry,
                                          double min_radius_ratio = default_min_radius_ratio);

/// Squared reflection factors of the two polarizations at one (eps, p) node,
///   r1_sq = ((s - p eps) / (s + p eps))^2,  r2_sq = ((s - p) / (s + p))^2,
/// with s = sqrt(eps - 1 + p^2). The complements 1 - r are carried separately
/// because e^x - r is formed as expm1(x) + (1 - r) near x = 0.
struct ReflectionPair {
  double r1_sq;
  double r2_sq;
  double s;
  double one_minus_r1_sq;
  double one_minus_r2_sq;
};

/// Requires eps >= 1 and p >= 1; eps = +inf gives the perfect reflector.
ReflectionPair reflection_pair(double eps, double p);

/// Same, parametrized by u = eps - 1 (which may be +inf).
ReflectionPair reflection_from_excess(double u, double p);

/// u * d(r_sq)/du for both polarizations; zero at u = +inf.
struct ReflectionSensitivity {
  double r1_sq;
  double r2_sq;
};

ReflectionSensitivity reflection_sensitivity(double u, double p);

/// Force (or pressure) with its perfect-conductor reference.
struct ForceResult {
  double value;             // Pa for plates, N for sphere-plate
  double ideal;             // same units
  double correction_factor; // value / ideal
  double error;             // same units as value
  bool pft_warning = false; // R / a below the validity threshold
};

/// Casimir energy per unit area between plates, J / m^2.
struct EnergyResult {
  double value;
  double ideal;
  double correction_factor;
  double error;
};

/// -pi^2 hbar c / (240 a^4)
double ideal_pressure(double a);
/// -pi^3 hbar c R / (360 a^3)
double ideal_sphere_force(double a, double R);
/// -pi^2 hbar c / (720 a^3)
double ideal_energy_density(double a);

/// Pressure between two plates from the Lifshitz force formula.
ForceResult pressure_plates_exact(const DielectricModel& model, double a, const QuadratureSettings& settings = {});

/// Energy per unit area between two plates.
EnergyResult energy_density_exact(const DielectricModel& model, double a, const QuadratureSettings& settings = {});

enum class SphereRoute {
  log_form,   // 2 pi R times the energy density integrand, ln(1 - r e^-x)
  derivative, // after integration by parts in x
};

/// Force between a sphere (or lens) of radius R and a plate through the
/// proximity-force approximation. The derivative route is the default; the
/// log route evaluates the same quantity as 2 pi R * energy_density_exact.
ForceResult force_sphere_exact(const DielectricModel& model, double a, double R,
                               const QuadratureSettings& settings = {},
                               SphereRoute route = SphereRoute::derivative,
                               double min_radius_ratio = default_min_radius_ratio);

} // namespace casimir
