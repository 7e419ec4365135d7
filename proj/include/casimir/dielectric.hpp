#pragma once

// Permittivity along the imaginary frequency axis, eps(i xi).
//
// Everything downstream works with the excess permittivity eps - 1 rather
// than eps itself: under the plasma model eps - 1 = (omega_p / xi)^2 spans
// many decades and forming 1 + (...) first would lose the small-excess end.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <variant>
#include <vector>

namespace casimir {

/// Free-electron permittivity without relaxation, eps(i xi) = 1 + omega_p^2 / xi^2.
class PlasmaModel {
public:
  /// Throws DomainError unless plasma_wavelength > 0 and finite.
  explicit PlasmaModel(double plasma_wavelength);

  double plasma_wavelength() const noexcept { return wavelength_; } // m
  double plasma_frequency() const noexcept { return frequency_; }   // rad / s
  double penetration_depth() const noexcept { return depth_; }      // m, lambda_p / (2 pi)

private:
  double wavelength_;
  double frequency_;
  double depth_;
};

/// Perfect conductor: eps = +inf at every frequency.
struct IdealConductor {};

struct TableRow {
  double omega;    // rad / s
  double eps_imag; // eps''(omega)
};

/// Extrapolation of eps'' outside the tabulated range. Below the first row
/// eps'' ~ 1/omega (free electrons), above the last row eps'' ~ 1/omega^3.
struct TailPolicy {
  bool below = true;
  bool above = true;
};

/// Tabulated imaginary part of the permittivity. Rows are validated on
/// construction: at least two, omega > 0 strictly increasing, eps'' >= 0.
class PermittivityTable {
public:
  explicit PermittivityTable(std::vector<TableRow> rows, TailPolicy tails = {});

  const std::vector<TableRow>& rows() const noexcept { return rows_; }
  const TailPolicy& tails() const noexcept { return tails_; }
  PermittivityTable with_tails(TailPolicy tails) const { return PermittivityTable(rows_, tails); }

  /// eps''(omega) with log-log interpolation between rows (linear where a
  /// row holds zero) and the enabled tails outside.
  double eps_imag(double omega) const;

private:
  std::vector<TableRow> rows_;
  TailPolicy tails_;
};

/// eps(i xi) - 1 from the dispersion relation
///   eps(i xi) = 1 + (2/pi) int_0^inf omega eps''(omega) / (omega^2 + xi^2) d omega.
double table_excess(const PermittivityTable& table, double xi);

/// d(eps(i xi))/d xi from the same dispersion relation.
double table_excess_derivative(const PermittivityTable& table, double xi);

/// eps(i xi) under the plasma model. Throws DomainError for xi <= 0.
double plasma_eps(const PlasmaModel& model, double xi);

/// eps(i xi) from tabulated data via the dispersion relation. Throws
/// DomainError for xi <= 0.
double table_eps(const PermittivityTable& table, double xi);

/// Parses the permittivity CSV format:
///
///   # comment
///   omega_rad_s,eps_imag
///   1.0e14,35.2
///   ...
///
/// Throws ValidationError naming the offending line.
PermittivityTable load_table(std::istream& in, TailPolicy tails = {});

struct CacheSettings {
  int points_per_decade = 40;
  double decades_below = 4.0; // grid reaches first omega * 10^-decades_below
  double decades_above = 4.0; // and last omega * 10^decades_above
};

/// A table together with a precomputed log-grid of eps(i xi) - 1 and its
/// logarithmic slope. Queries inside the grid use cubic Hermite
/// interpolation in (ln xi, ln(eps - 1)); outside, the dispersion integral is
/// evaluated directly. Immutable once built; copies share the grid.
class TabulatedModel {
public:
  explicit TabulatedModel(PermittivityTable table, CacheSettings cache = {});

  const PermittivityTable& table() const noexcept { return table_; }

  double excess(double xi) const;
  double excess_log_slope(double xi) const;

  /// Number of cached grid nodes (0 when the table has no absorption).
  std::size_t cached_points() const noexcept;

private:
  struct Grid;
  PermittivityTable table_;
  std::shared_ptr<const Grid> grid_;
};

using DielectricModel = std::variant<IdealConductor, PlasmaModel, TabulatedModel>;

/// eps(i xi) - 1; +inf for the ideal conductor. Requires xi > 0.
double excess(const DielectricModel& model, double xi);

/// d ln(eps - 1) / d ln xi; -2 under the plasma model, 0 for the ideal conductor.
double excess_log_slope(const DielectricModel& model, double xi);

/// eps(i xi) for any model.
double eps(const DielectricModel& model, double xi);

} // namespace casimir
