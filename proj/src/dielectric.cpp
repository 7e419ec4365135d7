#include "casimir/dielectric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

namespace {

void require_positive_frequency(double xi) {
  if (!(xi > 0.0)) {
    std::ostringstream msg;
    msg << "eps(i xi) requires xi > 0, got " << xi;
    throw DomainError(msg.str());
  }
}

std::string row_message(std::size_t row, const std::string& what) {
  std::ostringstream msg;
  msg << "row " << row << ": " << what;
  return msg.str();
}

// Checks one row against its predecessor; `row` is what gets reported.
void check_row(const TableRow& r, const TableRow* previous, std::size_t row) {
  using Kind = ValidationError::Kind;
  if (!std::isfinite(r.omega) || !std::isfinite(r.eps_imag))
    throw ValidationError(Kind::parse, row, row_message(row, "non-finite value"));
  if (!(r.omega > 0.0))
    throw ValidationError(Kind::non_positive_frequency, row, row_message(row, "omega must be positive"));
  if (r.eps_imag < 0.0)
    throw ValidationError(Kind::negative_value, row, row_message(row, "eps_imag must be non-negative"));
  if (previous != nullptr && !(r.omega > previous->omega))
    throw ValidationError(Kind::non_monotone, row, row_message(row, "omega must be strictly increasing"));
}

// Segment integrals below are done in v = ln(omega) and need a relative
// accuracy well beyond what the Lifshitz integrals ask for.
QuadratureSettings segment_settings() {
  QuadratureSettings s;
  s.rel_tol = 1e-12;
  s.abs_tol = std::numeric_limits<double>::min();
  s.max_subdivisions = 100;
  return s;
}

// int_1^inf dz / (z^2 (z^2 + y^2))
double upper_tail_value(double y) {
  if (y < 0.5) {
    double sum = 0.0, term_power = 1.0;
    const double y2 = y * y;
    for (int k = 0; k < 80; ++k) {
      const double term = term_power / (2 * k + 3);
      sum += (k % 2 == 0) ? term : -term;
      if (term < 1e-18 * std::abs(sum)) break;
      term_power *= y2;
    }
    return sum;
  }
  return (1.0 - std::atan(y) / y) / (y * y);
}

// int_1^inf dz / (z^2 (z^2 + y^2)^2)
double upper_tail_derivative(double y) {
  if (y < 0.5) {
    double sum = 0.0, term_power = 1.0;
    const double y2 = y * y;
    for (int k = 0; k < 80; ++k) {
      const double term = (k + 1) * term_power / (2 * k + 5);
      sum += (k % 2 == 0) ? term : -term;
      if (term < 1e-18 * std::abs(sum)) break;
      term_power *= y2;
    }
    return sum;
  }
  const double y2 = y * y, y4 = y2 * y2;
  return (1.0 + 0.5 / (1.0 + y2)) / y4 - 1.5 * std::atan(y) / (y4 * y);
}

// Sum over the tabulated segments of int omega^2 eps'' / (omega^2 + xi^2)^power dv.
double segment_sum(const PermittivityTable& table, double xi, int power) {
  const auto& rows = table.rows();
  const QuadratureSettings settings = segment_settings();
  const double xi2 = xi * xi;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i].eps_imag == 0.0 && rows[i + 1].eps_imag == 0.0) continue;
    auto integrand = [&](double v) {
      const double omega = std::exp(v);
      const double w2 = omega * omega;
      const double denominator = power == 1 ? (w2 + xi2) : (w2 + xi2) * (w2 + xi2);
      return w2 * table.eps_imag(omega) / denominator;
    };
    sum += integrate_1d(integrand, std::log(rows[i].omega), std::log(rows[i + 1].omega), settings).value;
  }
  return sum;
}

} // namespace

PlasmaModel::PlasmaModel(double plasma_wavelength) : wavelength_(plasma_wavelength) {
  if (!(plasma_wavelength > 0.0) || !std::isfinite(plasma_wavelength)) {
    std::ostringstream msg;
    msg << "plasma wavelength must be positive and finite, got " << plasma_wavelength;
    throw DomainError(msg.str());
  }
  frequency_ = 2.0 * constants::pi * constants::speed_of_light / wavelength_;
  depth_ = wavelength_ / (2.0 * constants::pi);
}

PermittivityTable::PermittivityTable(std::vector<TableRow> rows, TailPolicy tails)
    : rows_(std::move(rows)), tails_(tails) {
  if (rows_.size() < 2)
    throw ValidationError(ValidationError::Kind::too_few_rows, 0, "permittivity table has fewer than 2 rows");
  for (std::size_t i = 0; i < rows_.size(); ++i) check_row(rows_[i], i == 0 ? nullptr : &rows_[i - 1], i + 1);
}

double PermittivityTable::eps_imag(double omega) const {
  const TableRow& first = rows_.front();
  const TableRow& last = rows_.back();
  if (omega < first.omega) return tails_.below ? first.eps_imag * first.omega / omega : 0.0;
  if (omega > last.omega) {
    if (!tails_.above) return 0.0;
    const double ratio = last.omega / omega;
    return last.eps_imag * ratio * ratio * ratio;
  }
  auto hi = std::upper_bound(rows_.begin(), rows_.end(), omega,
                             [](double w, const TableRow& r) { return w < r.omega; });
  if (hi == rows_.end()) return last.eps_imag;
  const TableRow& b = *hi;
  const TableRow& a = *(hi - 1);
  if (a.eps_imag > 0.0 && b.eps_imag > 0.0) {
    const double slope = std::log(b.eps_imag / a.eps_imag) / std::log(b.omega / a.omega);
    return a.eps_imag * std::pow(omega / a.omega, slope);
  }
  const double t = (omega - a.omega) / (b.omega - a.omega);
  return a.eps_imag + t * (b.eps_imag - a.eps_imag);
}

double table_excess(const PermittivityTable& table, double xi) {
  require_positive_frequency(xi);
  const auto& rows = table.rows();
  double integral = segment_sum(table, xi, 1);

  if (table.tails().below) {
    const TableRow& first = rows.front();
    integral += first.eps_imag * first.omega * std::atan(first.omega / xi) / xi;
  }
  if (table.tails().above) {
    const TableRow& last = rows.back();
    integral += last.eps_imag * upper_tail_value(xi / last.omega);
  }
  return 2.0 / constants::pi * integral;
}

double table_excess_derivative(const PermittivityTable& table, double xi) {
  require_positive_frequency(xi);
  const auto& rows = table.rows();
  double integral = segment_sum(table, xi, 2);

  if (table.tails().below) {
    const TableRow& first = rows.front();
    const double w = first.omega, xi2 = xi * xi;
    integral += first.eps_imag * w * (w / (2.0 * xi2 * (w * w + xi2)) + std::atan(w / xi) / (2.0 * xi2 * xi));
  }
  if (table.tails().above) {
    const TableRow& last = rows.back();
    integral += last.eps_imag * upper_tail_derivative(xi / last.omega) / (last.omega * last.omega);
  }
  return -4.0 * xi / constants::pi * integral;
}

double plasma_eps(const PlasmaModel& model, double xi) {
  require_positive_frequency(xi);
  const double ratio = model.plasma_frequency() / xi;
  return 1.0 + ratio * ratio;
}

double table_eps(const PermittivityTable& table, double xi) { return 1.0 + table_excess(table, xi); }

PermittivityTable load_table(std::istream& in, TailPolicy tails) {
  using Kind = ValidationError::Kind;
  constexpr std::string_view header = "omega_rad_s,eps_imag";

  const auto trim = [](std::string_view s) {
    const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
    while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
    return s;
  };
  const auto parse_number = [](std::string_view s, std::size_t line) {
    double value = 0.0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty())
      throw ValidationError(Kind::parse, line, row_message(line, "cannot parse '" + std::string(s) + "'"));
    return value;
  };

  std::vector<TableRow> rows;
  std::string raw;
  std::size_t line = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (!seen_header) {
      if (text != header)
        throw ValidationError(Kind::header, line,
                              row_message(line, "expected header '" + std::string(header) + "'"));
      seen_header = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
      throw ValidationError(Kind::parse, line, row_message(line, "expected two comma-separated fields"));
    TableRow row{parse_number(trim(text.substr(0, comma)), line), parse_number(trim(text.substr(comma + 1)), line)};
    check_row(row, rows.empty() ? nullptr : &rows.back(), line);
    rows.push_back(row);
  }
  if (rows.size() < 2)
    throw ValidationError(Kind::too_few_rows, line, "permittivity table has fewer than 2 rows");
  return PermittivityTable(std::move(rows), tails);
}

struct TabulatedModel::Grid {
  double log_xi_min = 0.0;
  double step = 0.0; // in ln xi
  std::vector<double> log_excess;
  std::vector<double> slope; // d ln(eps - 1) / d ln xi

  bool covers(double log_xi) const {
    return !log_excess.empty() && log_xi >= log_xi_min &&
           log_xi <= log_xi_min + step * static_cast<double>(log_excess.size() - 1);
  }

  // Cubic Hermite on the cell containing log_xi. Returns (ln(eps-1), slope).
  std::pair<double, double> interpolate(double log_xi) const {
    const double position = (log_xi - log_xi_min) / step;
    const std::size_t last_cell = log_excess.size() - 2;
    const std::size_t j = std::min(static_cast<std::size_t>(position), last_cell);
    const double t = position - static_cast<double>(j);
    const double t2 = t * t, t3 = t2 * t;
    const double g0 = log_excess[j], g1 = log_excess[j + 1];
    const double m0 = slope[j] * step, m1 = slope[j + 1] * step;
    const double value = (2 * t3 - 3 * t2 + 1) * g0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * g1 + (t3 - t2) * m1;
    const double dvalue = (6 * t2 - 6 * t) * g0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * g1 + (3 * t2 - 2 * t) * m1;
    return {value, dvalue / step};
  }
};

TabulatedModel::TabulatedModel(PermittivityTable table, CacheSettings cache) : table_(std::move(table)) {
  if (cache.points_per_decade < 1) throw std::invalid_argument("cache points_per_decade must be at least 1");
  auto grid = std::make_shared<Grid>();
  const double lo = std::log(table_.rows().front().omega) - cache.decades_below * std::log(10.0);
  const double hi = std::log(table_.rows().back().omega) + cache.decades_above * std::log(10.0);
  const double step = std::log(10.0) / cache.points_per_decade;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;

  grid->log_xi_min = lo;
  grid->step = step;
  grid->log_excess.reserve(n);
  grid->slope.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double xi = std::exp(lo + step * static_cast<double>(j));
    const double u = table_excess(table_, xi);
    if (!(u > 0.0) || !std::isfinite(u)) {
      grid->log_excess.clear();
      grid->slope.clear();
      break;
    }
    grid->log_excess.push_back(std::log(u));
    grid->slope.push_back(xi * table_excess_derivative(table_, xi) / u);
  }
  grid_ = std::move(grid);
}

std::size_t TabulatedModel::cached_points() const noexcept { return grid_->log_excess.size(); }

double TabulatedModel::excess(double xi) const {
  require_positive_frequency(xi);
  const double log_xi = std::log(xi);
  if (grid_->covers(log_xi)) return std::exp(grid_->interpolate(log_xi).first);
  return table_excess(table_, xi);
}

double TabulatedModel::excess_log_slope(double xi) const {
  require_positive_frequency(xi);
  const double log_xi = std::log(xi);
  if (grid_->covers(log_xi)) return grid_->interpolate(log_xi).second;
  const double u = table_excess(table_, xi);
  if (!(u > 0.0)) return 0.0;
  return xi * table_excess_derivative(table_, xi) / u;
}

double excess(const DielectricModel& model, double xi) {
  require_positive_frequency(xi);
  struct Visitor {
    double xi;
    double operator()(const IdealConductor&) const { return std::numeric_limits<double>::infinity(); }
    double operator()(const PlasmaModel& m) const {
      const double ratio = m.plasma_frequency() / xi;
      return ratio * ratio;
    }
    double operator()(const TabulatedModel& m) const { return m.excess(xi); }
  };
  return std::visit(Visitor{xi}, model);
}

double excess_log_slope(const DielectricModel& model, double xi) {
  require_positive_frequency(xi);
  struct Visitor {
    double xi;
    double operator()(const IdealConductor&) const { return 0.0; }
    double operator()(const PlasmaModel&) const { return -2.0; }
    double operator()(const TabulatedModel& m) const { return m.excess_log_slope(xi); }
  };
  return std::visit(Visitor{xi}, model);
}

double eps(const DielectricModel& model, double xi) { return 1.0 + excess(model, xi); }

} // namespace casimir
