#pragma once

// Adaptive Gauss-Kronrod integration for the smooth, exponentially decaying
// integrands of the Lifshitz formulas. Header-only; templated on the scalar
// type so the engine runs in double or long double.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir {

struct QuadratureSettings {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 200; // panels per axis
  double x_max = 120.0;       // cutoff of the exponentially decaying axis

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw std::invalid_argument("quadrature tolerances must be positive");
    if (max_subdivisions < 1)
      throw std::invalid_argument("max_subdivisions must be at least 1");
    if (!(x_max >= 40.0))
      throw std::invalid_argument("x_max must be at least 40");
  }

  /// Settings for the inner axis of an iterated integral.
  QuadratureSettings tightened(double factor = 10.0) const {
    QuadratureSettings inner = *this;
    inner.rel_tol /= factor;
    inner.abs_tol /= factor;
    return inner;
  }
};

template <typename Scalar = double>
struct IntegralEstimate {
  Scalar value{0};
  Scalar error{0};
  std::size_t evaluations{0};
};

/// Marker for a semi-infinite upper limit.
template <typename Scalar = double>
inline constexpr Scalar infinity = std::numeric_limits<Scalar>::infinity();

namespace detail {

/// Integrand sample plus the error already carried by it (nonzero only when
/// the sample is itself the result of an inner integration).
template <typename Scalar>
struct Sample {
  Scalar value{0};
  Scalar error{0};
  std::size_t evaluations{1};
};

template <typename Scalar>
struct Panel {
  Scalar lo;
  Scalar hi;
  Scalar value;
  Scalar error;
};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<long double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
inline constexpr std::array<long double, 8> kronrod_weights = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<long double, 4> gauss_weights = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

template <typename Scalar, typename Sampler>
Panel<Scalar> gauss_kronrod_15(const Sampler& f, Scalar lo, Scalar hi, std::size_t& evaluations) {
  const Scalar center = (lo + hi) / 2;
  const Scalar half = (hi - lo) / 2;
  const Scalar abs_half = std::abs(half);

  std::array<Scalar, 15> fv{};
  Scalar carried = 0; // sum of w_k * |inner error_k|

  auto sample = [&](Scalar x, std::size_t slot) {
    const Sample<Scalar> s = f(x);
    fv[slot] = s.value;
    evaluations += s.evaluations;
    return s.error;
  };

  carried += static_cast<Scalar>(kronrod_weights[7]) * std::abs(sample(center, 14));
  for (std::size_t j = 0; j < 7; ++j) {
    const Scalar dx = half * static_cast<Scalar>(kronrod_nodes[j]);
    const Scalar w = static_cast<Scalar>(kronrod_weights[j]);
    carried += w * std::abs(sample(center - dx, 2 * j));
    carried += w * std::abs(sample(center + dx, 2 * j + 1));
  }

  Scalar kronrod = static_cast<Scalar>(kronrod_weights[7]) * fv[14];
  Scalar gauss = static_cast<Scalar>(gauss_weights[3]) * fv[14];
  Scalar abs_sum = std::abs(kronrod);
  for (std::size_t j = 0; j < 7; ++j) {
    const Scalar pair = fv[2 * j] + fv[2 * j + 1];
    const Scalar w = static_cast<Scalar>(kronrod_weights[j]);
    kronrod += w * pair;
    abs_sum += w * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
    if (j % 2 == 1) gauss += static_cast<Scalar>(gauss_weights[j / 2]) * pair;
  }

  const Scalar mean = kronrod / 2;
  Scalar asc = static_cast<Scalar>(kronrod_weights[7]) * std::abs(fv[14] - mean);
  for (std::size_t j = 0; j < 7; ++j)
    asc += static_cast<Scalar>(kronrod_weights[j]) * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));

  const Scalar result = kronrod * half;
  const Scalar result_abs = abs_sum * abs_half;
  const Scalar result_asc = asc * abs_half;
  Scalar error = std::abs((kronrod - gauss) * half);

  // QUADPACK scaling of the raw Gauss-Kronrod difference.
  if (result_asc != 0 && error != 0)
    error = result_asc * std::min(Scalar(1), std::pow(200 * error / result_asc, Scalar(1.5)));
  constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();
  if (result_abs > std::numeric_limits<Scalar>::min() / (50 * eps))
    error = std::max(50 * eps * result_abs, error);

  error += carried * abs_half;
  return {lo, hi, result, error};
}

/// Globally adaptive bisection: always split the panel with the largest error.
template <typename Scalar, typename Sampler>
IntegralEstimate<Scalar> adaptive(const Sampler& f, Scalar lo, Scalar hi, const QuadratureSettings& settings) {
  settings.validate();
  IntegralEstimate<Scalar> out;
  if (lo == hi) return out;

  std::vector<Panel<Scalar>> panels;
  panels.reserve(static_cast<std::size_t>(settings.max_subdivisions));
  panels.push_back(gauss_kronrod_15<Scalar>(f, lo, hi, out.evaluations));

  const auto totals = [&panels] {
    Scalar value = 0, error = 0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  for (;;) {
    const auto [value, error] = totals();
    const Scalar tolerance =
        std::max(static_cast<Scalar>(settings.abs_tol), static_cast<Scalar>(settings.rel_tol) * std::abs(value));
    if (error <= tolerance) break;

    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const auto& a, const auto& b) { return a.error < b.error; });
    const Scalar mid = (worst->lo + worst->hi) / 2;
    const Scalar scale = std::max(std::abs(worst->lo), std::abs(worst->hi));
    const bool too_narrow =
        std::abs(worst->hi - worst->lo) <= 100 * std::numeric_limits<Scalar>::epsilon() * scale;

    if (static_cast<int>(panels.size()) >= settings.max_subdivisions || too_narrow) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge on [" << static_cast<double>(lo) << ", "
          << static_cast<double>(hi) << "]: estimate " << static_cast<double>(value) << " +/- "
          << static_cast<double>(error) << " after " << panels.size() << " panels"
          << (too_narrow ? " (roundoff limit)" : "");
      throw ConvergenceError(msg.str(), static_cast<double>(value), static_cast<double>(error));
    }

    const Scalar left_lo = worst->lo, right_hi = worst->hi;
    *worst = gauss_kronrod_15<Scalar>(f, left_lo, mid, out.evaluations);
    panels.push_back(gauss_kronrod_15<Scalar>(f, mid, right_hi, out.evaluations));
  }

  // Fixed summation order: left to right.
  std::sort(panels.begin(), panels.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  for (const auto& p : panels) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

} // namespace detail

/// Integrates f over [lower, upper]. An upper limit of `infinity<Scalar>` is
/// replaced by the tail cutoff `settings.x_max`; the integrand must decay at
/// least like exp(-x) for that to be accurate.
template <typename Scalar = double, typename F>
IntegralEstimate<Scalar> integrate_1d(F&& f, Scalar lower, Scalar upper, const QuadratureSettings& settings = {}) {
  if (!std::isfinite(lower)) throw std::invalid_argument("integrate_1d: lower limit must be finite");
  if (std::isinf(upper)) {
    if (upper < 0) throw std::invalid_argument("integrate_1d: upper limit must be +infinity or finite");
    upper = static_cast<Scalar>(settings.x_max);
    if (!(upper > lower)) throw std::invalid_argument("integrate_1d: lower limit beyond the tail cutoff");
  }
  auto sampler = [&f](Scalar x) { return detail::Sample<Scalar>{static_cast<Scalar>(f(x)), 0, 1}; };
  return detail::adaptive<Scalar>(sampler, lower, upper, settings);
}

/// Iterated integral of g(x, t) over x in [0, x_max] and t in (0, 1].
/// Inner axis is t at ten times tighter tolerance; its error estimates are
/// propagated into the outer one.
template <typename Scalar = double, typename G>
IntegralEstimate<Scalar> integrate_2d_compact(G&& g, const QuadratureSettings& settings = {}) {
  settings.validate();
  const QuadratureSettings inner_settings = settings.tightened();

  auto outer = [&](Scalar x) {
    auto inner = [&](Scalar t) { return detail::Sample<Scalar>{static_cast<Scalar>(g(x, t)), 0, 1}; };
    IntegralEstimate<Scalar> r;
    try {
      r = detail::adaptive<Scalar>(inner, Scalar(0), Scalar(1), inner_settings);
    } catch (const ConvergenceError& e) {
      std::ostringstream msg;
      msg << "inner p-integral at x = " << static_cast<double>(x) << ": " << e.what();
      throw ConvergenceError(msg.str(), e.best_value(), e.best_error());
    }
    return detail::Sample<Scalar>{r.value, r.error, r.evaluations};
  };
  return detail::adaptive<Scalar>(outer, Scalar(0), static_cast<Scalar>(settings.x_max), settings);
}

/// Iterated integral of f(x, p) over x in [0, inf) and p in [1, inf).
///
/// The x axis is cut at settings.x_max. The p axis is mapped onto (0, 1] by
/// t = 1/p, so the inner integrand becomes f(x, 1/t) / t^2.
template <typename Scalar = double, typename F>
IntegralEstimate<Scalar> integrate_2d(F&& f, const QuadratureSettings& settings = {}) {
  return integrate_2d_compact<Scalar>(
      [&f](Scalar x, Scalar t) {
        const Scalar p = 1 / t;
        return static_cast<Scalar>(f(x, p)) * p * p;
      },
      settings);
}

} // namespace casimir
