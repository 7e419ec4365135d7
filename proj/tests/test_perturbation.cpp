#include "doctest.h"

#include <cmath>
#include <numbers>

#include "casimir/analysis.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/perturbation.hpp"

using namespace casimir;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nm = 1e-9;

double ratio_for(double wavelength, double a) { return wavelength / (2 * pi) / a; }

double exact_factor(GeometryKind g, double wavelength, double a) {
  const DielectricModel model = PlasmaModel(wavelength);
  return g == GeometryKind::plates ? pressure_plates_exact(model, a).correction_factor
                                   : force_sphere_exact(model, a, 1e3 * a).correction_factor;
}

} // namespace

TEST_CASE("coefficients") {
  const auto plates = series_coefficients(GeometryKind::plates).c;
  CHECK(plates[0] == doctest::Approx(-16.0 / 3.0).epsilon(1e-15));
  CHECK(plates[1] == doctest::Approx(24.0).epsilon(1e-15));
  CHECK(plates[2] == doctest::Approx(-87.1316).epsilon(1e-6));
  CHECK(plates[3] == doctest::Approx(243.016).epsilon(1e-6));

  const auto sphere = series_coefficients(GeometryKind::sphere).c;
  CHECK(sphere[0] == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(sphere[1] == doctest::Approx(14.4).epsilon(1e-15));
  CHECK(sphere[2] == doctest::Approx(-43.5658).epsilon(1e-6));
  CHECK(sphere[3] == doctest::Approx(104.1497).epsilon(1e-6));

  CHECK(to_string(GeometryKind::plates) == "plates");
  CHECK(to_string(GeometryKind::sphere) == "sphere");
}

TEST_CASE("sphere coefficients follow from the plate series") {
  const auto residuals = pft_order_consistency();
  REQUIRE(residuals.size() == 4);
  const auto sphere = series_coefficients(GeometryKind::sphere).c;
  for (const PftResidual& r : residuals) {
    CHECK(r.residual <= 1e-14 * std::abs(sphere[static_cast<std::size_t>(r.order - 1)]));
  }
  SeriesCoefficients broken = series_coefficients(GeometryKind::sphere);
  broken.c[2] = -50.0;
  const auto bad = pft_order_consistency(series_coefficients(GeometryKind::plates), broken);
  CHECK(bad[2].residual > 6.0);
  CHECK(bad[0].residual == 0.0);
}

TEST_CASE("series evaluation") {
  CHECK(correction_factor_series(GeometryKind::plates, 0.0, 4).value == 1.0);
  CHECK(correction_factor_series(GeometryKind::sphere, 0.3, 0).value == 1.0);
  CHECK(correction_factor_series(GeometryKind::plates, 0.1, 1).value == doctest::Approx(1.0 - 16.0 / 30.0));
  CHECK(correction_factor_series(GeometryKind::sphere, 0.1, 2).value == doctest::Approx(1.0 - 0.4 + 0.144));

  CHECK_THROWS_AS(correction_factor_series(GeometryKind::plates, 0.1, 5), std::invalid_argument);
  CHECK_THROWS_AS(correction_factor_series(GeometryKind::plates, 0.1, -1), std::invalid_argument);
  CHECK_THROWS_AS(correction_factor_series(GeometryKind::plates, -0.1, 2), std::invalid_argument);

  CHECK_FALSE(correction_factor_series(GeometryKind::plates, 0.5, 4).outside_validity);
  const SeriesFactor far = correction_factor_series(GeometryKind::plates, 0.6, 4);
  CHECK(far.outside_validity);
  CHECK(std::isfinite(far.value));
}

TEST_CASE("published aluminium and copper values") {
  struct Case {
    GeometryKind g;
    double wavelength, a, expected;
  };
  // Order-4 series at lambda_p = 98 nm (Al) and 132 nm (Cu, Au).
  const Case cases[] = {
      {GeometryKind::plates, 98 * nm, 0.5e-6, 0.85},  {GeometryKind::plates, 98 * nm, 3e-6, 0.97},
      {GeometryKind::sphere, 98 * nm, 0.5e-6, 0.89},  {GeometryKind::sphere, 98 * nm, 3e-6, 0.98},
      {GeometryKind::plates, 132 * nm, 0.5e-6, 0.81}, {GeometryKind::plates, 132 * nm, 3e-6, 0.96},
      {GeometryKind::sphere, 132 * nm, 0.5e-6, 0.85}, {GeometryKind::sphere, 132 * nm, 3e-6, 0.97},
      {GeometryKind::sphere, 98 * nm, 0.1e-6, 0.62},
  };
  for (const Case& c : cases) {
    const double f = correction_factor_series(c.g, ratio_for(c.wavelength, c.a), 4).value;
    CHECK(f == doctest::Approx(c.expected).epsilon(0.01 / c.expected));
  }
  // The Al plate value at 100 nm comes out as 0.5652.
  CHECK(correction_factor_series(GeometryKind::plates, ratio_for(98 * nm, 0.1e-6), 4).value ==
        doctest::Approx(0.56521).epsilon(1e-4));
}

TEST_CASE("comparison with the interpolation formula") {
  CHECK(interpolation_comparison(0.0).absolute == 0.0);
  const InterpolationDiscrepancy at = interpolation_comparison(0.13);
  CHECK(at.absolute == doctest::Approx(0.0053).epsilon(0.02));
  CHECK(at.absolute == doctest::Approx(0.005).epsilon(0.2));
  CHECK(at.relative > at.absolute);
  // The third- and fourth-order differences cancel near r = 0.097.
  const auto sphere = series_coefficients(GeometryKind::sphere).c;
  const double root = (sphere[2] - interpolation_c3) / (interpolation_c4 - sphere[3]);
  CHECK(root == doctest::Approx(0.097).epsilon(0.01));
  CHECK(interpolation_comparison(root).absolute < 1e-15);
  double previous = 0.0;
  for (double r = 0.11; r <= 0.3; r += 0.01) {
    const double d = interpolation_comparison(r).absolute;
    CHECK(d > previous);
    previous = d;
  }
  CHECK_THROWS_AS(interpolation_comparison(-1.0), std::invalid_argument);
}

TEST_CASE("partial sums bracket the exact factor") {
  for (GeometryKind g : {GeometryKind::plates, GeometryKind::sphere}) {
    for (double r : {0.005, 0.01, 0.02, 0.05}) {
      const double exact = plasma_exact_factor(g, r);
      double previous_gap = 0.0;
      for (int k = 1; k <= 4; ++k) {
        const double gap = correction_factor_series(g, r, k).value - exact;
        // odd orders undershoot, even orders overshoot
        CHECK((k % 2 == 1 ? gap < 0.0 : gap > 0.0));
        if (k > 1) CHECK(std::abs(gap) < std::abs(previous_gap));
        previous_gap = gap;
      }
      // The remainder after the fourth order is O(r^5).
      CHECK(std::abs(previous_gap) < 1e3 * std::pow(r, 5));
    }
  }
}

TEST_CASE("fourth order beats second order") {
  for (GeometryKind g : {GeometryKind::plates, GeometryKind::sphere}) {
    for (double wavelength : {98 * nm, 132 * nm}) {
      for (double m : {1.0, 2.0, 5.0, 30.0}) {
        const double a = m * wavelength;
        const double r = ratio_for(wavelength, a);
        const double exact = exact_factor(g, wavelength, a);
        CHECK(std::abs(correction_factor_series(g, r, 4).value - exact) <
              std::abs(correction_factor_series(g, r, 2).value - exact));
      }
    }
  }
}

TEST_CASE("series tracks the exact factor away from the plasma wavelength") {
  for (GeometryKind g : {GeometryKind::plates, GeometryKind::sphere}) {
    for (double wavelength : {98 * nm, 132 * nm}) {
      for (double m : {1.5, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0}) {
        const double a = m * wavelength;
        const double series = correction_factor_series(g, ratio_for(wavelength, a), 4).value;
        CHECK(std::abs(series - exact_factor(g, wavelength, a)) < 0.01);
      }
    }
  }
}

TEST_CASE("at the plasma wavelength the series is off by more than 0.01") {
  // delta0 / a = 1 / (2 pi) there; the truncation error is about 0.04 for
  // plates and 0.014 for the sphere.
  const double r = 1.0 / (2 * pi);
  const double plates = correction_factor_series(GeometryKind::plates, r, 4).value;
  const double sphere = correction_factor_series(GeometryKind::sphere, r, 4).value;
  CHECK(plates - exact_factor(GeometryKind::plates, 98 * nm, 98 * nm) > 0.01);
  CHECK(sphere - exact_factor(GeometryKind::sphere, 98 * nm, 98 * nm) > 0.01);
}
