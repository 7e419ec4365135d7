#include "doctest.h"

#include <cmath>
#include <numbers>

#include "casimir/analysis.hpp"
#include "casimir/errors.hpp"

using namespace casimir;

namespace {

constexpr double um = 1e-6;
constexpr double nm = 1e-9;

QuadratureSettings fit_settings() {
  QuadratureSettings s;
  s.rel_tol = 1e-12;
  s.abs_tol = 1e-16;
  return s;
}

} // namespace

TEST_CASE("log grid") {
  const auto g = log_grid(0.002, 0.02, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.002);
  CHECK(g.back() == 0.02);
  CHECK(g[2] == doctest::Approx(std::sqrt(0.002 * 0.02)).epsilon(1e-14));
  CHECK(log_grid(1.0, 1.0, 1).size() == 1);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(log_grid(2.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("fit recovers a known quartic") {
  const double c[4] = {-3.0, 11.0, -40.0, 150.0};
  const auto quartic = [&](double r) { return 1.0 + r * (c[0] + r * (c[1] + r * (c[2] + r * c[3]))); };
  const FitReport fit = fit_series_coefficients(GeometryKind::plates, log_grid(0.001, 0.02, 10), quartic);
  for (int k = 0; k < 4; ++k) CHECK(fit.coefficients(k) == doctest::Approx(c[k]).epsilon(1e-9));
  CHECK(fit.residual_norm < 1e-13);
  CHECK(fit.factors.size() == 10);
}

TEST_CASE("fit grid validation") {
  const auto one = [](double) { return 1.0; };
  CHECK_THROWS_AS(fit_series_coefficients(GeometryKind::plates, log_grid(0.002, 0.02, 7), one), std::invalid_argument);
  CHECK_THROWS_AS(fit_series_coefficients(GeometryKind::plates, log_grid(0.002, 0.05, 8), one), std::invalid_argument);
  auto unsorted = log_grid(0.002, 0.02, 8);
  std::swap(unsorted[2], unsorted[3]);
  CHECK_THROWS_AS(fit_series_coefficients(GeometryKind::plates, unsorted, one), std::invalid_argument);
  // Eight points crowded into a relative width of 1e-6 cannot separate four powers.
  CHECK_THROWS_AS(fit_series_coefficients(GeometryKind::plates, log_grid(0.01, 0.01 * (1 + 1e-6), 8), one),
                  std::runtime_error);
}

TEST_CASE("coefficients extracted from the exact integrals") {
  const auto grid = log_grid(0.002, 0.02, 8);
  for (GeometryKind g : {GeometryKind::plates, GeometryKind::sphere}) {
    const auto expected = series_coefficients(g).c;
    const FitReport fit = extract_coefficients(g, grid, fit_settings());
    CHECK(fit.coefficients(0) == doctest::Approx(expected[0]).epsilon(0.01));
    CHECK(fit.coefficients(1) == doctest::Approx(expected[1]).epsilon(0.02));
    CHECK(fit.coefficients(2) == doctest::Approx(expected[2]).epsilon(0.10));
    CHECK(fit.coefficients(3) == doctest::Approx(expected[3]).epsilon(0.25));
    for (int k = 0; k < 4; ++k) CHECK(fit.uncertainty(k) >= 0.0);

    // Adding points leaves c1 inside its error bar.
    const FitReport denser = extract_coefficients(g, log_grid(0.002, 0.02, 12), fit_settings());
    CHECK(std::abs(denser.coefficients(0) - fit.coefficients(0)) <= fit.uncertainty(0) + denser.uncertainty(0));
  }
}

TEST_CASE("series versus exact rows") {
  const DielectricModel al = PlasmaModel(98 * nm);
  const std::vector<double> grid = {0.1 * um, 0.5 * um, 3 * um};
  const auto rows = compare_series_vs_exact(al, GeometryKind::plates, grid);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].order4 == doctest::Approx(0.5652).epsilon(1e-3));
  CHECK(rows[1].order4 == doctest::Approx(0.85).epsilon(0.01 / 0.85));
  CHECK(rows[2].order4 == doctest::Approx(0.97).epsilon(0.01 / 0.97));
  for (const auto& row : rows) {
    CHECK(row.warning == "none");
    CHECK_FALSE(row.failed);
    CHECK(row.dev4 == doctest::Approx(row.order4 - row.exact));
    CHECK(std::abs(row.dev4) < std::abs(row.dev2));
  }

  const DielectricModel cu = PlasmaModel(132 * nm);
  const auto close = compare_series_vs_exact(cu, GeometryKind::plates, {0.1 * um});
  CHECK(close[0].order4 == doctest::Approx(0.60).epsilon(0.01 / 0.60));
  CHECK(close[0].warning == "below_lambda_p");
  const auto far = compare_series_vs_exact(cu, GeometryKind::sphere, {0.03 * um});
  CHECK(far[0].warning == "ratio_gt_0.5");

  const auto again = compare_series_vs_exact(al, GeometryKind::plates, grid);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].exact == rows[i].exact);
}

TEST_CASE("ideal conductor rows") {
  const auto rows = compare_series_vs_exact(IdealConductor{}, GeometryKind::sphere, log_grid(0.1 * um, 10 * um, 5));
  for (const auto& row : rows) {
    CHECK(row.exact == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(row.order4 == 1.0);
    CHECK(row.ratio == 0.0);
  }
}

TEST_CASE("failed rows do not stop the sweep") {
  QuadratureSettings starved;
  starved.max_subdivisions = 1;
  starved.rel_tol = 1e-14;
  const auto rows = compare_series_vs_exact(PlasmaModel(98 * nm), GeometryKind::plates, {0.2 * um, 1 * um}, starved);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.failed);
    CHECK(row.warning == "failed");
    CHECK(std::isnan(row.exact));
    CHECK(std::isfinite(row.order4));
    CHECK_FALSE(row.message.empty());
  }
}

TEST_CASE("comparison input checks") {
  CHECK_THROWS_AS(compare_series_vs_exact(PlasmaModel(98 * nm), GeometryKind::plates, {1 * um, 0.5 * um}),
                  std::invalid_argument);
  CHECK_THROWS_AS(compare_series_vs_exact(PlasmaModel(98 * nm), GeometryKind::plates, {-1.0}), DomainError);
  const TabulatedModel table(PermittivityTable({{1e14, 1.0}, {1e15, 1.0}}));
  CHECK_THROWS_AS(compare_series_vs_exact(table, GeometryKind::plates, {1 * um}), std::invalid_argument);
  CHECK_NOTHROW(compare_series_vs_exact(table, GeometryKind::plates, {1 * um}, {}, 98 * nm));
}
