#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"

using namespace casimir;

namespace {

constexpr double pi = std::numbers::pi;

double bose3(double x) { return x * x * x / std::expm1(x); }

double bose4_derivative(double x) {
  const double d = std::expm1(x);
  return x * x * x * x * std::exp(x) / (d * d);
}

// Midpoint rule on [0, upper] in long double, the brute-force reference.
double midpoint_sum(const std::function<double(double)>& f, double upper, long steps) {
  const long double h = static_cast<long double>(upper) / steps;
  long double sum = 0;
  for (long i = 0; i < steps; ++i) sum += f(static_cast<double>((i + 0.5L) * h));
  return static_cast<double>(sum * h);
}

} // namespace

TEST_CASE("semi-infinite Bose integral") {
  const auto r = integrate_1d(bose3, 0.0, infinity<double>);
  CHECK(r.value == doctest::Approx(pi * pi * pi * pi / 15.0).epsilon(1e-12));
  CHECK(r.error >= 0.0);
  CHECK(r.evaluations > 0);
}

TEST_CASE("unit interval") {
  const auto r = integrate_1d([](double) { return 1.0; }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("x^4 e^x / (e^x - 1)^2 against a brute-force midpoint sum") {
  const double oracle = midpoint_sum(bose4_derivative, 120.0, 2'000'000);
  CHECK(oracle == doctest::Approx(4.0 * std::pow(pi, 4) / 15.0).epsilon(1e-8));
  const auto r = integrate_1d(bose4_derivative, 0.0, infinity<double>);
  CHECK(r.value == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("iterated integrals over [0, inf) x [1, inf)") {
  SUBCASE("separable Bose times p^-2") {
    const auto r = integrate_2d([](double x, double p) { return bose3(x) / (p * p); });
    CHECK(r.value == doctest::Approx(std::pow(pi, 4) / 15.0).epsilon(1e-9));
  }
  SUBCASE("zero") {
    const auto r = integrate_2d([](double, double) { return 0.0; });
    CHECK(r.value == 0.0);
    CHECK(r.error == 0.0);
  }
  SUBCASE("e^-x / p^3") {
    const auto r = integrate_2d([](double x, double p) { return std::exp(-x) / (p * p * p); });
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("linearity") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coefficient(-3.0, 3.0);
  const auto f = [](double x) { return bose3(x); };
  const auto g = [](double x) { return x * std::exp(-2.0 * x); };
  const auto If = integrate_1d(f, 0.0, infinity<double>);
  const auto Ig = integrate_1d(g, 0.0, infinity<double>);
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = coefficient(rng), beta = coefficient(rng);
    const auto combined = integrate_1d([&](double x) { return alpha * f(x) + beta * g(x); }, 0.0, infinity<double>);
    const double expected = alpha * If.value + beta * Ig.value;
    const double allowed = combined.error + std::abs(alpha) * If.error + std::abs(beta) * Ig.error;
    CHECK(std::abs(combined.value - expected) <= allowed);
  }
}

TEST_CASE("error estimate bounds the actual error") {
  struct Case {
    std::function<double(double)> f;
    double exact;
  };
  const std::array<Case, 4> family = {{
      {bose3, std::pow(pi, 4) / 15.0},
      {bose4_derivative, 4.0 * std::pow(pi, 4) / 15.0},
      {[](double x) { return std::exp(-x); }, 1.0},
      {[](double x) { return x * std::exp(-2.0 * x); }, 0.25},
  }};

  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> log_tol(-12.0, -3.0);
  std::uniform_int_distribution<std::size_t> pick(0, family.size() - 1);
  int bounded = 0;
  constexpr int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    QuadratureSettings s;
    s.rel_tol = std::pow(10.0, log_tol(rng));
    s.abs_tol = s.rel_tol * 1e-3;
    const Case& c = family[pick(rng)];
    const auto r = integrate_1d(c.f, 0.0, infinity<double>, s);
    if (std::abs(r.value - c.exact) <= r.error) ++bounded;
  }
  CHECK(bounded >= trials * 95 / 100);
}

TEST_CASE("budget exhaustion carries the best estimate") {
  QuadratureSettings s;
  s.max_subdivisions = 2;
  s.rel_tol = 1e-14;
  try {
    integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, s);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_value() > 1.0);
    CHECK(e.best_value() < 2.0);
    CHECK(e.best_error() > 0.0);
  }
}

TEST_CASE("settings validation") {
  QuadratureSettings s;
  s.x_max = 30.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate_1d(bose3, 0.0, 1.0, s), std::invalid_argument);
  CHECK_THROWS_AS(integrate_1d(bose3, -infinity<double>, 1.0), std::invalid_argument);
}

TEST_CASE("long double instantiation") {
  QuadratureSettings s;
  s.rel_tol = 1e-15;
  s.abs_tol = 1e-20;
  const auto r = integrate_1d<long double>([](long double x) { return std::exp(-x); }, 0.0L, 1.0L, s);
  CHECK(static_cast<double>(std::abs(r.value - (1.0L - std::exp(-1.0L)))) < 1e-17);
}

TEST_CASE("repeated runs are bit-identical") {
  const auto f = [](double x, double p) { return bose3(x) * std::exp(-x / p) / (p * p); };
  const auto a = integrate_2d(f);
  const auto b = integrate_2d(f);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
  CHECK(a.evaluations == b.evaluations);
}
