#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "unclab/errors.hpp"
#include "unclab/moments.hpp"
#include "unclab/quadrature.hpp"

using namespace unclab;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Simpson is exact on cubics and converges on smooth integrands") {
  const auto cubic = integrate_scalar([](double x) { return 4 * x * x * x - 3 * x * x + 1; }, -1.0, 2.0);
  CHECK(cubic.value == Approx(15.0 - 9.0 + 3.0).epsilon(1e-14));

  const auto gauss = integrate_scalar([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 4);
  CHECK(std::abs(gauss.value - std::sqrt(kPi) * std::erf(6.0)) <= QuadratureOptions{}.abs_tol);
  CHECK(gauss.est_error <= 1e-10);

  const auto peaked = integrate_scalar([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0);
  CHECK(peaked.value == Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-10));
}

TEST_CASE("vector integrands are integrated component-wise") {
  const VectorIntegrand f = [](double x) {
    Eigen::ArrayXd v(3);
    v << std::sin(x) * std::sin(x), x * x, std::cos(3 * x);
    return v;
  };
  const auto r = integrate(f, 3, 0.0, kPi, 8);
  CHECK(r.value(0) == Approx(kPi / 2).epsilon(1e-12));
  CHECK(r.value(1) == Approx(kPi * kPi * kPi / 3).epsilon(1e-12));
  CHECK(std::abs(r.value(2)) <= 1e-10);
  CHECK(r.evaluations > 0);
}

TEST_CASE("quadrature reports failure instead of returning a bad value") {
  QuadratureOptions tight;
  tight.max_evaluations = 50;
  CHECK_THROWS_AS(integrate_scalar([](double x) { return std::sin(40 * x); }, 0.0, 10.0, 1, tight), ToleranceNotMet);
  CHECK_THROWS_AS(integrate_scalar([](double x) { return x; }, 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(integrate_scalar([](double x) { return x; }, 0.0, 1.0, 0), InvalidParameter);
}

TEST_CASE("single-weight moments agree with the series") {
  std::mt19937_64 rng(2);
  const auto m = oracle::random_modes(rng, 6);
  const auto s = TruncatedSpectrum::from_coefficients(oracle::to_eigen(m));
  const auto phi = phi_moments(s);
  const auto lz = lz_moments(s);
  const auto trig = trig_report(s);
  CHECK(quad_phi_moment(s, 0).value == Approx(1.0).epsilon(1e-11));
  CHECK(std::abs(quad_phi_moment(s, 1).value - phi.mean) <= 1e-10);
  CHECK(std::abs(quad_phi_moment(s, 2).value - phi.second) <= 1e-10);
  CHECK(std::abs(quad_lz_moment(s, 1).value - lz.mean) <= 1e-10);
  CHECK(std::abs(quad_lz_moment(s, 2).value - lz.second) <= 1e-9);
  CHECK(std::abs(quad_trig_moment(s, TrigWeight::sin).value - trig.mean_sin) <= 1e-10);
  CHECK(std::abs(quad_trig_moment(s, TrigWeight::cos).value - trig.mean_cos) <= 1e-10);
  CHECK(std::abs(quad_trig_moment(s, TrigWeight::sin_sq).value - trig.second_sin) <= 1e-10);
  CHECK(std::abs(quad_trig_moment(s, TrigWeight::cos_sq).value - trig.second_cos) <= 1e-10);
  CHECK_THROWS_AS(quad_phi_moment(s, 3), InvalidParameter);
  CHECK_THROWS_AS(quad_lz_moment(s, 0), InvalidParameter);
}

TEST_CASE("comparison table covers every moment") {
  const auto s = build_spectrum(exponential_family(), 1.0);
  const auto t = compare_report(s, 1e-8);
  CHECK(t.all_pass);
  CHECK(t.rows.size() == 13);
  for (const auto& row : t.rows) {
    CAPTURE(row.quantity);
    CHECK(row.applicable);
    CHECK(row.abs_diff <= 1e-8);
  }
}

TEST_CASE("comparison table marks divergent L_z rows as not applicable") {
  const auto s = build_spectrum(polynomial_family(), 1.4, 1e-6);
  const auto t = compare_report(s, 1e-8);
  CHECK(t.all_pass);
  int skipped = 0;
  for (const auto& row : t.rows) {
    if (!row.applicable) {
      ++skipped;
      CHECK(row.quantity.find("lz") != std::string::npos);
      CHECK(row.note.find("Divergent") != std::string::npos);
    }
  }
  CHECK(skipped == 3);
}

TEST_CASE("oracle failure is reported as a failing row") {
  const auto s = build_spectrum(exponential_family(), 0.5);
  QuadratureOptions starved;
  starved.max_evaluations = 100;
  const auto t = compare_report(s, 1e-8, starved);
  CHECK_FALSE(t.all_pass);
  CHECK_FALSE(t.rows.front().oracle.has_value());
}

TEST_CASE("small alpha: the quadrature still resolves a sharply peaked state") {
  const auto s = build_spectrum(exponential_family(), 0.01);
  const auto t = compare_report(s, 1e-7);
  CHECK(t.all_pass);
}
