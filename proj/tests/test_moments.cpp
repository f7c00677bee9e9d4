#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "unclab/errors.hpp"
#include "unclab/moments.hpp"

using namespace unclab;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

void check_against(const TruncatedSpectrum& s, const oracle::Moments& ref, double tol) {
  const MomentReport r = uncertainty_report(s);
  const TrigReport t = trig_report(s);
  auto near = [tol](double got, long double want) { return std::abs(got - static_cast<double>(want)) <= tol; };
  CHECK(near(r.mean_phi, ref.mean_phi));
  CHECK(near(r.second_phi, ref.second_phi));
  CHECK(near(r.var_phi, ref.var_phi));
  CHECK(near(r.mean_lz, ref.mean_lz));
  CHECK(near(r.second_lz, ref.second_lz));
  CHECK(near(r.var_lz, ref.var_lz));
  CHECK(near(t.mean_sin, ref.mean_sin));
  CHECK(near(t.mean_cos, ref.mean_cos));
  CHECK(near(t.second_sin, ref.second_sin));
  CHECK(near(t.second_cos, ref.second_cos));
  CHECK(near(t.var_sin, ref.var_sin));
  CHECK(near(t.var_cos, ref.var_cos));
}

}  // namespace

TEST_CASE("random complex spectra match the pairwise double sum") {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 20; ++i) {
    const long N = 1 + i % 8;
    CAPTURE(i);
    const auto m = oracle::random_modes(rng, N);
    const auto s = TruncatedSpectrum::from_coefficients(oracle::to_eigen(m));
    check_against(s, oracle::double_sum(m), 1e-12);
  }
}

TEST_CASE("random complex spectra match Gauss-Legendre quadrature") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    const auto m = oracle::random_modes(rng, 1 + i % 8);
    const auto s = TruncatedSpectrum::from_coefficients(oracle::to_eigen(m));
    check_against(s, oracle::quadrature(m), 1e-11);
  }
}

TEST_CASE("wide random windows exercise the shell engine") {
  std::mt19937_64 rng(5);
  auto m = oracle::random_modes(rng, 150);
  for (long n = -150; n <= 150; ++n) m.c[static_cast<std::size_t>(n + 150)] *= std::exp(-0.02L * std::abs(n));
  const auto s = TruncatedSpectrum::from_coefficients(oracle::to_eigen(m));
  check_against(s, oracle::double_sum(m), 1e-11);
  const auto ref = oracle::double_sum(m);
  const long double xi_mass = (ref.second_phi - oracle::kPi * oracle::kPi / 3) / 2;
  CHECK(xi_sum(s) / s.mass() == Approx(static_cast<double>(xi_mass)).epsilon(1e-11));
}

TEST_CASE("two equal modes at +-1") {
  const auto s = build_spectrum(fixed_modes_family("two-mode", {{-1, 0.5}, {1, 0.5}}), 1.0);
  const MomentReport r = uncertainty_report(s);
  CHECK(std::abs(r.var_lz - 1.0) <= 1e-12);
  CHECK(std::abs(r.var_phi - (kPi * kPi / 3 + 0.5)) <= 1e-12);
  CHECK(std::abs(r.mean_phi) <= 1e-15);
  CHECK(std::abs(r.mean_lz) <= 1e-15);
  // f = cos(phi) / sqrt(pi): |f(pi)|^2 = 1/pi.
  CHECK(r.state_bound == Approx(0.5));
}

TEST_CASE("single mode: flat angle distribution, sharp L_z") {
  for (long m : {0L, 3L, -7L}) {
    const auto s = build_spectrum(single_mode_family(m), 1.0);
    const MomentReport r = uncertainty_report(s);
    CHECK(r.var_lz == 0.0);
    CHECK(r.mean_lz == Approx(static_cast<double>(m)));
    CHECK(r.var_phi == Approx(kPi * kPi / 3).epsilon(1e-15));
    CHECK(r.product() == 0.0);
    // |f|^2 = 1/(2 pi) everywhere: the state bound vanishes.
    CHECK(std::abs(r.state_bound) <= 1e-15);
  }
}

TEST_CASE("shifting every mode by m shifts <L_z> and nothing else") {
  std::mt19937_64 rng(3);
  const auto m = oracle::random_modes(rng, 5);
  Eigen::ArrayXcd base = oracle::to_eigen(m);
  Eigen::ArrayXcd shifted = Eigen::ArrayXcd::Zero(base.size() + 8);
  shifted.segment(8, base.size()) = base;  // n -> n + 4 on a window of radius 9
  const auto a = uncertainty_report(TruncatedSpectrum::from_coefficients(base));
  const auto b = uncertainty_report(TruncatedSpectrum::from_coefficients(shifted));
  CHECK(b.mean_lz == Approx(a.mean_lz + 4.0).epsilon(1e-13));
  CHECK(b.var_lz == Approx(a.var_lz).epsilon(1e-12));
  CHECK(b.var_phi == Approx(a.var_phi).epsilon(1e-12));
}

TEST_CASE("parity and time reversal") {
  std::mt19937_64 rng(17);
  const auto m = oracle::random_modes(rng, 6);
  const Eigen::ArrayXcd c = oracle::to_eigen(m);
  const auto a = uncertainty_report(TruncatedSpectrum::from_coefficients(c));
  // C_n -> C_{-n} is phi -> -phi.
  const auto p = uncertainty_report(TruncatedSpectrum::from_coefficients(c.reverse()));
  CHECK(p.mean_phi == Approx(-a.mean_phi).epsilon(1e-12));
  CHECK(p.mean_lz == Approx(-a.mean_lz).epsilon(1e-12));
  CHECK(p.var_phi == Approx(a.var_phi).epsilon(1e-12));
  // C_n -> conj(C_{-n}) is f -> conj(f): same density, reversed current.
  const auto t = uncertainty_report(TruncatedSpectrum::from_coefficients(c.reverse().conjugate()));
  CHECK(t.mean_phi == Approx(a.mean_phi).epsilon(1e-12));
  CHECK(t.mean_lz == Approx(-a.mean_lz).epsilon(1e-12));
  CHECK(t.var_lz == Approx(a.var_lz).epsilon(1e-12));
}

TEST_CASE("exponential family against high-precision values") {
  struct Row {
    double alpha, var_phi, var_lz, var_sin, var_cos, mean_cos;
  };
  const Row rows[] = {
      {0.5, 0.28068258071008979832, 1.8413471884155846379, 0.1460568778457309193, 0.06749538918834167055,
       0.88681888397007390866},
      {1.0, 0.98096306608776620117, 0.3620308304831552332, 0.32926179757407123407, 0.25076386081190269654,
       0.64805427366388539957},
      {2.0, 2.2763697815203844357, 0.038010914919035549627, 0.47318539952018397409, 0.45616377562665156022,
       0.26580222883407969212},
      {5.0, 3.2361026551299630066, 0.000090808104700950824196, 0.49993190422747637364, 0.49988651254157981968,
       0.013475282221304557306},
  };
  for (const auto& row : rows) {
    CAPTURE(row.alpha);
    const auto s = build_spectrum(exponential_family(), row.alpha);
    const auto r = uncertainty_report(s);
    const auto t = trig_report(s);
    // Angle moments are first order in the omitted amplitudes.
    CHECK(std::abs(r.var_phi - row.var_phi) <= 1e-9);
    CHECK(r.var_lz == Approx(row.var_lz).epsilon(1e-11));
    CHECK(std::abs(t.var_sin - row.var_sin) <= 1e-9);
    CHECK(std::abs(t.var_cos - row.var_cos) <= 1e-9);
    CHECK(std::abs(t.mean_cos - row.mean_cos) <= 1e-9);
  }
}

TEST_CASE("trig relations are satisfied") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    const auto m = oracle::random_modes(rng, 1 + i % 8);
    const auto t = trig_report(TruncatedSpectrum::from_coefficients(oracle::to_eigen(m)));
    REQUIRE(t.sin_relation_residual.has_value());
    CHECK(*t.sin_relation_residual >= -1e-12);
    CHECK(*t.cos_relation_residual >= -1e-12);
  }
}

TEST_CASE("autocorrelation shells") {
  std::mt19937_64 rng(8);
  const auto m = oracle::random_modes(rng, 7);
  const auto s = TruncatedSpectrum::from_coefficients(oracle::to_eigen(m));
  for (long k = -15; k <= 15; ++k) {
    oracle::cplx ref{};
    for (long n = -7; n <= 7; ++n) ref += std::conj(m.at(n - k)) * m.at(n);
    CHECK(std::abs(coefficient_shell(s, k) - Complex(ref)) <= 1e-12);
  }
  CHECK(std::abs(coefficient_shell(s, 3) - std::conj(coefficient_shell(s, -3))) <= 1e-14);
}

TEST_CASE("divergent and unresolved second moments raise") {
  const auto s = build_spectrum(polynomial_family(), 1.4, 1e-6);
  CHECK_THROWS_AS(lz_moments(s), DivergentMoment);
  CHECK_THROWS_AS(uncertainty_report(s), DivergentMoment);
  CHECK_NOTHROW(phi_moments(s));
  const auto t = trig_report(s);
  CHECK_FALSE(t.sin_relation_residual.has_value());
  CHECK_FALSE(t.cos_relation_residual.has_value());
}
