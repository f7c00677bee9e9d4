#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "unclab/closed_forms.hpp"
#include "unclab/errors.hpp"
#include "unclab/moments.hpp"

using namespace unclab;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Pairwise xi for C_n = |n|^{-alpha} with |n| <= N, in long double. O(N^2).
long double poly_var_phi_bruteforce(double alpha, long N) {
  std::vector<long double> c(2 * N + 1);
  long double mass = 0;
  for (long n = -N; n <= N; ++n) {
    c[n + N] = n == 0 ? 0 : std::pow(static_cast<long double>(std::abs(n)), -static_cast<long double>(alpha));
    mass += c[n + N] * c[n + N];
  }
  long double xi = 0;
  for (long k = 1; k <= 2 * N; ++k) {
    long double shell = 0;
    for (long n = -N + k; n <= N; ++n) shell += c[n - k + N] * c[n + N];
    xi += 2 * (k % 2 ? -1.0L : 1.0L) * shell / (static_cast<long double>(k) * k);
  }
  return std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 3 + 2 * xi / mass;
}

}  // namespace

TEST_CASE("exponential closed forms against high-precision values") {
  struct Row {
    double alpha, var_phi, var_lz, var_sin, var_cos, mean_cos, boundary;
  };
  const Row rows[] = {
      {0.5, 0.28068258071008979832, 1.8413471884155846379, 0.1460568778457309193, 0.06749538918834167055,
       0.88681888397007390866, 0.004411801688505603728},
      {1.0, 0.98096306608776620117, 0.3620308304831552332, 0.32926179757407123407, 0.25076386081190269654,
       0.64805427366388539957, 0.025884985180750779278},
      {2.0, 2.2763697815203844357, 0.038010914919035549627, 0.47318539952018397409, 0.45616377562665156022,
       0.26580222883407969212, 0.088993194454535433938},
      {5.0, 3.2361026551299630066, 0.000090808104700950824196, 0.49993190422747637364, 0.49988651254157981968,
       0.013475282221304557306, 0.15490859245040661319},
  };
  for (const auto& r : rows) {
    CAPTURE(r.alpha);
    const ExpFamilyEval e = exp_closed(r.alpha);
    CHECK(e.var_phi == Approx(r.var_phi).epsilon(1e-13));
    CHECK(e.var_lz == Approx(r.var_lz).epsilon(1e-13));
    CHECK(e.var_sin == Approx(r.var_sin).epsilon(1e-13));
    CHECK(e.var_cos == Approx(r.var_cos).epsilon(1e-13));
    CHECK(e.mean_cos == Approx(r.mean_cos).epsilon(1e-13));
    CHECK(e.boundary_density == Approx(r.boundary).epsilon(1e-13));
    CHECK(e.norm_sq == Approx(std::tanh(r.alpha) / (2 * kPi)).epsilon(1e-15));
  }
}

TEST_CASE("exponential closed forms at alpha = 1") {
  const ExpFamilyEval e = exp_closed(1.0);
  CHECK(e.dilog_value == Approx(-0.338648).epsilon(1e-5));
  CHECK(e.g_value == Approx(-4 * std::tanh(1.0) * std::log1p(std::exp(-1.0))).epsilon(1e-15));
  CHECK(e.product_sq() == Approx(0.355139).epsilon(1e-5));
}

TEST_CASE("closed forms agree with the generic series engine") {
  for (double alpha : {0.01, 0.1, 0.7, 1.3, 3.0, 8.0}) {
    CAPTURE(alpha);
    const ExpFamilyEval e = exp_closed(alpha);
    const auto s = build_spectrum(exponential_family(), alpha);
    const MomentReport r = uncertainty_report(s);
    const TrigReport t = trig_report(s);
    CHECK(std::abs(r.var_phi - e.var_phi) <= 1e-9);
    CHECK(r.var_lz == Approx(e.var_lz).epsilon(1e-11));
    CHECK(std::abs(t.var_sin - e.var_sin) <= 1e-9);
    CHECK(std::abs(t.var_cos - e.var_cos) <= 1e-9);
  }
}

TEST_CASE("closed forms stay finite and ordered at extreme alpha") {
  for (double alpha : {1e-6, 1e-3, 50.0, 300.0, 800.0}) {
    CAPTURE(alpha);
    const ExpFamilyEval e = exp_closed(alpha);
    CHECK(std::isfinite(e.var_phi));
    CHECK(std::isfinite(e.var_lz));
    CHECK(e.var_phi > 0.0);
    CHECK(e.var_lz >= 0.0);
    CHECK(e.var_phi <= kPi * kPi / 3);
  }
  CHECK(exp_closed(1e-3).product_sq() == Approx(0.5).epsilon(1e-2));
  CHECK_THROWS_AS(exp_closed(0.0), InvalidParameter);
  CHECK_THROWS_AS(exp_closed(INFINITY), InvalidParameter);
}

TEST_CASE("resummed xi matches the shell double sum") {
  for (double alpha : {0.05, 0.5, 1.0, 4.0}) {
    CAPTURE(alpha);
    const auto s = build_spectrum(exponential_family(), alpha);
    CHECK(exp_xi_resummed(alpha) == Approx(xi_sum(s)).epsilon(1e-9));
    CHECK(kPi * kPi / 3 + 2 * std::tanh(alpha) * exp_xi_resummed(alpha) == Approx(exp_closed(alpha).var_phi).epsilon(1e-11));
  }
  // sigma_phi^2 -> 0 as alpha -> 0, so 2 xi / mass -> -pi^2/3.
  CHECK(2 * std::tanh(1e-4) * exp_xi_resummed(1e-4) == Approx(-kPi * kPi / 3).epsilon(1e-6));
  CHECK_THROWS_AS(exp_xi_resummed(1e-4, 100), NonConvergent);
}

TEST_CASE("polynomial closed forms") {
  CHECK(poly_closed(2.0).var_lz == Approx(1.5198177546350665717).epsilon(1e-13));
  CHECK(poly_closed(3.0).var_lz == Approx(1.0638724282445466002).epsilon(1e-13));
  CHECK(poly_closed(4.0).var_lz == Approx(1.0132118364233777144).epsilon(1e-13));
  CHECK(poly_closed(3.0).norm_sq == Approx(1 / (4 * kPi * 1.0173430619844491397)).epsilon(1e-13));

  const long N = 3000;
  for (double alpha : {3.0, 5.0}) {
    CAPTURE(alpha);
    CHECK(poly_closed(alpha).var_phi == Approx(static_cast<double>(poly_var_phi_bruteforce(alpha, N))).epsilon(1e-8));
  }
}

TEST_CASE("polynomial family tends to the two-mode limit") {
  const PolyFamilyEval p = poly_closed(50.0);
  CHECK(p.var_lz == Approx(1.0).epsilon(1e-12));
  CHECK(p.var_phi == Approx(kPi * kPi / 3 + 0.5).epsilon(1e-12));
  CHECK(p.product_sq() == Approx(3.78986813369645).epsilon(1e-10));
}

TEST_CASE("polynomial family needs alpha > 3/2") {
  CHECK_THROWS_AS(poly_closed(1.5), DivergentMoment);
  CHECK_THROWS_AS(poly_closed(1.0), DivergentMoment);
  CHECK_THROWS_AS(poly_closed(0.3), DivergentMoment);
  CHECK_NOTHROW(poly_closed(1.6));
  CHECK_THROWS_AS(poly_closed(std::nan("")), InvalidParameter);
}
