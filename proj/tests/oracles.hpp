#pragma once

// Reference computations used only by the tests. They share no code with the
// library: moments come from naive double sums over all mode pairs or from
// Gauss-Legendre quadrature of the directly summed wavefunction.

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<long double>;
constexpr long double kPi = std::numbers::pi_v<long double>;

/// Coefficients c_{-N..N} stored at index n + N.
struct Modes {
  long N = 0;
  std::vector<cplx> c;

  cplx at(long n) const { return (n < -N || n > N) ? cplx{} : c[static_cast<std::size_t>(n + N)]; }
  long double mass() const {
    long double m = 0;
    for (const auto& x : c) m += std::norm(x);
    return m;
  }
};

inline Modes from_eigen(const Eigen::ArrayXcd& a) {
  Modes m;
  m.N = (a.size() - 1) / 2;
  for (long i = 0; i < a.size(); ++i) m.c.emplace_back(a(i).real(), a(i).imag());
  return m;
}

inline Eigen::ArrayXcd to_eigen(const Modes& m) {
  Eigen::ArrayXcd a(static_cast<long>(m.c.size()));
  for (std::size_t i = 0; i < m.c.size(); ++i)
    a(static_cast<long>(i)) = {static_cast<double>(m.c[i].real()), static_cast<double>(m.c[i].imag())};
  return a;
}

/// Random complex window with |n| <= N and a nonzero centre.
inline Modes random_modes(std::mt19937_64& rng, long N) {
  std::normal_distribution<double> g(0.0, 1.0);
  Modes m;
  m.N = N;
  for (long n = -N; n <= N; ++n) m.c.emplace_back(g(rng), g(rng));
  return m;
}

struct Moments {
  long double mean_phi, second_phi, var_phi;
  long double mean_lz, second_lz, var_lz;
  long double mean_sin, mean_cos, second_sin, second_cos, var_sin, var_cos;
};

/// <g> = sum_{m,n} conj(c_m) c_n G(n - m) / mass with G(k) the Fourier
/// integral (1/2pi) int g(phi) e^{i k phi} dphi, written out for each weight.
inline Moments double_sum(const Modes& m) {
  const long double mass = m.mass();
  auto pair_sum = [&](auto&& G) {
    cplx s{};
    for (long a = -m.N; a <= m.N; ++a)
      for (long b = -m.N; b <= m.N; ++b) s += std::conj(m.at(a)) * m.at(b) * G(b - a);
    return s / mass;
  };
  auto sign = [](long k) { return (k % 2 == 0) ? 1.0L : -1.0L; };
  Moments r{};
  r.mean_phi = pair_sum([&](long k) { return k == 0 ? cplx{} : cplx{0, -sign(k) / k}; }).real();
  r.second_phi = pair_sum([&](long k) {
                   return k == 0 ? cplx{kPi * kPi / 3} : cplx{2 * sign(k) / (static_cast<long double>(k) * k)};
                 }).real();
  r.mean_cos = pair_sum([](long k) { return (k == 1 || k == -1) ? cplx{0.5L} : cplx{}; }).real();
  r.mean_sin = pair_sum([](long k) { return k == 1 ? cplx{0, 0.5L} : k == -1 ? cplx{0, -0.5L} : cplx{}; }).real();
  r.second_cos = pair_sum([](long k) {
                   return k == 0 ? cplx{0.5L} : (k == 2 || k == -2) ? cplx{0.25L} : cplx{};
                 }).real();
  r.second_sin = 1 - r.second_cos;
  long double l1 = 0, l2 = 0;
  for (long n = -m.N; n <= m.N; ++n) {
    l1 += n * std::norm(m.at(n));
    l2 += static_cast<long double>(n) * n * std::norm(m.at(n));
  }
  r.mean_lz = l1 / mass;
  r.second_lz = l2 / mass;
  r.var_phi = r.second_phi - r.mean_phi * r.mean_phi;
  r.var_lz = r.second_lz - r.mean_lz * r.mean_lz;
  r.var_sin = r.second_sin - r.mean_sin * r.mean_sin;
  r.var_cos = r.second_cos - r.mean_cos * r.mean_cos;
  return r;
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int order, std::vector<long double>& x, std::vector<long double>& w) {
  x.assign(order, 0);
  w.assign(order, 0);
  for (int i = 0; i < order; ++i) {
    long double z = std::cos(kPi * (i + 0.75L) / (order + 0.5L));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = z;
      for (int k = 2; k <= order; ++k) {
        const long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (z * p1 - p0) / (z * z - 1);
      const long double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-19L) break;
    }
    x[i] = z;
    w[i] = 2 / ((1 - z * z) * dp * dp);
  }
}

/// Composite Gauss-Legendre rule on [a, b].
inline long double integrate(const std::function<long double(long double)>& f, long double a, long double b,
                             int panels, int order = 20) {
  std::vector<long double> x, w;
  gauss_legendre(order, x, w);
  long double sum = 0;
  const long double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const long double lo = a + h * p, mid = lo + h / 2;
    for (int i = 0; i < order; ++i) sum += w[i] * f(mid + h / 2 * x[i]) * h / 2;
  }
  return sum;
}

/// f(phi) = sum c_n e^{i n phi} / sqrt(2 pi mass), summed directly.
inline cplx wavefunction(const Modes& m, long double phi) {
  cplx s{};
  for (long n = -m.N; n <= m.N; ++n) s += m.at(n) * std::polar(1.0L, n * phi);
  return s / std::sqrt(2 * kPi * m.mass());
}

inline cplx derivative(const Modes& m, long double phi) {
  cplx s{};
  for (long n = -m.N; n <= m.N; ++n) s += cplx{0, static_cast<long double>(n)} * m.at(n) * std::polar(1.0L, n * phi);
  return s / std::sqrt(2 * kPi * m.mass());
}

/// Moments by quadrature of |f|^2 against each weight.
inline Moments quadrature(const Modes& m, int panels = 0) {
  if (panels == 0) panels = static_cast<int>(4 * m.N + 8);
  auto q = [&](auto&& weight) {
    return integrate([&](long double p) { return weight(p) * std::norm(wavefunction(m, p)); }, -kPi, kPi, panels);
  };
  Moments r{};
  r.mean_phi = q([](long double p) { return p; });
  r.second_phi = q([](long double p) { return p * p; });
  r.mean_sin = q([](long double p) { return std::sin(p); });
  r.mean_cos = q([](long double p) { return std::cos(p); });
  r.second_sin = q([](long double p) { return std::sin(p) * std::sin(p); });
  r.second_cos = q([](long double p) { return std::cos(p) * std::cos(p); });
  r.mean_lz = integrate([&](long double p) { return (std::conj(wavefunction(m, p)) * derivative(m, p)).imag(); },
                        -kPi, kPi, panels);
  r.second_lz = integrate([&](long double p) { return std::norm(derivative(m, p)); }, -kPi, kPi, panels);
  r.var_phi = r.second_phi - r.mean_phi * r.mean_phi;
  r.var_lz = r.second_lz - r.mean_lz * r.mean_lz;
  r.var_sin = r.second_sin - r.mean_sin * r.mean_sin;
  r.var_cos = r.second_cos - r.mean_cos * r.mean_cos;
  return r;
}

}  // namespace oracle
