#include "unclab/moments.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "unclab/errors.hpp"
#include "unclab/summation.hpp"

namespace unclab {

namespace {

constexpr double kPi = std::numbers::pi;

// Contributions below this are dropped from the shell expansion; the
// remainder bound is rigorous, so the truncation error stays below it.
constexpr double kShellDropTolerance = 1e-17;

struct ShellSums {
  double xi = 0.0;   // 2 sum_{k>=1} (-1)^k Re S_k / k^2
  double odd = 0.0;  // 2 sum_{k>=1} (-1)^k Im S_k / k
};

// mass of |C_n|^2 outside |n| < m, for m = 0..N+1.
std::vector<double> outer_mass(const TruncatedSpectrum& s) {
  const long N = s.cutoff();
  const auto& c = s.coeffs();
  std::vector<double> out(N + 2, 0.0);
  CompensatedSum<double> acc;
  for (long m = N; m >= 0; --m) {
    acc += std::norm(c(N + m));
    if (m != 0) acc += std::norm(c(N - m));
    out[m] = acc.value();
  }
  return out;
}

Complex shell_real(const Eigen::ArrayXcd& c, long k) {
  const long L = c.size();
  CompensatedSum<double> acc;
  for (long i = k; i < L; ++i) acc += c(i - k).real() * c(i).real();
  return {acc.value(), 0.0};
}

Complex shell_complex(const Eigen::ArrayXcd& c, long k) {
  const long L = c.size();
  CompensatedSum<Complex> acc;
  for (long i = k; i < L; ++i) acc += std::conj(c(i - k)) * c(i);
  return acc.value();
}

// S_{-k} = conj(S_k), so pairing the shells +k and -k leaves the xi kernel
// real and the <phi> kernel (-1)^k/(ik) purely real as well.
ShellSums shell_sums(const TruncatedSpectrum& s) {
  const long L = s.coeffs().size();
  if (L <= 1) return {};

  const auto tails = outer_mass(s);
  const double mass = s.mass();
  const double weight = 1.0 / mass;  // 2 pi |A|^2
  const bool real = s.is_real();

  CompensatedSum<double> xi;
  CompensatedSum<double> odd;
  for (long k = 1; k < L; ++k) {
    const Complex shell = real ? shell_real(s.coeffs(), k) : shell_complex(s.coeffs(), k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double kd = static_cast<double>(k);
    xi += 2.0 * sign * shell.real() / (kd * kd);
    if (!real) odd += 2.0 * sign * shell.imag() / kd;

    // |S_j| <= 2 sqrt(T(ceil(j/2)) mass) for every j > k.
    const long half = (k + 2) / 2;
    const double envelope = half < static_cast<long>(tails.size()) ? 2.0 * std::sqrt(tails[half] * mass) : 0.0;
    const double xi_rest = 4.0 * weight * envelope / kd;
    const double odd_rest = real ? 0.0 : 2.0 * weight * envelope * (1.0 + std::log(static_cast<double>(L) / kd));
    if (xi_rest < kShellDropTolerance && odd_rest < kShellDropTolerance) break;
  }
  return {xi.value(), odd.value()};
}

}  // namespace

double MomentReport::product() const { return std::sqrt(product_sq); }

Complex coefficient_shell(const TruncatedSpectrum& s, long k) {
  const auto& c = s.coeffs();
  const long L = c.size();
  if (k >= L || k <= -L) return {};
  if (k < 0) return std::conj(coefficient_shell(s, -k));
  return s.is_real() ? shell_real(c, k) : shell_complex(c, k);
}

double xi_sum(const TruncatedSpectrum& s) { return shell_sums(s).xi; }

namespace {

PhiMoments phi_from_shells(const TruncatedSpectrum& s, const ShellSums& shells) {
  const double weight = 1.0 / s.mass();
  PhiMoments m;
  // 4 pi |A|^2 xi = 2 xi / mass
  m.second = kPi * kPi / 3.0 + 2.0 * weight * shells.xi;
  m.mean = weight * shells.odd;
  m.var = m.second - m.mean * m.mean;
  return m;
}

}  // namespace

PhiMoments phi_moments(const TruncatedSpectrum& s) { return phi_from_shells(s, shell_sums(s)); }

LzMoments lz_moments(const TruncatedSpectrum& s) {
  switch (s.second_moment_status()) {
    case SecondMomentStatus::divergent:
      throw DivergentMoment("sum n^2 |C_n|^2 diverges: <L_z^2> is infinite for this state");
    case SecondMomentStatus::unresolved:
      throw NonConvergent("second-moment tail was not resolved when the spectrum was built");
    case SecondMomentStatus::resolved:
      break;
  }

  const long N = s.cutoff();
  const auto& c = s.coeffs();
  const double weight = 1.0 / s.mass();

  CompensatedSum<double> first;
  for (long n = N; n >= 1; --n) {
    first += static_cast<double>(n) * std::norm(c(N + n));
    first -= static_cast<double>(n) * std::norm(c(N - n));
  }
  LzMoments m;
  m.mean = weight * first.value();

  // Central second moment in one more pass; avoids cancellation in
  // <L_z^2> - <L_z>^2 for states with a large mean.
  CompensatedSum<double> second;
  CompensatedSum<double> central;
  for (long n = N; n >= -N; --n) {
    const double p = std::norm(c(N + n));
    if (p == 0.0) continue;
    const double nd = static_cast<double>(n);
    second += nd * nd * p;
    central += (nd - m.mean) * (nd - m.mean) * p;
  }
  m.second = weight * second.value();
  m.var = weight * central.value();
  return m;
}

MomentReport uncertainty_report(const TruncatedSpectrum& s) {
  const LzMoments lz = lz_moments(s);
  const ShellSums shells = shell_sums(s);
  const PhiMoments phi = phi_from_shells(s, shells);

  MomentReport r;
  r.mean_phi = phi.mean;
  r.second_phi = phi.second;
  r.var_phi = phi.var;
  r.mean_lz = lz.mean;
  r.second_lz = lz.second;
  r.var_lz = lz.var;
  r.xi = shells.xi;
  r.product_sq = phi.var * lz.var;
  r.state_bound = 0.5 * TruncatedSpectrum::hbar * std::abs(1.0 - 2.0 * kPi * boundary_density(s));
  return r;
}

TrigReport trig_report(const TruncatedSpectrum& s) {
  const double weight = 1.0 / s.mass();
  const Complex s1 = coefficient_shell(s, 1);
  const Complex s2 = coefficient_shell(s, 2);

  TrigReport t;
  t.mean_cos = weight * s1.real();
  t.mean_sin = -weight * s1.imag();
  const double mean_cos2 = weight * s2.real();  // <cos 2 phi>
  t.second_cos = 0.5 + 0.5 * mean_cos2;
  t.second_sin = 0.5 - 0.5 * mean_cos2;
  t.var_cos = t.second_cos - t.mean_cos * t.mean_cos;
  t.var_sin = t.second_sin - t.mean_sin * t.mean_sin;

  if (s.second_moment_status() == SecondMomentStatus::resolved) {
    const double var_lz = lz_moments(s).var;
    t.sin_relation_residual = var_lz * t.var_sin - 0.25 * t.mean_cos * t.mean_cos;
    t.cos_relation_residual = var_lz * t.var_cos - 0.25 * t.mean_sin * t.mean_sin;
  }
  return t;
}

}  // namespace unclab
