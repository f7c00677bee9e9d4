#include "unclab/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "unclab/errors.hpp"
#include "unclab/summation.hpp"

namespace unclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kTailWindow = 8;

// Holds the last kTailWindow terms of a series in index order.
class TermWindow {
 public:
  void push(long index, double term) {
    if (size_ == kTailWindow) {
      std::shift_left(terms_.begin(), terms_.end(), 1);
      std::shift_left(indices_.begin(), indices_.end(), 1);
      --size_;
    }
    terms_[size_] = term;
    indices_[size_] = index;
    ++size_;
  }
  bool full() const { return size_ == kTailWindow; }
  TailMajorant majorant() const {
    return estimate_tail(std::span<const double>(terms_.data(), size_),
                         std::span<const long>(indices_.data(), size_));
  }

 private:
  std::array<double, kTailWindow> terms_{};
  std::array<long, kTailWindow> indices_{};
  int size_ = 0;
};

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidParameter("alpha must be a positive finite number");
}

Complex checked(const CoefficientFamily& family, long n, double alpha) {
  const Complex c = family(n, alpha);
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    std::ostringstream msg;
    msg << "family '" << family.name << "' returned a non-finite coefficient at n=" << n
        << ", alpha=" << alpha;
    throw InvalidParameter(msg.str());
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Families

CoefficientFamily exponential_family() {
  CoefficientFamily f;
  f.name = "exp";
  f.rule = [](long n, double alpha) { return Complex{std::exp(-alpha * std::abs(static_cast<double>(n)))}; };
  f.kind = FamilyKind::exponential;
  return f;
}

CoefficientFamily polynomial_family() {
  CoefficientFamily f;
  f.name = "poly";
  f.rule = [](long n, double alpha) {
    if (n == 0) return Complex{};
    return Complex{std::pow(std::abs(static_cast<double>(n)), -alpha)};
  };
  f.kind = FamilyKind::polynomial;
  return f;
}

CoefficientFamily single_mode_family(long m) {
  CoefficientFamily f;
  f.name = "single_mode(" + std::to_string(m) + ")";
  f.rule = [m](long n, double) { return n == m ? Complex{1.0} : Complex{}; };
  f.is_symmetric = (m == 0);
  f.kind = FamilyKind::single_mode;
  f.support_radius = std::abs(m);
  return f;
}

CoefficientFamily fixed_modes_family(std::string name, std::vector<std::pair<long, Complex>> modes) {
  long radius = 0;
  bool real = true;
  for (const auto& [n, c] : modes) {
    radius = std::max(radius, std::abs(n));
    real = real && c.imag() == 0.0;
  }
  auto lookup = [modes](long n, double) {
    Complex sum{};
    for (const auto& [m, c] : modes)
      if (m == n) sum += c;
    return sum;
  };
  bool symmetric = true;
  for (long n = 1; n <= radius; ++n) symmetric = symmetric && std::abs(lookup(n, 1.0)) == std::abs(lookup(-n, 1.0));

  CoefficientFamily f;
  f.name = std::move(name);
  f.rule = std::move(lookup);
  f.is_real = real;
  f.is_symmetric = symmetric;
  f.support_radius = radius;
  return f;
}

CoefficientFamily rescaled(const CoefficientFamily& family, double factor) {
  if (!(factor > 0.0)) throw InvalidParameter("rescale factor must be positive");
  CoefficientFamily f = family;
  f.name = family.name + "*" + std::to_string(factor);
  f.rule = [inner = family.rule, factor](long n, double alpha) { return factor * inner(n, alpha); };
  f.kind = FamilyKind::custom;
  return f;
}

void validate_family_metadata(const CoefficientFamily& family, std::span<const double> alphas, long n_range) {
  for (const double alpha : alphas) {
    for (long n = -n_range; n <= n_range; ++n) {
      const Complex c = family(n, alpha);
      if (family.is_real && c.imag() != 0.0) {
        std::ostringstream msg;
        msg << "family '" << family.name << "' claims real coefficients but C_" << n << "(" << alpha
            << ") has imaginary part " << c.imag();
        throw InvalidParameter(msg.str());
      }
      if (family.is_symmetric && n > 0) {
        const double a = std::abs(c);
        const double b = std::abs(family(-n, alpha));
        if (std::abs(a - b) > 1e-14 * std::max(a, b)) {
          std::ostringstream msg;
          msg << "family '" << family.name << "' claims |C_n| = |C_-n| but n=" << n << ", alpha=" << alpha
              << " gives " << a << " vs " << b;
          throw InvalidParameter(msg.str());
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Tail majorant

TailMajorant estimate_tail(std::span<const double> terms, std::span<const long> indices) {
  std::array<std::size_t, kTailWindow * 4> nz{};
  std::size_t count = 0;
  for (std::size_t i = 0; i < terms.size() && count < nz.size(); ++i)
    if (terms[i] != 0.0) nz[count++] = i;

  if (count == 0) return {0.0, 0.0, kInf};
  if (count == 1) return {kInf, kInf, 0.0};

  double ratio = 0.0;
  for (std::size_t j = 1; j < count; ++j) {
    const double gap = static_cast<double>(indices[nz[j]] - indices[nz[j - 1]]);
    const double r = terms[nz[j]] / terms[nz[j - 1]];
    ratio = std::max(ratio, gap == 1.0 ? r : std::pow(r, 1.0 / gap));
  }

  const double t_first = terms[nz[0]];
  const double t_last = terms[nz[count - 1]];
  const double n_first = static_cast<double>(indices[nz[0]]);
  const double n_last = static_cast<double>(indices[nz[count - 1]]);
  const double exponent = std::log(t_first / t_last) / std::log(n_last / n_first);

  if (!(ratio < 1.0) || !(exponent > 1.0)) return {kInf, ratio, exponent};

  const double geometric = t_last * ratio / (1.0 - ratio);
  const double integral = t_last * n_last / (exponent - 1.0);
  return {std::max(geometric, integral), ratio, exponent};
}

// ---------------------------------------------------------------------------
// TruncatedSpectrum

TruncatedSpectrum::TruncatedSpectrum(double alpha, Eigen::ArrayXcd coeffs, double tail_bound,
                                     double norm_tail, SecondMomentStatus status)
    : alpha_(alpha),
      cutoff_(static_cast<long>((coeffs.size() - 1) / 2)),
      coeffs_(std::move(coeffs)),
      tail_bound_(tail_bound),
      norm_tail_(norm_tail),
      second_moment_status_(status) {
  CompensatedSum<double> mass;
  for (long n = cutoff_; n >= 1; --n) {
    mass += std::norm(coeffs_(cutoff_ + n));
    mass += std::norm(coeffs_(cutoff_ - n));
  }
  mass += std::norm(coeffs_(cutoff_));
  const double total = mass.value();
  if (!(total >= std::numeric_limits<double>::min()))
    throw DegenerateState("all Fourier coefficients vanish or underflow");
  mass_ = total;
  norm_sq_ = 1.0 / (2.0 * std::numbers::pi * total);
  amplitude_ = std::sqrt(norm_sq_);
  is_real_ = (coeffs_.imag() == 0.0).all();
}

TruncatedSpectrum TruncatedSpectrum::from_coefficients(Eigen::ArrayXcd coeffs, double alpha) {
  if (coeffs.size() % 2 != 1) throw InvalidParameter("coefficient window must have odd length 2N+1");
  if (!coeffs.allFinite()) throw InvalidParameter("coefficients must be finite");
  return TruncatedSpectrum(alpha, std::move(coeffs), 0.0, 0.0, SecondMomentStatus::resolved);
}

TruncatedSpectrum build_spectrum(const CoefficientFamily& family, double alpha, double rel_tol, long n_max,
                                 TailTarget target) {
  require_alpha(alpha);
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidParameter("rel_tol must lie in (0, 1)");
  if (n_max < 1) throw InvalidParameter("n_max must be at least 1");

  long limit = n_max;
  if (family.support_radius) {
    if (*family.support_radius > n_max)
      throw NonConvergent("family support radius exceeds n_max");
    limit = *family.support_radius;
  }

  std::vector<Complex> pos{checked(family, 0, alpha)};
  std::vector<Complex> neg{Complex{}};
  CompensatedSum<double> norm_sum(std::norm(pos[0]));
  CompensatedSum<double> second_sum;
  TermWindow norm_window;
  TermWindow second_window;

  long stop = -1;
  double norm_tail = 0.0;
  double second_tail = 0.0;
  auto status = SecondMomentStatus::resolved;

  for (long n = 1; n <= limit; ++n) {
    const Complex cp = checked(family, n, alpha);
    const Complex cm = checked(family, -n, alpha);
    pos.push_back(cp);
    neg.push_back(cm);
    const double u = std::norm(cp) + std::norm(cm);
    const double t = static_cast<double>(n) * static_cast<double>(n) * u;
    norm_sum += u;
    second_sum += t;
    if (family.support_radius) continue;

    norm_window.push(n, u);
    second_window.push(n, t);
    if (!norm_window.full()) continue;

    const TailMajorant nm = norm_window.majorant();
    const TailMajorant sm = second_window.majorant();
    const bool norm_ok = nm.bound <= rel_tol * norm_sum.value();
    const bool second_ok = sm.bound <= rel_tol * second_sum.value();
    const bool second_diverges = sm.bound == kInf && sm.exponent <= 1.0 && sm.ratio < kInf;

    if (!norm_ok) continue;
    if (target == TailTarget::second_moment && !second_ok && !second_diverges) continue;

    stop = n;
    norm_tail = nm.bound;
    second_tail = sm.bound;
    status = second_ok ? SecondMomentStatus::resolved
                       : (second_diverges ? SecondMomentStatus::divergent : SecondMomentStatus::unresolved);
    break;
  }

  if (family.support_radius) stop = limit;
  if (stop < 0) {
    std::ostringstream msg;
    msg << "tail criterion (rel_tol=" << rel_tol << ") not met for family '" << family.name
        << "' at alpha=" << alpha << " within n_max=" << n_max;
    throw NonConvergent(msg.str());
  }

  // Trailing zero modes carry no information; drop them.
  long cutoff = stop;
  while (cutoff > 0 && pos[cutoff] == Complex{} && neg[cutoff] == Complex{}) --cutoff;

  Eigen::ArrayXcd window(2 * cutoff + 1);
  window(cutoff) = pos[0];
  for (long n = 1; n <= cutoff; ++n) {
    window(cutoff + n) = pos[n];
    window(cutoff - n) = neg[n];
  }
  if (status == SecondMomentStatus::divergent) second_tail = kInf;
  return TruncatedSpectrum(alpha, std::move(window), second_tail, norm_tail, status);
}

// ---------------------------------------------------------------------------
// State evaluation

namespace {

// Calls visit(n, e^{i n phi}) for n = 1..N, re-anchoring the rotation
// recurrence periodically to keep phase drift at rounding level.
template <typename Visit>
void for_each_phase(long N, double phi, Visit&& visit) {
  constexpr long kResync = 32;
  const Complex step = std::polar(1.0, phi);
  Complex w{1.0};
  for (long n = 1; n <= N; ++n) {
    w = (n % kResync == 0) ? std::polar(1.0, static_cast<double>(n) * phi) : w * step;
    visit(n, w);
  }
}

}  // namespace

StateSample evaluate_state(const TruncatedSpectrum& s, double phi) {
  const long N = s.cutoff();
  const auto& c = s.coeffs();
  Complex sum = c(N);
  for_each_phase(N, phi, [&](long n, Complex w) { sum += c(N + n) * w + c(N - n) * std::conj(w); });
  return {phi, s.amplitude() * sum};
}

std::pair<Complex, Complex> evaluate_with_derivative(const TruncatedSpectrum& s, double phi) {
  const long N = s.cutoff();
  const auto& c = s.coeffs();
  Complex value = c(N);
  Complex slope{};
  for_each_phase(N, phi, [&](long n, Complex w) {
    const Complex up = c(N + n) * w;
    const Complex down = c(N - n) * std::conj(w);
    value += up + down;
    slope += static_cast<double>(n) * (up - down);
  });
  const double a = s.amplitude();
  return {a * value, Complex{0.0, a} * slope};
}

double boundary_density(const TruncatedSpectrum& s) {
  // e^{i n pi} = (-1)^n exactly; avoids rounding in the phase.
  const long N = s.cutoff();
  const auto& c = s.coeffs();
  CompensatedSum<Complex> sum(c(N));
  for (long n = 1; n <= N; ++n) {
    const Complex pair = c(N + n) + c(N - n);
    sum += (n % 2 == 0) ? pair : -pair;
  }
  return s.norm_sq() * std::norm(sum.value());
}

// ---------------------------------------------------------------------------
// Tail of the second moment

TailSum tail_second_moment_bound(const CoefficientFamily& family, double alpha, long N, long n_probe_max) {
  require_alpha(alpha);
  if (N < 1) throw InvalidParameter("tail cutoff N must be at least 1");

  long limit = std::max(n_probe_max, N + kTailWindow);
  if (family.support_radius) {
    if (N >= *family.support_radius) return {0.0, 0.0, N, true};
    limit = *family.support_radius;
  }

  CompensatedSum<double> retained;
  TermWindow window;
  TailMajorant last{kInf, kInf, 0.0};
  for (long n = N + 1; n <= limit; ++n) {
    const double u = std::norm(checked(family, n, alpha)) + std::norm(checked(family, -n, alpha));
    const double t = static_cast<double>(n) * static_cast<double>(n) * u;
    retained += t;
    if (family.support_radius) continue;
    window.push(n, t);
    if (!window.full()) continue;
    last = window.majorant();
    if (last.bound <= 1e-14 * retained.value()) return {retained.value(), last.bound, n, true};
  }
  if (family.support_radius) return {retained.value(), 0.0, limit, true};
  return {retained.value(), last.bound, limit, false};
}

std::vector<double> tail_second_moment(const CoefficientFamily& family, std::span<const double> alphas, long N,
                                       long n_probe_max) {
  if (alphas.empty()) throw InvalidParameter("alpha grid must be nonempty");
  std::vector<double> out;
  out.reserve(alphas.size());
  for (const double alpha : alphas) {
    const TailSum tail = tail_second_moment_bound(family, alpha, N, n_probe_max);
    if (tail.converged) {
      out.push_back(tail.retained);
      continue;
    }
    // Clean power-law decay: add the midpoint integral of the fitted law
    // c n^{-p}, which is accurate far beyond the reach of explicit summation.
    if (!std::isfinite(tail.remainder)) {
      std::ostringstream msg;
      msg << "second-moment tail of family '" << family.name << "' does not converge at alpha=" << alpha;
      throw NonConvergent(msg.str());
    }
    const double n = static_cast<double>(tail.probe);
    const double t_n = static_cast<double>(tail.probe) * static_cast<double>(tail.probe) *
                       (std::norm(family(tail.probe, alpha)) + std::norm(family(-tail.probe, alpha)));
    const double t_prev = (n - 1.0) * (n - 1.0) *
                          (std::norm(family(tail.probe - 1, alpha)) + std::norm(family(-tail.probe + 1, alpha)));
    const double p = std::log(t_prev / t_n) / std::log(n / (n - 1.0));
    if (!(p > 1.0)) throw NonConvergent("second-moment tail decays too slowly to estimate");
    const double estimate = t_n * std::pow(n, p) * std::pow(n + 0.5, 1.0 - p) / (p - 1.0);
    out.push_back(tail.retained + estimate);
  }
  return out;
}

}  // namespace unclab
