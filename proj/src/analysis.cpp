#include "unclab/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "unclab/closed_forms.hpp"
#include "unclab/errors.hpp"
#include "unclab/moments.hpp"

namespace unclab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw InvalidParameter("alpha grid must be nonempty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw InvalidParameter("alpha grid values must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidParameter("alpha grid must be strictly increasing");
  }
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  // Column scaling keeps the QR well conditioned when basis magnitudes differ wildly.
  const Eigen::VectorXd scale = design.colwise().norm().transpose().cwiseMax(1e-300);
  const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();
  const Eigen::VectorXd z = scaled.colPivHouseholderQr().solve(y);
  return z.cwiseQuotient(scale);
}

// Intercept of y = L + c h(alpha).
double extrapolated_limit(std::span<const double> h, std::span<const double> y) {
  Eigen::MatrixXd design(static_cast<long>(h.size()), 2);
  Eigen::VectorXd rhs(static_cast<long>(h.size()));
  for (std::size_t i = 0; i < h.size(); ++i) {
    design(static_cast<long>(i), 0) = 1.0;
    design(static_cast<long>(i), 1) = h[i];
    rhs(static_cast<long>(i)) = y[i];
  }
  return least_squares(design, rhs)(0);
}

}  // namespace

double UncertaintyPoint::product() const { return std::sqrt(var_phi * var_lz); }

UncertaintyPoint evaluate_point(const CoefficientFamily& family, double alpha, const SeriesOptions& opts) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidParameter("alpha must be positive and finite");

  if (opts.route == Route::automatic) {
    if (family.kind == FamilyKind::exponential) {
      const ExpFamilyEval e = exp_closed(alpha);
      return {alpha, e.var_phi, e.var_lz, 0.5 * std::abs(1.0 - 2.0 * kPi * e.boundary_density), -1};
    }
    if (family.kind == FamilyKind::polynomial) {
      const PolyFamilyEval p = poly_closed(alpha);
      return {alpha, p.var_phi, p.var_lz, 0.5 * std::abs(1.0 - 2.0 * kPi * p.boundary_density), p.cutoff};
    }
  }

  const TruncatedSpectrum s = build_spectrum(family, alpha, opts.rel_tol, opts.n_max);
  const MomentReport r = uncertainty_report(s);
  return {alpha, r.var_phi, r.var_lz, r.state_bound, s.cutoff()};
}

double uncertainty_product(const CoefficientFamily& family, double alpha, const SeriesOptions& opts) {
  try {
    return evaluate_point(family, alpha, opts).product();
  } catch (const DivergentMoment&) {
    return kInf;
  }
}

std::vector<double> linear_grid(double lo, double hi, long points) {
  if (points < 2 || !(hi > lo)) throw InvalidParameter("grid needs lo < hi and at least two points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (long i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  g.back() = hi;
  return g;
}

std::vector<double> log_grid(double lo, double hi, long points) {
  if (points < 2 || !(hi > lo) || !(lo > 0.0)) throw InvalidParameter("log grid needs 0 < lo < hi and >= 2 points");
  std::vector<double> g(static_cast<std::size_t>(points));
  const double a = std::log(lo), b = std::log(hi);
  for (long i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

// ---------------------------------------------------------------------------
// Dominance

std::string to_string(DominanceState state) {
  switch (state) {
    case DominanceState::dominant: return "dominant";
    case DominanceState::no_unique_dominant: return "no_unique_dominant";
    case DominanceState::inconclusive: return "inconclusive";
  }
  return "unknown";
}

DominanceVerdict check_dominance(const CoefficientFamily& family, std::span<const double> alpha_grid, long n_probe,
                                 const DominanceOptions& opts) {
  require_grid(alpha_grid);
  if (alpha_grid.size() < 8) throw InvalidParameter("dominance grid needs at least 8 points");
  if (alpha_grid.back() < 10.0 * alpha_grid.front())
    throw InvalidParameter("dominance grid must span at least one decade");
  if (n_probe < 1) throw InvalidParameter("n_probe must be at least 1");

  DominanceVerdict v;
  v.grid.assign(alpha_grid.begin(), alpha_grid.end());
  const std::size_t points = alpha_grid.size();
  const std::size_t third = std::max<std::size_t>(1, points / 3);

  // Probe order 0, 1, -1, 2, -2, ... so ties go to the smallest |n|.
  std::vector<long> order{0};
  for (long n = 1; n <= n_probe; ++n) {
    order.push_back(n);
    order.push_back(-n);
  }

  const double top = alpha_grid.back();
  double best = 0.0;
  for (const long n : order) {
    const double mag = std::abs(family(n, top));
    if (mag > best) {
      best = mag;
      v.candidate = n;
    }
  }
  if (best == 0.0) {
    v.detail = "every probed coefficient vanishes at the largest alpha";
    return v;
  }

  std::vector<double> reference(points);
  for (std::size_t i = 0; i < points; ++i) reference[i] = std::abs(family(v.candidate, alpha_grid[i]));
  if (std::any_of(reference.begin(), reference.end(), [](double x) { return x == 0.0; })) {
    v.detail = "candidate coefficient C_" + std::to_string(v.candidate) + " vanishes somewhere on the grid";
    return v;
  }

  for (const long n : order) {
    if (n == v.candidate) continue;
    RatioTrace trace{n, std::vector<double>(points)};
    bool any = false;
    for (std::size_t i = 0; i < points; ++i) {
      trace.ratios[i] = std::abs(family(n, alpha_grid[i])) / reference[i];
      any = any || trace.ratios[i] != 0.0;
    }
    if (any) v.ratio_trace.push_back(std::move(trace));
  }

  // A second index whose ratio stays ~1 over the tail shares the decay.
  for (const auto& trace : v.ratio_trace) {
    const bool tied = std::all_of(trace.ratios.end() - static_cast<long>(third), trace.ratios.end(),
                                  [&](double r) { return r >= 1.0 - opts.tie_tolerance; });
    if (tied) {
      v.rival = trace.n;
      v.verdict = DominanceState::no_unique_dominant;
      std::ostringstream msg;
      msg << "no unique dominant (C_" << v.candidate << " and C_" << trace.n << " decay alike)";
      v.detail = msg.str();
      return v;
    }
  }

  for (const auto& trace : v.ratio_trace) {
    const double tail = trace.ratios.back();
    const double tail_max = *std::max_element(trace.ratios.end() - static_cast<long>(third), trace.ratios.end());
    const double head_min = *std::min_element(trace.ratios.begin(), trace.ratios.begin() + static_cast<long>(third));
    if (!(tail < opts.threshold) || !(tail_max < head_min)) {
      std::ostringstream msg;
      msg << "ratio |C_" << trace.n << "/C_" << v.candidate << "| = " << tail
          << " at the largest alpha; decay not established on this grid";
      v.detail = msg.str();
      return v;
    }
  }

  v.verdict = DominanceState::dominant;
  v.dominant_index = v.candidate;
  v.detail = "dominant k=" + std::to_string(v.candidate);
  return v;
}

// ---------------------------------------------------------------------------
// Admissibility

namespace {

std::vector<double> greedy_monotone(const CoefficientFamily& family, std::span<const double> grid, long N,
                                    bool strict) {
  auto magnitudes = [&](double alpha) {
    std::vector<double> m;
    for (long n = -N; n <= N; ++n) m.push_back(std::abs(family(n, alpha)));
    return m;
  };
  std::vector<double> seq{grid.front()};
  auto last = magnitudes(grid.front());
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const auto next = magnitudes(grid[j]);
    bool ok = true;
    for (std::size_t i = 0; i < next.size() && ok; ++i) ok = strict ? next[i] < last[i] : next[i] <= last[i];
    if (ok) {
      seq.push_back(grid[j]);
      last = next;
    }
  }
  return seq;
}

}  // namespace

AdmissibilityReport check_admissibility(const CoefficientFamily& family, std::span<const double> alpha_grid,
                                        double kappa, long N, double eps, const SeriesOptions& opts) {
  require_grid(alpha_grid);
  if (!(kappa > 0.0)) throw InvalidParameter("kappa must be positive");
  if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
  if (N < 1) throw InvalidParameter("N must be at least 1");

  AdmissibilityReport r;
  r.grid.assign(alpha_grid.begin(), alpha_grid.end());

  r.cond_i.kappa = kappa;
  r.cond_i.inf_var_phi = kInf;
  for (const double alpha : alpha_grid) {
    const double v = evaluate_point(family, alpha, opts).var_phi;
    r.var_phi.push_back(v);
    if (v < r.cond_i.inf_var_phi) {
      r.cond_i.inf_var_phi = v;
      r.cond_i.at_alpha = alpha;
    }
  }
  r.cond_i.pass = r.cond_i.inf_var_phi >= kappa;

  constexpr long kTailProbe = 200'000;
  r.tails = tail_second_moment(family, alpha_grid, N, kTailProbe);
  r.cond_ii.N = N;
  r.cond_ii.eps = eps;
  for (std::size_t i = 0; i < r.tails.size(); ++i) {
    if (r.tails[i] >= r.cond_ii.max_tail) {
      r.cond_ii.max_tail = r.tails[i];
      r.cond_ii.at_alpha = alpha_grid[i];
    }
  }
  r.cond_ii.pass = r.cond_ii.max_tail < eps;

  const std::size_t needed = std::max<std::size_t>(2, (alpha_grid.size() + 1) / 2);
  r.cond_iii.strict_sequence = greedy_monotone(family, alpha_grid, N, true);
  r.cond_iii.nonstrict_sequence = greedy_monotone(family, alpha_grid, N, false);
  r.cond_iii.strict = r.cond_iii.strict_sequence.size() >= needed;
  r.cond_iii.nonstrict = r.cond_iii.nonstrict_sequence.size() >= needed;
  r.cond_iii.pass = r.cond_iii.nonstrict;

  std::ostringstream notes;
  notes << "cond (i): inf sigma_phi^2 = " << r.cond_i.inf_var_phi << " at alpha = " << r.cond_i.at_alpha
        << " vs kappa = " << kappa << "\n";
  notes << "cond (ii): max_alpha T_" << N << " = " << r.cond_ii.max_tail << " at alpha = " << r.cond_ii.at_alpha
        << " vs eps = " << eps << "\n";
  notes << "cond (iii): greedy subsequence length " << r.cond_iii.nonstrict_sequence.size() << " (non-strict), "
        << r.cond_iii.strict_sequence.size() << " (strict) of " << alpha_grid.size() << ", need " << needed
        << "; verdict uses the non-strict reading\n";
  r.notes = notes.str();
  return r;
}

// ---------------------------------------------------------------------------
// Searches

AlphaStar find_alpha_star(const CoefficientFamily& family, double epsilon, double alpha_hint,
                          const SeriesOptions& opts) {
  if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be positive");
  if (!(alpha_hint > 0.0) || !std::isfinite(alpha_hint)) throw InvalidParameter("alpha_hint must be positive");

  double best_product = kInf;
  double best_alpha = alpha_hint;
  auto product = [&](double alpha) {
    const double p = uncertainty_product(family, alpha, opts);
    if (p < best_product) {
      best_product = p;
      best_alpha = alpha;
    }
    return p;
  };

  double previous = 0.0;  // last alpha with product >= epsilon, 0 if none
  for (double alpha = alpha_hint; alpha <= kAlphaSearchLimit; alpha *= 2.0) {
    const double p = product(alpha);
    if (!(p < epsilon)) {
      previous = alpha;
      continue;
    }
    if (previous == 0.0) return {alpha, p};
    double lo = previous, hi = alpha, p_hi = p;
    while (hi - lo >= 1e-6) {
      const double mid = 0.5 * (lo + hi);
      const double pm = product(mid);
      if (pm < epsilon) {
        hi = mid;
        p_hi = pm;
      } else {
        lo = mid;
      }
    }
    return {hi, p_hi};
  }

  // Sharpen the reported infimum with a golden-section pass in log(alpha)
  // around the best doubling sample.
  if (std::isfinite(best_product)) {
    double a = std::log(best_alpha / 2.0);
    double b = std::log(std::min(2.0 * best_alpha, kAlphaSearchLimit));
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    double f1 = product(std::exp(x1)), f2 = product(std::exp(x2));
    for (int it = 0; it < 60 && b - a > 1e-7; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - ratio * (b - a);
        f1 = product(std::exp(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + ratio * (b - a);
        f2 = product(std::exp(x2));
      }
    }
  }

  std::ostringstream msg;
  msg << "no alpha <= " << kAlphaSearchLimit << " gives sigma_phi sigma_Lz < " << epsilon
      << " for family '" << family.name << "'; smallest product " << best_product << " at alpha = " << best_alpha;
  throw NotAttainable(msg.str(), best_product, best_alpha);
}

Crossing find_bound_crossing(const CoefficientFamily& family, double target, const SeriesOptions& opts) {
  if (!std::isfinite(target)) throw InvalidParameter("target must be finite");
  constexpr long kScanPoints = 64;
  const auto grid = log_grid(kCrossingLo, kCrossingHi, kScanPoints);

  double lowest = kInf, highest = -kInf;
  double prev_alpha = 0.0, prev_gap = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = uncertainty_product(family, grid[i], opts);
    lowest = std::min(lowest, p);
    highest = std::max(highest, p);
    const double gap = p - target;
    if (i > 0 && ((prev_gap < 0.0) != (gap < 0.0))) {
      double lo = prev_alpha, hi = grid[i];
      const bool rising = gap >= 0.0;
      while (hi - lo >= 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const bool above = uncertainty_product(family, mid, opts) - target >= 0.0;
        (above == rising ? hi : lo) = mid;
      }
      const double alpha = 0.5 * (lo + hi);
      return {alpha, uncertainty_product(family, alpha, opts), lo, hi};
    }
    prev_alpha = grid[i];
    prev_gap = gap;
  }

  std::ostringstream msg;
  msg << "sigma_phi sigma_Lz - " << target << " does not change sign on [" << kCrossingLo << ", " << kCrossingHi
      << "] (product range [" << lowest << ", " << highest << "])";
  throw NoBracket(msg.str(), lowest, highest);
}

// ---------------------------------------------------------------------------
// Asymptotics

AsymptoticReport asymptotic_check(const CoefficientFamily& family, AsymptoticRegime regime,
                                  const SeriesOptions& opts) {
  if (family.kind != FamilyKind::exponential)
    throw InvalidParameter("asymptotic laws are only known for the exponential family");

  AsymptoticReport r;
  r.regime = regime;
  r.alphas = regime == AsymptoticRegime::small_alpha ? std::vector<double>{1e-3, 2e-3, 4e-3}
                                                     : std::vector<double>{6.0, 8.0, 10.0};
  std::vector<double> h_phi, h_lz;
  for (const double alpha : r.alphas) {
    const UncertaintyPoint p = evaluate_point(family, alpha, opts);
    r.product_sq.push_back(p.product_sq());
    if (regime == AsymptoticRegime::small_alpha) {
      r.phi_ratio.push_back(p.var_phi / (alpha * alpha));
      r.lz_ratio.push_back(2.0 * alpha * alpha * p.var_lz);
      h_phi.push_back(alpha);
      h_lz.push_back(alpha);
    } else {
      r.phi_ratio.push_back(p.var_phi / (kPi * kPi / 3.0));
      r.lz_ratio.push_back(std::exp(2.0 * alpha) * p.var_lz / 2.0);
      h_phi.push_back(std::exp(-alpha));
      h_lz.push_back(std::exp(-2.0 * alpha));
    }
  }
  r.phi_limit = extrapolated_limit(h_phi, r.phi_ratio);
  r.lz_limit = extrapolated_limit(h_lz, r.lz_ratio);
  for (std::size_t i = 0; i < r.alphas.size(); ++i) {
    r.max_phi_deviation = std::max(r.max_phi_deviation, std::abs(r.phi_ratio[i] - 1.0));
    r.max_lz_deviation = std::max(r.max_lz_deviation, std::abs(r.lz_ratio[i] - 1.0));
  }
  return r;
}

std::vector<double> fit_powers(std::span<const double> alphas, std::span<const double> values,
                               std::span<const int> powers) {
  if (alphas.size() != values.size() || alphas.size() < powers.size() || powers.empty())
    throw InvalidParameter("fit_powers: need at least as many samples as basis functions");
  const long rows = static_cast<long>(alphas.size());
  const long cols = static_cast<long>(powers.size());
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) design(i, j) = std::pow(alphas[static_cast<std::size_t>(i)], powers[static_cast<std::size_t>(j)]);
    rhs(i) = values[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = least_squares(design, rhs);
  return {c.data(), c.data() + c.size()};
}

}  // namespace unclab
