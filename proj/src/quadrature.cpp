#include "unclab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "unclab/errors.hpp"
#include "unclab/moments.hpp"
#include "unclab/summation.hpp"

namespace unclab {

namespace {

constexpr double kPi = std::numbers::pi;

class SimpsonIntegrator {
 public:
  SimpsonIntegrator(const VectorIntegrand& f, long dim, const QuadratureOptions& opts)
      : f_(f), dim_(dim), opts_(opts), value_(dim), error_(dim) {}

  void panel(double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const Eigen::ArrayXd fa = eval(a), fm = eval(m), fb = eval(b);
    const Eigen::ArrayXd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(a, b, fa, fm, fb, whole, tol, opts_.max_depth, /*forced=*/1);
  }

  QuadratureResults finish() const {
    if (!converged_) {
      std::ostringstream msg;
      msg << "adaptive Simpson did not reach abs_tol=" << opts_.abs_tol << " within "
          << opts_.max_evaluations << " evaluations / depth " << opts_.max_depth;
      throw ToleranceNotMet(msg.str());
    }
    QuadratureResults out;
    out.value.resize(dim_);
    out.est_error.resize(dim_);
    for (long i = 0; i < dim_; ++i) {
      out.value(i) = value_[i].value();
      out.est_error(i) = error_[i].value();
    }
    out.evaluations = evaluations_;
    return out;
  }

 private:
  Eigen::ArrayXd eval(double x) {
    if (++evaluations_ > opts_.max_evaluations) {
      converged_ = false;
      throw ToleranceNotMet("adaptive Simpson exceeded the evaluation cap");
    }
    Eigen::ArrayXd y = f_(x);
    if (y.size() != dim_) throw InvalidParameter("integrand returned the wrong number of components");
    return y;
  }

  void accept(const Eigen::ArrayXd& v, const Eigen::ArrayXd& err) {
    for (long i = 0; i < dim_; ++i) {
      value_[i] += v(i);
      error_[i] += err(i);
    }
  }

  void refine(double a, double b, const Eigen::ArrayXd& fa, const Eigen::ArrayXd& fm, const Eigen::ArrayXd& fb,
              const Eigen::ArrayXd& whole, double tol, int depth, int forced) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Eigen::ArrayXd flm = eval(lm), frm = eval(rm);
    const Eigen::ArrayXd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Eigen::ArrayXd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Eigen::ArrayXd delta = left + right - whole;
    const double worst = delta.abs().maxCoeff();

    if (forced <= 0 && worst <= 15.0 * tol) {
      accept(left + right + delta / 15.0, delta.abs() / 15.0);
      return;
    }
    if (depth <= 0) {
      converged_ = false;
      accept(left + right + delta / 15.0, delta.abs() / 15.0);
      return;
    }
    refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, forced - 1);
    refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, forced - 1);
  }

  const VectorIntegrand& f_;
  long dim_;
  QuadratureOptions opts_;
  std::vector<CompensatedSum<double>> value_;
  std::vector<CompensatedSum<double>> error_;
  long evaluations_ = 0;
  bool converged_ = true;
};

// Starting panels resolve the highest frequency 2N present in |f|^2.
long panels_for(const TruncatedSpectrum& s) { return 8 * (s.cutoff() + 1); }

// Components: |f|^2, phi|f|^2, phi^2|f|^2, |f'|^2, Im(f* f'),
//             sin|f|^2, cos|f|^2, sin^2|f|^2, cos^2|f|^2.
enum Component : long { kNorm, kPhi, kPhi2, kLz2, kLz1, kSin, kCos, kSin2, kCos2, kComponents };

Eigen::ArrayXd moment_integrand(const TruncatedSpectrum& s, double phi) {
  const auto [f, df] = evaluate_with_derivative(s, phi);
  const double density = std::norm(f);
  const double sn = std::sin(phi);
  const double cs = std::cos(phi);
  Eigen::ArrayXd out(kComponents);
  out << density, phi * density, phi * phi * density, std::norm(df), (std::conj(f) * df).imag(), sn * density,
      cs * density, sn * sn * density, cs * cs * density;
  return out;
}

QuadratureResult single_component(const TruncatedSpectrum& s, Component which, const QuadratureOptions& opts) {
  const VectorIntegrand f = [&s, which](double phi) {
    Eigen::ArrayXd one(1);
    one(0) = moment_integrand(s, phi)(which);
    return one;
  };
  const auto r = integrate(f, 1, -kPi, kPi, panels_for(s), opts);
  return {r.value(0), r.est_error(0), r.evaluations};
}

}  // namespace

QuadratureResults integrate(const VectorIntegrand& f, long dim, double a, double b, long panels,
                            const QuadratureOptions& opts) {
  if (dim < 1) throw InvalidParameter("integrand dimension must be positive");
  if (panels < 1) throw InvalidParameter("panel count must be positive");
  if (!(b > a)) throw InvalidParameter("integration interval must satisfy b > a");
  if (!(opts.abs_tol > 0.0)) throw InvalidParameter("abs_tol must be positive");

  SimpsonIntegrator integrator(f, dim, opts);
  const double width = (b - a) / static_cast<double>(panels);
  const double tol = opts.abs_tol / static_cast<double>(panels);
  for (long p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double hi = (p + 1 == panels) ? b : a + width * static_cast<double>(p + 1);
    integrator.panel(lo, hi, tol);
  }
  return integrator.finish();
}

QuadratureResult integrate_scalar(const std::function<double(double)>& f, double a, double b, long panels,
                                  const QuadratureOptions& opts) {
  const VectorIntegrand g = [&f](double x) {
    Eigen::ArrayXd one(1);
    one(0) = f(x);
    return one;
  };
  const auto r = integrate(g, 1, a, b, panels, opts);
  return {r.value(0), r.est_error(0), r.evaluations};
}

QuadratureResult quad_phi_moment(const TruncatedSpectrum& s, int power, const QuadratureOptions& opts) {
  switch (power) {
    case 0: return single_component(s, kNorm, opts);
    case 1: return single_component(s, kPhi, opts);
    case 2: return single_component(s, kPhi2, opts);
    default: throw InvalidParameter("quad_phi_moment: power must be 0, 1 or 2");
  }
}

QuadratureResult quad_lz_moment(const TruncatedSpectrum& s, int power, const QuadratureOptions& opts) {
  switch (power) {
    case 1: return single_component(s, kLz1, opts);
    case 2: return single_component(s, kLz2, opts);
    default: throw InvalidParameter("quad_lz_moment: power must be 1 or 2");
  }
}

QuadratureResult quad_trig_moment(const TruncatedSpectrum& s, TrigWeight which, const QuadratureOptions& opts) {
  switch (which) {
    case TrigWeight::sin: return single_component(s, kSin, opts);
    case TrigWeight::cos: return single_component(s, kCos, opts);
    case TrigWeight::sin_sq: return single_component(s, kSin2, opts);
    case TrigWeight::cos_sq: return single_component(s, kCos2, opts);
  }
  throw InvalidParameter("quad_trig_moment: unknown weight");
}

ComparisonTable compare_report(const TruncatedSpectrum& s, double tol, const QuadratureOptions& opts) {
  ComparisonTable table;
  table.tol = tol;

  // Series side.
  const PhiMoments phi = phi_moments(s);
  const TrigReport trig = trig_report(s);
  std::optional<LzMoments> lz;
  std::string lz_note;
  try {
    lz = lz_moments(s);
  } catch (const DivergentMoment& e) {
    lz_note = std::string("DivergentMoment: ") + e.what();
  } catch (const NonConvergent& e) {
    lz_note = std::string("NonConvergent: ") + e.what();
  }

  // Oracle side: one vector-valued quadrature for every weight at once. The
  // |f'|^2 and Im(f* f') components are divided by their window magnitude so
  // that a single absolute tolerance is meaningful for all of them.
  std::optional<Eigen::ArrayXd> q;
  std::string oracle_note;
  try {
    double window_second = 0.0;
    for (long n = -s.cutoff(); n <= s.cutoff(); ++n)
      window_second += static_cast<double>(n) * static_cast<double>(n) * std::norm(s.coeff(n));
    window_second /= s.mass();
    Eigen::ArrayXd scale = Eigen::ArrayXd::Ones(kComponents);
    if (lz) {
      scale(kLz2) = std::max(1.0, window_second);
      scale(kLz1) = std::max(1.0, std::sqrt(window_second));
    }

    QuadratureOptions scaled = opts;
    scaled.abs_tol = std::min(opts.abs_tol, 0.01 * tol / scale.maxCoeff());
    // A divergent L_z has no oracle row; dropping its components keeps
    // the refinement from chasing the cusp of |f'|^2.
    const VectorIntegrand f = [&s, &scale, with_lz = lz.has_value()](double phi) {
      Eigen::ArrayXd v = moment_integrand(s, phi) / scale;
      if (!with_lz) v(kLz1) = v(kLz2) = 0.0;
      return v;
    };
    q = integrate(f, kComponents, -kPi, kPi, panels_for(s), scaled).value * scale;
  } catch (const Error& e) {
    oracle_note = e.what();
  }

  const auto oracle = [&](auto&& fn) -> std::optional<double> {
    if (!q) return std::nullopt;
    return fn(*q);
  };
  const auto lz_oracle = [&](auto&& fn) -> std::optional<double> {
    if (!lz) return std::nullopt;
    return oracle(fn);
  };

  auto add = [&](std::string name, std::optional<double> series, std::optional<double> quad, std::string note) {
    ComparisonRow row;
    row.quantity = std::move(name);
    row.series = series;
    row.oracle = quad;
    row.applicable = series.has_value();
    if (!row.applicable) {
      row.pass = true;
      row.note = note.empty() ? "not applicable" : note;
    } else if (!quad) {
      row.pass = false;
      row.note = oracle_note;
    } else {
      row.abs_diff = std::abs(*series - *quad);
      row.pass = row.abs_diff <= tol;
    }
    table.rows.push_back(std::move(row));
  };

  const auto lz_field = [&](double LzMoments::*field) -> std::optional<double> {
    if (!lz) return std::nullopt;
    return (*lz).*field;
  };

  add("norm", 1.0, oracle([](const auto& v) { return v(kNorm); }), "");
  add("mean_phi", phi.mean, oracle([](const auto& v) { return v(kPhi); }), "");
  add("second_phi", phi.second, oracle([](const auto& v) { return v(kPhi2); }), "");
  add("var_phi", phi.var, oracle([](const auto& v) { return v(kPhi2) - v(kPhi) * v(kPhi); }), "");
  add("mean_lz", lz_field(&LzMoments::mean), lz_oracle([](const auto& v) { return v(kLz1); }), lz_note);
  add("second_lz", lz_field(&LzMoments::second), lz_oracle([](const auto& v) { return v(kLz2); }), lz_note);
  add("var_lz", lz_field(&LzMoments::var), lz_oracle([](const auto& v) { return v(kLz2) - v(kLz1) * v(kLz1); }),
      lz_note);
  add("mean_sin", trig.mean_sin, oracle([](const auto& v) { return v(kSin); }), "");
  add("mean_cos", trig.mean_cos, oracle([](const auto& v) { return v(kCos); }), "");
  add("second_sin", trig.second_sin, oracle([](const auto& v) { return v(kSin2); }), "");
  add("second_cos", trig.second_cos, oracle([](const auto& v) { return v(kCos2); }), "");
  add("var_sin", trig.var_sin, oracle([](const auto& v) { return v(kSin2) - v(kSin) * v(kSin); }), "");
  add("var_cos", trig.var_cos, oracle([](const auto& v) { return v(kCos2) - v(kCos) * v(kCos); }), "");

  table.all_pass = true;
  for (const auto& row : table.rows) table.all_pass = table.all_pass && row.pass;
  return table;
}

}  // namespace unclab
