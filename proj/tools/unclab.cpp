// Command-line front end: sweeps, family checks, searches and oracle runs.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "unclab/analysis.hpp"
#include "unclab/errors.hpp"
#include "unclab/family_io.hpp"
#include "unclab/quadrature.hpp"
#include "unclab/sweep.hpp"
#include "unclab/version.hpp"

using namespace unclab;
using nlohmann::json;

namespace {

enum Exit : int {
  kOk = 0,
  kInvalid = 1,
  kDivergent = 2,
  kNoUniqueDominant = 3,
  kInconclusive = 4,
  kNotFound = 5,
  kVerifyFailed = 6,
  kNumericFailure = 7,
};

struct Common {
  std::string family = "exp";
  std::string spec;
  std::optional<double> rel_tol;
  long n_max = kDefaultMaxCutoff;
  std::string route = "auto";
  bool json = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--family", c.family, "exp, poly or custom")->check(CLI::IsMember({"exp", "poly", "custom"}));
  cmd->add_option("--spec", c.spec, "JSON description of a custom family");
  cmd->add_option("--rel-tol", c.rel_tol, "relative truncation tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--n-max", c.n_max, "largest admissible cutoff")->check(CLI::PositiveNumber);
  cmd->add_option("--route", c.route, "auto (closed forms when known) or series")
      ->check(CLI::IsMember({"auto", "series"}));
  cmd->add_flag("--json", c.json, "machine-readable output");
}

CoefficientFamily resolve_family(const Common& c) {
  if (c.family == "exp") return exponential_family();
  if (c.family == "poly") return polynomial_family();
  if (c.spec.empty()) throw InvalidParameter("--family custom needs --spec FILE");
  return load_family_json(c.spec);
}

SeriesOptions series_options(const Common& c, double default_tol = kDefaultRelTol) {
  return {c.rel_tol.value_or(default_tol), c.n_max, c.route == "series" ? Route::series : Route::automatic};
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------------------

struct SweepArgs {
  Common common;
  double min = 0.0, max = 0.0;
  long steps = 0;
  std::string scale = "linear";
  std::string out;
  bool keep_going = false;
};

int cmd_sweep(const SweepArgs& a) {
  const CoefficientFamily family = resolve_family(a.common);
  SweepOptions opts;
  opts.alpha_min = a.min;
  opts.alpha_max = a.max;
  opts.steps = a.steps;
  opts.scale = a.scale == "log" ? GridScale::log : GridScale::linear;
  opts.series = series_options(a.common);
  const SweepTable table = run_sweep(family, opts);

  if (table.any_divergent() && !a.keep_going) {
    for (const auto& r : table.rows) {
      if (r.divergent) {
        std::cerr << fmt::format("error: sigma_Lz diverges at alpha = {:.17g} (use --keep-going to emit 'div' rows)\n",
                                 r.alpha);
        break;
      }
    }
    return kDivergent;
  }
  if (a.out.empty()) {
    write_csv(std::cout, table);
  } else {
    std::ofstream file(a.out, std::ios::binary);
    if (!file) throw InvalidParameter("cannot write " + a.out);
    write_csv(file, table);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  Common common;
  std::optional<double> min, max;
  long points = 16;
  long n_probe = 8;
  double kappa = 0.1;
  long tail_n = 32;
  double eps = 1.0;
};

int cmd_check(const CheckArgs& a) {
  const CoefficientFamily family = resolve_family(a.common);
  const bool poly = family.kind == FamilyKind::polynomial;
  const double lo = a.min.value_or(poly ? 2.0 : 0.5);
  const double hi = a.max.value_or(poly ? 50.0 : 20.0);
  const auto grid = log_grid(lo, hi, a.points);
  const SeriesOptions opts = series_options(a.common);

  const DominanceVerdict dom = check_dominance(family, grid, a.n_probe);
  const AdmissibilityReport adm = check_admissibility(family, grid, a.kappa, a.tail_n, a.eps, opts);

  if (a.common.json) {
    json traces = json::array();
    for (const auto& t : dom.ratio_trace) {
      json r = json::array();
      for (double x : t.ratios) r.push_back(number(x));
      traces.push_back({{"n", t.n}, {"ratios", r}});
    }
    json out = {
        {"family", family.name},
        {"grid", grid},
        {"dominance",
         {{"verdict", to_string(dom.verdict)},
          {"candidate", dom.candidate},
          {"dominant_index", dom.dominant_index ? json(*dom.dominant_index) : json(nullptr)},
          {"rival", dom.rival ? json(*dom.rival) : json(nullptr)},
          {"detail", dom.detail},
          {"ratio_trace", traces}}},
        {"admissibility",
         {{"admissible", adm.admissible()},
          {"cond_i", {{"pass", adm.cond_i.pass}, {"inf_var_phi", number(adm.cond_i.inf_var_phi)},
                      {"at_alpha", adm.cond_i.at_alpha}, {"kappa", adm.cond_i.kappa}}},
          {"cond_ii", {{"pass", adm.cond_ii.pass}, {"max_tail", number(adm.cond_ii.max_tail)},
                       {"at_alpha", adm.cond_ii.at_alpha}, {"N", adm.cond_ii.N}, {"eps", adm.cond_ii.eps}}},
          {"cond_iii", {{"pass", adm.cond_iii.pass}, {"strict", adm.cond_iii.strict},
                        {"nonstrict", adm.cond_iii.nonstrict},
                        {"strict_sequence", adm.cond_iii.strict_sequence},
                        {"nonstrict_sequence", adm.cond_iii.nonstrict_sequence}}},
          {"notes", adm.notes}}}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "family: " << family.name << '\n';
    std::cout << fmt::format("grid: {} log points on [{}, {}]\n", grid.size(), lo, hi);
    std::cout << "dominance: " << dom.detail << '\n';
    std::cout << "admissible: " << (adm.admissible() ? "yes" : "no") << '\n';
    std::cout << adm.notes;
  }

  switch (dom.verdict) {
    case DominanceState::dominant: return kOk;
    case DominanceState::no_unique_dominant: return kNoUniqueDominant;
    case DominanceState::inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

// ---------------------------------------------------------------------------

struct CrossingArgs {
  Common common;
  double target = 0.5;
};

int cmd_crossing(const CrossingArgs& a) {
  const CoefficientFamily family = resolve_family(a.common);
  try {
    const Crossing c = find_bound_crossing(family, a.target, series_options(a.common));
    if (a.common.json)
      std::cout << json{{"alpha", c.alpha}, {"product", c.product}, {"target", a.target},
                        {"bracket", {c.bracket_lo, c.bracket_hi}}}.dump() << '\n';
    else
      std::cout << fmt::format("alpha = {:.9f}  product = {:.12g}\n", c.alpha, c.product);
    return kOk;
  } catch (const NoBracket& e) {
    if (a.common.json)
      std::cout << json{{"error", "NoBracket"}, {"min_product", number(e.min_product())},
                        {"max_product", number(e.max_product())}}.dump() << '\n';
    else
      std::cout << fmt::format("no crossing: product range [{:.12g}, {:.12g}]\n", e.min_product(), e.max_product());
    return kNotFound;
  }
}

struct AlphaStarArgs {
  Common common;
  double epsilon = 0.0;
  double hint = 1.0;
};

int cmd_alpha_star(const AlphaStarArgs& a) {
  const CoefficientFamily family = resolve_family(a.common);
  try {
    const AlphaStar s = find_alpha_star(family, a.epsilon, a.hint, series_options(a.common));
    if (a.common.json)
      std::cout << json{{"alpha", s.alpha}, {"product", s.product}, {"epsilon", a.epsilon}}.dump() << '\n';
    else
      std::cout << fmt::format("alpha* = {:.9f}  product = {:.12g}\n", s.alpha, s.product);
    return kOk;
  } catch (const NotAttainable& e) {
    if (a.common.json)
      std::cout << json{{"error", "NotAttainable"}, {"infimum", number(e.best_product())},
                        {"at_alpha", e.best_alpha()}}.dump() << '\n';
    else
      std::cout << fmt::format("not attainable: infimum {:.12g} at alpha = {:.9g}\n", e.best_product(),
                               e.best_alpha());
    return kNotFound;
  }
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  Common common;
  double alpha = 1.0;
  double tol = 1e-8;
};

int cmd_verify(const VerifyArgs& a) {
  const CoefficientFamily family = resolve_family(a.common);
  const double rel_tol = a.common.rel_tol.value_or(family.kind == FamilyKind::polynomial ? 1e-6 : kDefaultRelTol);
  const TruncatedSpectrum s = build_spectrum(family, a.alpha, rel_tol, a.common.n_max);
  const ComparisonTable t = compare_report(s, a.tol);

  if (a.common.json) {
    json rows = json::array();
    for (const auto& r : t.rows)
      rows.push_back({{"quantity", r.quantity},
                      {"series", r.series ? number(*r.series) : json(nullptr)},
                      {"oracle", r.oracle ? number(*r.oracle) : json(nullptr)},
                      {"abs_diff", number(r.abs_diff)},
                      {"applicable", r.applicable},
                      {"pass", r.pass},
                      {"note", r.note}});
    std::cout << json{{"family", family.name}, {"alpha", a.alpha}, {"cutoff", s.cutoff()}, {"tol", t.tol},
                      {"all_pass", t.all_pass}, {"rows", rows}}.dump(2)
              << '\n';
  } else {
    std::cout << fmt::format("family {}  alpha {}  cutoff {}  tol {:g}\n", family.name, a.alpha, s.cutoff(), t.tol);
    std::cout << fmt::format("{:<12} {:>24} {:>24} {:>10}  {}\n", "quantity", "series", "quadrature", "diff",
                             "status");
    auto show = [](const std::optional<double>& v) { return v ? fmt::format("{:.17g}", *v) : std::string("-"); };
    for (const auto& r : t.rows) {
      const std::string status = !r.applicable ? "n/a" : (r.pass ? "pass" : "FAIL");
      std::cout << fmt::format("{:<12} {:>24} {:>24} {:>10.2e}  {}{}\n", r.quantity, show(r.series), show(r.oracle),
                               r.abs_diff, status, r.note.empty() ? "" : "  (" + r.note + ")");
    }
  }
  return t.all_pass ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Angle / angular-momentum uncertainty products of Fourier coefficient families"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "tabulate sigma_phi^2, sigma_Lz^2 and their product as CSV");
  add_common(s, sweep.common);
  s->add_option("--min", sweep.min, "smallest alpha")->required();
  s->add_option("--max", sweep.max, "largest alpha")->required();
  s->add_option("--steps", sweep.steps, "number of rows")->required();
  s->add_option("--scale", sweep.scale, "linear or log")->check(CLI::IsMember({"linear", "log"}));
  s->add_option("--out", sweep.out, "output file (default stdout)");
  s->add_flag("--keep-going", sweep.keep_going, "emit 'div' rows instead of failing on divergence");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "dominance and admissibility of a family");
  add_common(c, check.common);
  c->add_option("--min", check.min, "smallest alpha of the grid");
  c->add_option("--max", check.max, "largest alpha of the grid");
  c->add_option("--points", check.points, "log-spaced grid points");
  c->add_option("--n-probe", check.n_probe, "probe modes |n| <= n_probe");
  c->add_option("--kappa", check.kappa, "lower bound required of sigma_phi^2");
  c->add_option("--tail-n", check.tail_n, "N of the tail sum T_N");
  c->add_option("--eps", check.eps, "bound required of T_N");

  CrossingArgs crossing;
  auto* x = app.add_subcommand("crossing", "first alpha where sigma_phi sigma_Lz crosses a target");
  add_common(x, crossing.common);
  x->add_option("--target", crossing.target, "product value to cross");

  AlphaStarArgs star;
  auto* st = app.add_subcommand("alpha-star", "an alpha with sigma_phi sigma_Lz < epsilon");
  add_common(st, star.common);
  st->add_option("--epsilon", star.epsilon, "product threshold")->required()->check(CLI::PositiveNumber);
  st->add_option("--hint", star.hint, "starting alpha")->check(CLI::PositiveNumber);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "series moments against adaptive quadrature");
  add_common(v, verify.common);
  v->add_option("--alpha", verify.alpha, "family parameter")->required();
  v->add_option("--tol", verify.tol, "absolute tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*s) return cmd_sweep(sweep);
    if (*c) return cmd_check(check);
    if (*x) return cmd_crossing(crossing);
    if (*st) return cmd_alpha_star(star);
    if (*v) return cmd_verify(verify);
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const DivergentMoment& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDivergent;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return kInvalid;
}
