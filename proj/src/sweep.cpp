#include "unclab/sweep.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>

#include "unclab/errors.hpp"
#include "unclab/version.hpp"

namespace unclab {

bool SweepTable::any_divergent() const {
  for (const auto& r : rows)
    if (r.divergent) return true;
  return false;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("UNC_LAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepTable run_sweep(const CoefficientFamily& family, const SweepOptions& opts) {
  if (!(opts.alpha_min > 0.0) || !(opts.alpha_max > opts.alpha_min) || !std::isfinite(opts.alpha_max))
    throw InvalidParameter("sweep needs 0 < alpha_min < alpha_max");
  if (opts.steps < 2) throw InvalidParameter("sweep needs at least 2 steps");

  const auto grid = opts.scale == GridScale::log ? log_grid(opts.alpha_min, opts.alpha_max, opts.steps)
                                                 : linear_grid(opts.alpha_min, opts.alpha_max, opts.steps);
  SweepTable table{family.name, opts, std::vector<SweepRow>(grid.size())};

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size() && !failed; i = next++) {
      SweepRow& row = table.rows[i];
      row.alpha = grid[i];
      try {
        const UncertaintyPoint p = evaluate_point(family, grid[i], opts.series);
        row.var_phi = p.var_phi;
        row.var_lz = p.var_lz;
        row.product = p.product();
        row.state_bound = p.state_bound;
        row.cutoff = p.cutoff;
      } catch (const DivergentMoment&) {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        row.var_phi = row.var_lz = row.product = row.state_bound = nan;
        row.divergent = true;
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  const unsigned threads = std::min<std::size_t>(opts.threads ? opts.threads : default_thread_count(), grid.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return table;
}

namespace {

std::string cell(double v, bool divergent) { return divergent ? "div" : fmt::format("{:.17g}", v); }

}  // namespace

void write_csv(std::ostream& out, const SweepTable& table) {
  const auto& o = table.options;
  long lo = -1, hi = -1;
  for (const auto& r : table.rows) {
    if (r.cutoff < 0) continue;
    lo = lo < 0 ? r.cutoff : std::min(lo, r.cutoff);
    hi = std::max(hi, r.cutoff);
  }
  out << "# family: " << table.family << '\n';
  out << "# route: " << (o.series.route == Route::automatic ? "automatic" : "series") << '\n';
  out << fmt::format("# rel_tol: {:.17g}\n", o.series.rel_tol);
  out << "# n_max: " << o.series.n_max << '\n';
  out << "# cutoff: " << (lo < 0 ? std::string("closed form") : fmt::format("{}..{}", lo, hi)) << '\n';
  out << "# version: " << kVersion << '\n';
  out << "alpha,var_phi,var_lz,product,hr_bound,state_bound\n";
  for (const auto& r : table.rows) {
    out << fmt::format("{:.17g}", r.alpha) << ',' << cell(r.var_phi, r.divergent) << ','
        << cell(r.var_lz, r.divergent) << ',' << cell(r.product, r.divergent) << ",0.5,"
        << cell(r.state_bound, r.divergent) << '\n';
  }
}

}  // namespace unclab
