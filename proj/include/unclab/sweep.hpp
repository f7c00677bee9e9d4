#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "unclab/analysis.hpp"

namespace unclab {

enum class GridScale { linear, log };

struct SweepOptions {
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  long steps = 0;
  GridScale scale = GridScale::linear;
  SeriesOptions series;
  unsigned threads = 0;  ///< 0: UNC_LAB_THREADS, else hardware concurrency
};

/// One row per alpha. A divergent sigma_Lz leaves `divergent` set and the
/// moment fields NaN.
struct SweepRow {
  double alpha = 0.0;
  double var_phi = 0.0;
  double var_lz = 0.0;
  double product = 0.0;
  double state_bound = 0.0;
  long cutoff = -1;
  bool divergent = false;
};

struct SweepTable {
  std::string family;
  SweepOptions options;
  std::vector<SweepRow> rows;  ///< strictly increasing in alpha

  bool any_divergent() const;
};

/// Worker count: UNC_LAB_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency().
unsigned default_thread_count();

/// Rows are computed concurrently and stored in alpha order.
SweepTable run_sweep(const CoefficientFamily& family, const SweepOptions& opts);

/// CSV with '#' run-metadata lines, then `alpha,var_phi,var_lz,product,hr_bound,state_bound`.
/// Values use 17 significant digits; divergent cells read "div".
void write_csv(std::ostream& out, const SweepTable& table);

}  // namespace unclab
