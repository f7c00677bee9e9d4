#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "unclab/spectrum.hpp"

namespace unclab {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  long max_evaluations = 2'000'000;
  int max_depth = 48;
};

struct QuadratureResult {
  double value = 0.0;
  double est_error = 0.0;  ///< sum of the Richardson error estimates
  long evaluations = 0;
};

/// Component-wise results of a vector-valued integration.
struct QuadratureResults {
  Eigen::ArrayXd value;
  Eigen::ArrayXd est_error;
  long evaluations = 0;
};

using VectorIntegrand = std::function<Eigen::ArrayXd(double)>;

/// Adaptive Simpson over [a, b] split into `panels` equal starting panels,
/// for an integrand with `dim` components. Every component must meet abs_tol
/// (shared across panels in proportion to their width); throws
/// ToleranceNotMet when the evaluation cap or depth limit is hit first.
QuadratureResults integrate(const VectorIntegrand& f, long dim, double a, double b, long panels = 1,
                            const QuadratureOptions& opts = {});

QuadratureResult integrate_scalar(const std::function<double(double)>& f, double a, double b, long panels = 1,
                                  const QuadratureOptions& opts = {});

/// Integral of phi^power |f|^2 over [-pi, pi]; power in {0, 1, 2}.
QuadratureResult quad_phi_moment(const TruncatedSpectrum& s, int power, const QuadratureOptions& opts = {});

/// power = 2: integral of |f'|^2. power = 1: integral of Im(f^* f'),
/// i.e. <L_z> = integral of f^* (-i f').
QuadratureResult quad_lz_moment(const TruncatedSpectrum& s, int power, const QuadratureOptions& opts = {});

enum class TrigWeight { sin, cos, sin_sq, cos_sq };
QuadratureResult quad_trig_moment(const TruncatedSpectrum& s, TrigWeight which, const QuadratureOptions& opts = {});

/// One row of a series-versus-quadrature comparison.
struct ComparisonRow {
  std::string quantity;
  std::optional<double> series;
  std::optional<double> oracle;
  double abs_diff = 0.0;
  bool applicable = true;
  bool pass = false;
  std::string note;
};

struct ComparisonTable {
  double tol = 0.0;
  std::vector<ComparisonRow> rows;
  bool all_pass = false;
};

/// Every series moment next to its quadrature twin. Failures are reported in
/// the table, never thrown.
ComparisonTable compare_report(const TruncatedSpectrum& s, double tol, const QuadratureOptions& opts = {});

}  // namespace unclab
