#pragma once

#include <cstdint>

#include "rateless/gain_matrix.hpp"
#include "rateless/types.hpp"

namespace rateless {

struct OptimizerConfig {
  int max_iterations = 400;
  int restarts = 8;
  std::uint64_t seed = 20240915;
  /// Target max relative shortfall; <= 0 picks 1e-3 for L == M and 2e-2
  /// otherwise.
  double shortfall_tol = -1.0;
  double fd_step = 1e-6;
};

struct OptimizeResult {
  GainMatrix gain;
  ShortfallReport report;
  double objective = 0.0;  // sum of squared relative shortfalls
  bool converged = false;
  bool non_convergence = false;  // best restart worse than 10x tolerance
  int winning_restart = -1;
};

/// Searches for a row-norm-sqrt(P), gauge-fixed matrix whose accumulated
/// layer MI meets the per-layer rate at every (m,l).  Thresholds follow the
/// ideal rule when L == M and the layered-bound rule when L < M.
OptimizeResult optimize_gain_matrix(const CodeSpec& spec,
                                    const OptimizerConfig& config = {});

/// Pure evaluation of the shortfall grid for an arbitrary matrix and
/// threshold schedule.
ShortfallReport shortfall_report(const GainMatrix& g, const CodeSpec& spec,
                                 const ThresholdSchedule& schedule);

/// A frozen 10x3 design at R = 5, P = 31 used for regression tests and the
/// sample shortfall table.
GainMatrix sample_design_l3_m10();

}  // namespace rateless
