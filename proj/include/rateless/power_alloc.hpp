#pragma once

#include <Eigen/Dense>
#include <utility>

#include "rateless/types.hpp"

namespace rateless {

/// Per-block per-layer powers p_{m,l} for the dithered-repetition scheme,
/// designed so each layer accumulates exactly R/L bits at every ideal
/// threshold gain.
struct PowerAllocation {
  Eigen::MatrixXd powers;        // M x L
  CodeSpec spec;
  ThresholdSchedule thresholds;  // ideal rule
  double per_layer_rate = 0.0;
};

/// Effective SNR of layer l (1-based) in a block with powers `row`, under
/// squared channel gain `gain_sq`: lower layers act as noise.
double layer_block_snr(const Eigen::VectorXd& row, int l, double gain_sq,
                       double noise_var);

/// Solves the shortfall recursion block by block.  Block 1 is an ordinary
/// layered code; each later block restores the per-layer accumulated MI to
/// R/L at its own threshold gain.
PowerAllocation allocate_powers(const CodeSpec& spec);

/// residual(m,l) = sum_{m'<=m} log2(1 + SNR_{m',l}(alpha_m)) - R/L.
Eigen::MatrixXd verify_allocation(const PowerAllocation& alloc);

/// The two lower bounds on efficiency for a per-layer base rate r = R''/L:
/// { (ln2 r)/(2^r - 1), 1 - (ln2/2) r }.
std::pair<double, double> efficiency_lower_bound(double base_rate);

/// Conservative total design rate R'' = L log2(1 + ln2 R/L) that guarantees
/// decodability after m blocks at gain alpha_m for every m.
double conservative_rate(double rate, double layers);

}  // namespace rateless
