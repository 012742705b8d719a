#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "rateless/power_alloc.hpp"

namespace rateless {

enum class DitherAlphabet {
  BinaryPm1,  // +1/-1 equiprobable
  UnitPhase,  // uniform phase on the unit circle
  Off         // all +1 (for demonstrating why dither is needed)
};

struct SimConfig {
  PowerAllocation allocation;
  int num_symbols = 100000;
  std::uint64_t seed = 1;
  double gain_sq = 1.0;  // |alpha|^2 under test
  DitherAlphabet dither = DitherAlphabet::BinaryPm1;
  int max_blocks = 0;  // rows of the report; 0 means the allocation's M
};

struct SimReport {
  /// Post-MRC SINR of layer l decoded from the first m blocks, with
  /// genie-aided cancellation of layers above l.  Rows m = 1..max_blocks.
  Eigen::MatrixXd empirical_sinr;
  Eigen::MatrixXd analytic_sinr;
  /// Standard error of each empirical entry, estimated from segment spread.
  Eigen::MatrixXd standard_error;
  double max_offdiag_corr = 0.0;
  std::uint64_t seed_used = 0;
};

/// Monte Carlo check of the repetition + dither encoding against the
/// additive per-block SNR formula of the MRC successive-cancellation
/// decoder.
SimReport simulate_dithered_repetition(const SimConfig& cfg);

/// Max absolute normalized off-diagonal entry of the empirical residual
/// covariance across blocks, after dither removal for the top layer.
double dither_decorrelation_check(const SimConfig& cfg);

}  // namespace rateless
