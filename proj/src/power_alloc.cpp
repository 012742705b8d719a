#include "rateless/power_alloc.hpp"

#include <cmath>

#include "rateless/capacity.hpp"

namespace rateless {

namespace {
constexpr double kLn2 = 0.69314718055994530942;
}

double layer_block_snr(const Eigen::VectorXd& row, int l, double gain_sq,
                       double noise_var) {
  double interference = 0.0;
  for (int k = 0; k < l - 1; ++k) interference += row(k);
  return gain_sq * row(l - 1) / (gain_sq * interference + noise_var);
}

PowerAllocation allocate_powers(const CodeSpec& spec) {
  spec.validate();
  PowerAllocation alloc;
  alloc.spec = spec;
  alloc.thresholds = ThresholdSchedule::ideal(spec);
  alloc.per_layer_rate = spec.per_layer_rate();

  const int blocks = spec.blocks;
  const int layers = spec.layers;
  const double rl = alloc.per_layer_rate;
  alloc.powers.setZero(blocks, layers);

  for (int m = 1; m <= blocks; ++m) {
    const double gain_sq = alloc.thresholds.gains_sq[m - 1];
    const double base = spec.noise_var / gain_sq;
    double same_block = 0.0;  // powers already placed in block m
    for (int l = 1; l <= layers; ++l) {
      double accumulated = 0.0;
      for (int mp = 0; mp < m - 1; ++mp) {
        accumulated += std::log2(
            1.0 + layer_block_snr(alloc.powers.row(mp).transpose(), l,
                                  gain_sq, spec.noise_var));
      }
      double shortfall = rl - accumulated;
      if (shortfall < 0.0) {
        if (shortfall < -1e-9) {
          throw std::logic_error("negative power shortfall in recursion");
        }
        shortfall = 0.0;
      }
      const double p = (std::exp2(shortfall) - 1.0) * (same_block + base);
      alloc.powers(m - 1, l - 1) = p;
      same_block += p;
    }
  }
  (void)kLn2;
  return alloc;
}

Eigen::MatrixXd verify_allocation(const PowerAllocation& alloc) {
  const int blocks = static_cast<int>(alloc.powers.rows());
  const int layers = static_cast<int>(alloc.powers.cols());
  Eigen::MatrixXd residual(blocks, layers);
  for (int m = 1; m <= blocks; ++m) {
    const double gain_sq = alloc.thresholds.gains_sq[m - 1];
    for (int l = 1; l <= layers; ++l) {
      double accumulated = 0.0;
      for (int mp = 1; mp <= m; ++mp) {
        accumulated += std::log2(
            1.0 + layer_block_snr(alloc.powers.row(mp - 1).transpose(), l,
                                  gain_sq, alloc.spec.noise_var));
      }
      residual(m - 1, l - 1) = accumulated - alloc.per_layer_rate;
    }
  }
  return residual;
}

std::pair<double, double> efficiency_lower_bound(double base_rate) {
  if (!(base_rate > 0.0)) throw std::invalid_argument("base_rate must be > 0");
  const double mid = (kLn2 * base_rate) / (std::exp2(base_rate) - 1.0);
  const double linear = 1.0 - 0.5 * kLn2 * base_rate;
  return {mid, linear};
}

double conservative_rate(double rate, double layers) {
  if (!(rate > 0.0) || !(layers > 0.0)) {
    throw std::invalid_argument("rate and layers must be > 0");
  }
  return layers * std::log2(1.0 + kLn2 * rate / layers);
}

}  // namespace rateless
