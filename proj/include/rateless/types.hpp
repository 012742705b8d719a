#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rateless {

/// Design problem statement: ceiling rate R, layer count L, block range M,
/// symbol power P and noise variance sigma^2.  Rates are in bits per complex
/// symbol; powers and gains are linear.
struct CodeSpec {
  double ceiling_rate = 0.0;  // R
  int layers = 1;             // L
  int blocks = 1;             // M
  double power = 0.0;         // P
  double noise_var = 1.0;     // sigma^2

  double per_layer_rate() const { return ceiling_rate / layers; }
  void validate() const;
};

enum class ThresholdRule { Ideal, LayeredBound };

/// Channel-gain thresholds |alpha_m|^2 for m = 1..M, strictly decreasing.
struct ThresholdSchedule {
  ThresholdRule rule = ThresholdRule::Ideal;
  std::vector<double> gains_sq;

  static ThresholdSchedule ideal(const CodeSpec& spec);
  static ThresholdSchedule layered_bound(const CodeSpec& spec);
};

class RateTooHighError : public std::runtime_error {
 public:
  explicit RateTooHighError(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace rateless
