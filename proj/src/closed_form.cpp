#include "rateless/closed_form.hpp"

#include <cmath>
#include <complex>

#include "rateless/capacity.hpp"

namespace rateless {

namespace {
using cplx = std::complex<double>;

double clamp_unit(double v) { return std::max(-1.0, std::min(1.0, v)); }
}  // namespace

GainMatrix design_2x2(double rate, double power) {
  if (!(rate > 0.0)) throw std::invalid_argument("rate must be > 0");
  if (!(power > 0.0)) throw std::invalid_argument("power must be > 0");
  const double s = std::sqrt(power / (std::exp2(rate / 2.0) + 1.0));
  const double q = std::exp2(rate / 4.0);
  Eigen::MatrixXcd g(2, 2);
  g << s, s * q, s * q, -s;
  return GainMatrix(std::move(g), power);
}

double max_rate_3x3() {
  return 6.0 * std::log2((3.0 + std::sqrt(5.0)) / 2.0);
}

GainMatrix design_3x3(double rate, double power) {
  if (!(rate > 0.0)) throw std::invalid_argument("rate must be > 0");
  if (!(power > 0.0)) throw std::invalid_argument("power must be > 0");

  const double x = std::exp2(rate / 6.0);
  const double q = x * x * x * x - x * x * x + x * x - x + 1.0;

  // Phase triangle sides: sqrt(x), sqrt(q), sqrt(x^3).  The middle side
  // outgrows the others; the closure deficit classifies feasibility.
  const double sa = std::sqrt(x);
  const double sb = std::sqrt(q);
  const double sc = std::sqrt(x * x * x);
  if (sb > sa + sc + 1e-9) {
    throw RateTooHighError(
        "no 3x3 solution: rate exceeds the 6*log2((3+sqrt(5))/2) ~ 8.33 "
        "bits/symbol limit");
  }

  const double x2 = x * x;
  const double natural_power = x2 * x2 * x2 - 1.0;  // x^6 - 1

  Eigen::MatrixXcd g(3, 3);
  g(0, 0) = std::sqrt(x2 - 1.0);
  g(0, 1) = std::sqrt(x2 * (x2 - 1.0));
  g(0, 2) = std::sqrt(x2 * x2 * (x2 - 1.0));

  const double cos_supp = clamp_unit((x2 * x2 - 2.0 * x * x2 + x2 + 1.0) /
                                     (2.0 * std::sqrt(x * q)));
  const double theta1 = M_PI - std::acos(cos_supp);
  const cplx e1 = std::polar(1.0, theta1);
  const cplx e2 = -(sa + e1 * sb) / sc;

  g(1, 0) = std::sqrt(x * x2 * (x2 - 1.0));
  g(1, 1) = e1 * std::sqrt((x * x2 * x2 + 1.0) * (x - 1.0));
  g(1, 2) = (e2 / std::abs(e2)) * std::sqrt(x * (x2 - 1.0));

  // Third row: the vector orthogonal (Hermitian sense) to rows 1 and 2,
  // scaled to the row norm and gauge-fixed real-positive in its first entry.
  // Eigen's complex cross() already returns the conjugated cross product,
  // which is exactly the Hermitian-orthogonal completion needed here.
  Eigen::Vector3cd r1 = g.row(0).transpose();
  Eigen::Vector3cd r2 = g.row(1).transpose();
  Eigen::Vector3cd r3 = r1.cross(r2);
  r3 *= std::sqrt(natural_power) / r3.norm();
  const cplx lead = r3(0);
  if (std::abs(lead) > 0.0) r3 *= std::conj(lead) / std::abs(lead);
  g.row(2) = r3.transpose();

  g *= std::sqrt(power / natural_power);
  return GainMatrix(std::move(g), power);
}

ShortfallReport validate_perfect(const GainMatrix& g, const CodeSpec& spec) {
  spec.validate();
  if (g.rows() != spec.blocks || g.cols() != spec.layers) {
    throw DimensionError("validate_perfect: matrix does not match spec");
  }
  ShortfallReport report;
  const double per_layer = spec.per_layer_rate();
  report.percent.setZero(spec.blocks, spec.layers);
  for (int m = 1; m <= spec.blocks; ++m) {
    const double gain_sq = ideal_threshold_gain_sq(m, spec);
    for (int l = 1; l <= spec.layers; ++l) {
      const double mi = accumulated_layer_mi(g, m, l, gain_sq, spec.noise_var);
      const double rel = (per_layer - mi) / per_layer;
      report.percent(m - 1, l - 1) = 100.0 * std::max(0.0, rel);
    }
  }
  report.max_percent = report.percent.maxCoeff();
  report.unitarity_residual =
      g.rows() == g.cols() ? g.unitarity_residual() : 0.0;
  return report;
}

}  // namespace rateless
