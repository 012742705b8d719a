#include "rateless/capacity.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace rateless {

namespace {
constexpr double kLn2 = 0.69314718055994530942;

// log2 det(I + a B B^H) via Cholesky of the Hermitian PD matrix.
double logdet2_identity_plus(const Eigen::MatrixXcd& b, double a) {
  const int m = static_cast<int>(b.rows());
  if (b.cols() == 0) return 0.0;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(m, m) + a * b * b.adjoint();
  Eigen::LLT<Eigen::MatrixXcd> llt(h);
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (int i = 0; i < m; ++i) acc += std::log(std::real(l(i, i)));
  return 2.0 * acc / kLn2;
}
}  // namespace

void CodeSpec::validate() const {
  if (!(ceiling_rate > 0.0)) throw std::invalid_argument("rate must be > 0");
  if (!(power > 0.0)) throw std::invalid_argument("power must be > 0");
  if (!(noise_var > 0.0)) throw std::invalid_argument("noise_var must be > 0");
  if (layers < 1) throw std::invalid_argument("layers must be >= 1");
  if (blocks < 1) throw std::invalid_argument("blocks must be >= 1");
}

ThresholdSchedule ThresholdSchedule::ideal(const CodeSpec& spec) {
  spec.validate();
  ThresholdSchedule s;
  s.rule = ThresholdRule::Ideal;
  s.gains_sq.resize(spec.blocks);
  for (int m = 1; m <= spec.blocks; ++m) {
    s.gains_sq[m - 1] = ideal_threshold_gain_sq(m, spec);
  }
  return s;
}

ThresholdSchedule ThresholdSchedule::layered_bound(const CodeSpec& spec) {
  spec.validate();
  ThresholdSchedule s;
  s.rule = ThresholdRule::LayeredBound;
  s.gains_sq.resize(spec.blocks);
  for (int m = 1; m <= spec.blocks; ++m) {
    s.gains_sq[m - 1] = layered_threshold_gain_sq(m, spec);
  }
  return s;
}

double snr_from_gain(double gain_sq, const CodeSpec& spec) {
  if (gain_sq < 0.0) throw std::invalid_argument("gain_sq must be >= 0");
  return spec.power * gain_sq / spec.noise_var;
}

double ideal_threshold_gain_sq(int m, const CodeSpec& spec) {
  if (m < 1) throw std::invalid_argument("block count must be >= 1");
  return (std::exp2(spec.ceiling_rate / m) - 1.0) * spec.noise_var / spec.power;
}

double layered_threshold_gain_sq(int m, const CodeSpec& spec) {
  if (m <= spec.layers) return ideal_threshold_gain_sq(m, spec);
  const double per_layer = spec.ceiling_rate / spec.layers;
  return (std::exp2(per_layer) - 1.0) *
         (static_cast<double>(spec.layers) / m) * spec.noise_var / spec.power;
}

double layering_loss_db(int m, int layers, double rate) {
  if (m < 1 || layers < 1) throw std::invalid_argument("m, L must be >= 1");
  if (!(rate > 0.0)) throw std::invalid_argument("rate must be > 0");
  if (m <= layers) return 0.0;
  // Threshold ratio is independent of P and sigma^2.
  const double ideal = std::exp2(rate / m) - 1.0;
  const double layered =
      (std::exp2(rate / layers) - 1.0) * static_cast<double>(layers) / m;
  return 10.0 * std::log10(layered / ideal);
}

double asymptotic_layering_loss(double rate, double layers) {
  if (!(rate > 0.0) || !(layers > 0.0)) {
    throw std::invalid_argument("rate and layers must be > 0");
  }
  const double r = rate / layers;
  return (std::exp2(r) - 1.0) / (r * kLn2);
}

double gaussian_mi_bits(const GainMatrix& g, int m, int l, double gain_sq,
                        double noise_var) {
  return logdet2_identity_plus(g.top_left(m, l), gain_sq / noise_var);
}

double accumulated_layer_mi(const GainMatrix& g, int m, int l, double gain_sq,
                            double noise_var) {
  if (l < 1 || l > g.cols() || m < 1 || m > g.rows()) {
    throw DimensionError("accumulated_layer_mi: (m,l) out of range");
  }
  const double a = gain_sq / noise_var;
  return logdet2_identity_plus(g.top_left(m, l), a) -
         logdet2_identity_plus(g.top_left(m, l - 1), a);
}

std::vector<double> kappa_rate_schedule(double rate, double kappa, int blocks) {
  if (kappa < 1.0 || kappa > static_cast<double>(blocks)) {
    throw std::invalid_argument("kappa must lie in [1, M]");
  }
  std::vector<double> out;
  double j = kappa;
  while (j <= static_cast<double>(blocks) + 1e-12) {
    out.push_back(rate * kappa / j);
    j += 1.0;
  }
  // Non-integer kappa leaves a partial last step; finish at m = M.
  if (out.empty() || out.back() > rate * kappa / blocks + 1e-15) {
    out.push_back(rate * kappa / blocks);
  }
  return out;
}

}  // namespace rateless
