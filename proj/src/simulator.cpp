#include "rateless/simulator.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "rateless/rng.hpp"

namespace rateless {

namespace {
using cplx = std::complex<double>;

cplx draw_symbol(Rng& rng) {
  // Unit-power circular complex Gaussian.
  return cplx(rng.normal() * M_SQRT1_2, rng.normal() * M_SQRT1_2);
}

cplx draw_dither(Rng& rng, DitherAlphabet alphabet) {
  switch (alphabet) {
    case DitherAlphabet::BinaryPm1:
      return (rng.next_u64() & 1u) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
    case DitherAlphabet::UnitPhase:
      return std::polar(1.0, 2.0 * M_PI * rng.uniform());
    case DitherAlphabet::Off:
      return cplx(1.0, 0.0);
  }
  return cplx(1.0, 0.0);
}

int resolve_blocks(const SimConfig& cfg) {
  const int total = static_cast<int>(cfg.allocation.powers.rows());
  const int m = cfg.max_blocks > 0 ? cfg.max_blocks : total;
  if (m < 1 || m > total) {
    throw std::invalid_argument("max_blocks out of range for allocation");
  }
  return m;
}

void validate_config(const SimConfig& cfg) {
  if (cfg.num_symbols < 1) throw std::invalid_argument("num_symbols >= 1");
  if (!(cfg.gain_sq > 0.0)) throw std::invalid_argument("gain_sq must be > 0");
}

struct Moment {
  cplx cross{0.0, 0.0};  // sum s * conj(c)
  double combined = 0.0;  // sum |s|^2
  double signal = 0.0;    // sum |c|^2
  long long count = 0;

  double sinr() const {
    if (count == 0 || signal <= 0.0) return 0.0;
    const double cross_sq = std::norm(cross);
    const double residual = combined - cross_sq / signal;
    return cross_sq / signal / std::max(residual, 1e-300);
  }
};
}  // namespace

SimReport simulate_dithered_repetition(const SimConfig& cfg) {
  validate_config(cfg);
  const int blocks = resolve_blocks(cfg);
  const int layers = static_cast<int>(cfg.allocation.powers.cols());
  const Eigen::MatrixXd& powers = cfg.allocation.powers;
  const double noise_var = cfg.allocation.spec.noise_var;
  const double alpha = std::sqrt(cfg.gain_sq);
  const int n = cfg.num_symbols;
  const int segments = std::min(8, n);

  // MRC weight and per-block interference+noise variance for each (m,l).
  Eigen::MatrixXd weight(blocks, layers);
  Eigen::MatrixXd analytic(blocks, layers);
  for (int l = 0; l < layers; ++l) {
    double running = 0.0;
    for (int m = 0; m < blocks; ++m) {
      double interference = 0.0;
      for (int k = 0; k < l; ++k) interference += powers(m, k);
      const double var = cfg.gain_sq * interference + noise_var;
      weight(m, l) = alpha * std::sqrt(powers(m, l)) / var;
      running += cfg.gain_sq * powers(m, l) / var;
      analytic(m, l) = running;
    }
  }

  std::vector<Moment> acc(static_cast<size_t>(segments) * blocks * layers);
  auto at = [&](int seg, int m, int l) -> Moment& {
    return acc[(static_cast<size_t>(seg) * blocks + m) * layers + l];
  };

  Rng rng(cfg.seed);
  std::vector<cplx> symbols(layers);
  std::vector<cplx> dither(static_cast<size_t>(blocks) * layers);
  std::vector<cplx> noise(blocks);

  for (int i = 0; i < n; ++i) {
    const int seg = static_cast<int>(
        static_cast<long long>(i) * segments / n);
    for (int l = 0; l < layers; ++l) symbols[l] = draw_symbol(rng);
    for (auto& d : dither) d = draw_dither(rng, cfg.dither);
    for (auto& z : noise)
      z = std::sqrt(noise_var) * draw_symbol(rng);

    for (int l = 0; l < layers; ++l) {
      cplx mrc(0.0, 0.0);
      for (int m = 0; m < blocks; ++m) {
        // Genie-aided: layers above l are already removed exactly.
        cplx received = noise[m];
        for (int k = 0; k <= l; ++k) {
          received += alpha * std::sqrt(powers(m, k)) *
                      dither[static_cast<size_t>(m) * layers + k] * symbols[k];
        }
        const cplx undithered =
            std::conj(dither[static_cast<size_t>(m) * layers + l]) * received;
        mrc += weight(m, l) * undithered;
        Moment& mom = at(seg, m, l);
        mom.cross += mrc * std::conj(symbols[l]);
        mom.combined += std::norm(mrc);
        mom.signal += std::norm(symbols[l]);
        mom.count += 1;
      }
    }
  }

  SimReport report;
  report.seed_used = cfg.seed;
  report.empirical_sinr.setZero(blocks, layers);
  report.analytic_sinr = analytic;
  report.standard_error.setZero(blocks, layers);
  for (int m = 0; m < blocks; ++m) {
    for (int l = 0; l < layers; ++l) {
      Moment total;
      double mean = 0.0, sq = 0.0;
      int used = 0;
      for (int seg = 0; seg < segments; ++seg) {
        const Moment& mom = at(seg, m, l);
        total.cross += mom.cross;
        total.combined += mom.combined;
        total.signal += mom.signal;
        total.count += mom.count;
        if (mom.count > 0) {
          const double v = mom.sinr();
          mean += v;
          sq += v * v;
          ++used;
        }
      }
      report.empirical_sinr(m, l) = total.sinr();
      if (used > 1) {
        mean /= used;
        const double var = std::max(0.0, sq / used - mean * mean);
        report.standard_error(m, l) =
            std::sqrt(var / std::max(1, used - 1));
      } else {
        report.standard_error(m, l) = report.empirical_sinr(m, l);
      }
    }
  }

  report.max_offdiag_corr = dither_decorrelation_check(cfg);
  return report;
}

double dither_decorrelation_check(const SimConfig& cfg) {
  validate_config(cfg);
  const int blocks = resolve_blocks(cfg);
  if (blocks < 2) return 0.0;
  const int layers = static_cast<int>(cfg.allocation.powers.cols());
  const Eigen::MatrixXd& powers = cfg.allocation.powers;
  const double noise_var = cfg.allocation.spec.noise_var;
  const double alpha = std::sqrt(cfg.gain_sq);
  const int top = layers - 1;  // residual while decoding the top layer

  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(blocks, blocks);
  Rng rng(cfg.seed ^ 0x5851f42d4c957f2dULL);
  std::vector<cplx> symbols(layers);
  std::vector<cplx> dither(static_cast<size_t>(blocks) * layers);
  std::vector<cplx> residual(blocks);

  for (int i = 0; i < cfg.num_symbols; ++i) {
    for (int l = 0; l < layers; ++l) symbols[l] = draw_symbol(rng);
    for (auto& d : dither) d = draw_dither(rng, cfg.dither);
    for (int m = 0; m < blocks; ++m) {
      cplx v(std::sqrt(noise_var) * draw_symbol(rng));
      for (int k = 0; k < top; ++k) {
        v += alpha * std::sqrt(powers(m, k)) *
             dither[static_cast<size_t>(m) * layers + k] * symbols[k];
      }
      residual[m] =
          std::conj(dither[static_cast<size_t>(m) * layers + top]) * v;
    }
    for (int a = 0; a < blocks; ++a) {
      for (int b = 0; b < blocks; ++b) {
        cov(a, b) += residual[a] * std::conj(residual[b]);
      }
    }
  }

  double worst = 0.0;
  for (int a = 0; a < blocks; ++a) {
    for (int b = 0; b < blocks; ++b) {
      if (a == b) continue;
      const double denom =
          std::sqrt(std::real(cov(a, a)) * std::real(cov(b, b)));
      if (denom > 0.0) {
        worst = std::max(worst, std::abs(cov(a, b)) / denom);
      }
    }
  }
  return worst;
}

}  // namespace rateless
