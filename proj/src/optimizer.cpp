#include "rateless/optimizer.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <limits>

#include "rateless/capacity.hpp"
#include "rateless/closed_form.hpp"
#include "rateless/rng.hpp"

namespace rateless {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Parameter vector layout: interleaved (re, im) per entry, row-major.
// Rows are renormalized to squared norm P when the matrix is built, so the
// power constraint holds exactly at every iterate.
MatrixXcd build_matrix(const VectorXd& theta, int blocks, int layers,
                       double power) {
  MatrixXcd g(blocks, layers);
  int idx = 0;
  for (int m = 0; m < blocks; ++m) {
    for (int l = 0; l < layers; ++l) {
      g(m, l) = std::complex<double>(theta(idx), theta(idx + 1));
      idx += 2;
    }
    const double norm = g.row(m).norm();
    if (norm > 0.0) {
      g.row(m) *= std::sqrt(power) / norm;
    } else {
      g.row(m).setConstant(std::sqrt(power / layers));
    }
  }
  return g;
}

constexpr double kLn2 = 0.69314718055994530942;

double logdet2_chol(const MatrixXcd& h) {
  Eigen::LLT<MatrixXcd> llt(h);
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (int i = 0; i < h.rows(); ++i) acc += std::log(std::real(l(i, i)));
  return 2.0 * acc / kLn2;
}

// Signed relative shortfalls, one per (m,l), stacked m-major.
VectorXd residuals(const MatrixXcd& g, const CodeSpec& spec,
                   const std::vector<double>& gains_sq) {
  const int blocks = spec.blocks;
  const int layers = spec.layers;
  const double per_layer = spec.per_layer_rate();
  VectorXd r(blocks * layers);
  for (int m = 1; m <= blocks; ++m) {
    const double a = gains_sq[m - 1] / spec.noise_var;
    const MatrixXcd sub = g.topRows(m);
    double prev = 0.0;
    for (int l = 1; l <= layers; ++l) {
      const MatrixXcd b = sub.leftCols(l);
      const double cur = logdet2_chol(
          MatrixXcd::Identity(m, m) + a * b * b.adjoint());
      const double mi = cur - prev;
      prev = cur;
      r((m - 1) * layers + (l - 1)) = (per_layer - mi) / per_layer;
    }
  }
  return r;
}

double max_deficit(const VectorXd& r) {
  double worst = 0.0;
  for (int i = 0; i < r.size(); ++i) worst = std::max(worst, r(i));
  return worst;
}

VectorXd pack(const MatrixXcd& g) {
  VectorXd theta(2 * g.size());
  int idx = 0;
  for (int m = 0; m < g.rows(); ++m) {
    for (int l = 0; l < g.cols(); ++l) {
      theta(idx++) = g(m, l).real();
      theta(idx++) = g(m, l).imag();
    }
  }
  return theta;
}

MatrixXcd random_rows(Rng& rng, int blocks, int layers) {
  MatrixXcd g(blocks, layers);
  for (int m = 0; m < blocks; ++m) {
    for (int l = 0; l < layers; ++l) {
      g(m, l) = std::complex<double>(rng.normal(), rng.normal());
    }
  }
  return g;
}

MatrixXcd random_unitary(Rng& rng, int n) {
  const MatrixXcd z = random_rows(rng, n, n);
  Eigen::HouseholderQR<MatrixXcd> qr(z);
  MatrixXcd q = qr.householderQ();
  return q;
}

MatrixXcd initial_guess(const CodeSpec& spec, int restart, Rng& rng) {
  const int blocks = spec.blocks;
  const int layers = spec.layers;
  const double root_p = std::sqrt(spec.power);

  if (restart == 0) {
    MatrixXcd g(blocks, layers);
    bool seeded = false;
    if (layers == 2) {
      g.topRows(2) = design_2x2(spec.ceiling_rate, spec.power).entries();
      seeded = true;
    } else if (layers == 3 && spec.ceiling_rate < max_rate_3x3()) {
      g.topRows(3) = design_3x3(spec.ceiling_rate, spec.power).entries();
      seeded = true;
    }
    if (!seeded) {
      g.topRows(layers) =
          root_p * random_unitary(rng, layers).topRows(layers);
    }
    // Later blocks: near-uniform magnitudes, random phases.
    for (int m = layers; m < blocks; ++m) {
      for (int l = 0; l < layers; ++l) {
        const double phase = (l == 0) ? 0.0 : 2.0 * M_PI * rng.uniform();
        g(m, l) = std::polar(root_p / std::sqrt(double(layers)), phase);
      }
    }
    return g;
  }

  if (layers == blocks) return root_p * random_unitary(rng, blocks);
  return random_rows(rng, blocks, layers);
}

struct LocalFit {
  VectorXd theta;
  double objective = std::numeric_limits<double>::infinity();
  double max_shortfall = std::numeric_limits<double>::infinity();
};

LocalFit levenberg_marquardt(const CodeSpec& spec,
                             const std::vector<double>& gains_sq,
                             VectorXd theta, const OptimizerConfig& cfg) {
  const int blocks = spec.blocks;
  const int layers = spec.layers;
  const int n_res = blocks * layers;
  const int n_par = static_cast<int>(theta.size());

  auto eval = [&](const VectorXd& t) {
    return residuals(build_matrix(t, blocks, layers, spec.power), spec,
                     gains_sq);
  };

  VectorXd r = eval(theta);
  double objective = r.squaredNorm();
  double lambda = 1e-3;

  MatrixXd jac(n_res, n_par);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    if (objective < 1e-24) break;
    for (int j = 0; j < n_par; ++j) {
      const double h = cfg.fd_step * std::max(1.0, std::abs(theta(j)));
      VectorXd probe = theta;
      probe(j) += h;
      jac.col(j) = (eval(probe) - r) / h;
    }
    const MatrixXd jtj = jac.transpose() * jac;
    const VectorXd jtr = jac.transpose() * r;

    bool stepped = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      MatrixXd damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal();
      damped.diagonal().array() += 1e-12;
      const VectorXd delta = damped.ldlt().solve(-jtr);
      const VectorXd cand = theta + delta;
      const VectorXd rc = eval(cand);
      const double oc = rc.squaredNorm();
      if (oc < objective) {
        const double rel_drop = (objective - oc) / std::max(objective, 1e-300);
        theta = cand;
        r = rc;
        objective = oc;
        lambda = std::max(lambda * 0.35, 1e-12);
        stepped = true;
        if (rel_drop < 1e-12 && iter > 20) iter = cfg.max_iterations;
        break;
      }
      lambda *= 6.0;
    }
    if (!stepped) break;
  }

  LocalFit fit;
  fit.theta = theta;
  fit.objective = objective;
  fit.max_shortfall = max_deficit(r);
  return fit;
}

}  // namespace

ShortfallReport shortfall_report(const GainMatrix& g, const CodeSpec& spec,
                                 const ThresholdSchedule& schedule) {
  spec.validate();
  if (g.rows() != spec.blocks || g.cols() != spec.layers ||
      static_cast<int>(schedule.gains_sq.size()) < spec.blocks) {
    throw DimensionError("shortfall_report: dimension mismatch");
  }
  ShortfallReport report;
  report.percent.setZero(spec.blocks, spec.layers);
  const double per_layer = spec.per_layer_rate();
  for (int m = 1; m <= spec.blocks; ++m) {
    for (int l = 1; l <= spec.layers; ++l) {
      const double mi = accumulated_layer_mi(g, m, l,
                                             schedule.gains_sq[m - 1],
                                             spec.noise_var);
      report.percent(m - 1, l - 1) =
          100.0 * std::max(0.0, (per_layer - mi) / per_layer);
    }
  }
  report.max_percent = report.percent.maxCoeff();
  report.unitarity_residual =
      g.rows() == g.cols() ? g.unitarity_residual() : 0.0;
  return report;
}

OptimizeResult optimize_gain_matrix(const CodeSpec& spec,
                                    const OptimizerConfig& config) {
  spec.validate();
  if (spec.layers > spec.blocks) {
    throw std::invalid_argument("optimize_gain_matrix requires L <= M");
  }
  if (config.restarts < 1) throw std::invalid_argument("restarts must be >= 1");

  const bool square = spec.layers == spec.blocks;
  const ThresholdSchedule schedule = square
                                         ? ThresholdSchedule::ideal(spec)
                                         : ThresholdSchedule::layered_bound(spec);
  const double tol =
      config.shortfall_tol > 0.0 ? config.shortfall_tol : (square ? 1e-3 : 2e-2);

  LocalFit best;
  double best_unitarity = std::numeric_limits<double>::infinity();
  int best_restart = -1;

  for (int restart = 0; restart < config.restarts; ++restart) {
    Rng rng(config.seed * 0x9e3779b97f4a7c15ULL + restart);
    const VectorXd theta0 = pack(initial_guess(spec, restart, rng));
    LocalFit fit = levenberg_marquardt(spec, schedule.gains_sq, theta0, config);
    const double unit =
        GainMatrix(build_matrix(fit.theta, spec.blocks, spec.layers,
                                spec.power),
                   spec.power)
            .unitarity_residual();
    const bool better =
        fit.objective < best.objective ||
        (fit.objective == best.objective && unit < best_unitarity);
    if (better) {
      best = fit;
      best_unitarity = unit;
      best_restart = restart;
    }
    if (best.max_shortfall <= tol * 0.1) break;  // clearly done
  }

  GainMatrix gain(build_matrix(best.theta, spec.blocks, spec.layers,
                               spec.power),
                  spec.power);
  gain.canonicalize_gauge();

  OptimizeResult result{gain, shortfall_report(gain, spec, schedule),
                        best.objective,
                        best.max_shortfall <= tol,
                        best.max_shortfall > 10.0 * tol,
                        best_restart};
  return result;
}

GainMatrix sample_design_l3_m10() {
  // Row-norm-sqrt(31) reference design for L=3, M=10 at R=5.
  const double mag[10][3] = {
      {1.4747, 2.6277, 4.6819}, {3.5075, 3.7794, 2.1009},
      {4.0648, 3.1298, 2.1637}, {3.2146, 3.1322, 3.2949},
      {3.2146, 3.3328, 3.0918}, {3.2146, 3.1049, 3.3206},
      {3.2146, 3.3248, 3.1004}, {3.2146, 3.0980, 3.3270},
      {3.2146, 3.2880, 3.1394}, {3.2146, 3.1795, 3.2492}};
  const double phase[10][3] = {
      {0.0, 0.0, 0.0},      {0.0, 2.0510, -1.9486}, {0.0, -0.9531, 2.5732},
      {0.0, 3.0765, 0.9132}, {0.0, -1.6547, -1.4248}, {0.0, 0.9409, 2.8982},
      {0.0, 1.2506, -0.2027}, {0.0, -1.4196, 1.9403}, {0.0, -2.9449, -1.9243},
      {0.0, 0.7839, 0.3413}};
  const double power = 31.0;
  Eigen::MatrixXcd g(10, 3);
  for (int m = 0; m < 10; ++m) {
    for (int l = 0; l < 3; ++l) g(m, l) = std::polar(mag[m][l], phase[m][l]);
    g.row(m) *= std::sqrt(power) / g.row(m).norm();
  }
  return GainMatrix(std::move(g), power);
}

}  // namespace rateless
