#include <cmath>

#include "doctest.h"
#include "rateless/capacity.hpp"
#include "rateless/closed_form.hpp"
#include "rateless/optimizer.hpp"

using namespace rateless;

TEST_CASE("shortfall_report: perfect 3x3 gives an all-zero grid") {
  CodeSpec spec{6.0, 3, 3, 63.0, 1.0};
  GainMatrix g = design_3x3(6.0, 63.0);
  ShortfallReport rep =
      shortfall_report(g, spec, ThresholdSchedule::ideal(spec));
  CHECK(rep.max_percent < 1e-7);
  CHECK(rep.unitarity_residual < 1e-9);
}

TEST_CASE("shortfall_report: zero layer column loses everything") {
  Eigen::MatrixXcd e = design_3x3(6.0, 63.0).entries();
  e.col(2).setZero();
  for (int m = 0; m < 3; ++m) e.row(m) *= std::sqrt(63.0) / e.row(m).norm();
  CodeSpec spec{6.0, 3, 3, 63.0, 1.0};
  ShortfallReport rep = shortfall_report(GainMatrix(e, 63.0), spec,
                                         ThresholdSchedule::ideal(spec));
  // Renormalized rows overshoot layers 1-2; layer 3 carries no power at all.
  for (int m = 0; m < 3; ++m) CHECK(rep.percent(m, 2) == 100.0);
}

TEST_CASE("sample 10x3 design matches the reference shortfall grid") {
  const double expected[3][10] = {
      {0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00},
      {0.00, 0.28, 1.23, 1.46, 1.39, 0.44, 0.59, 0.48, 0.16, 0.23},
      {0.00, 0.29, 1.23, 1.48, 1.40, 0.43, 0.54, 0.51, 0.15, 0.23}};
  CodeSpec spec{5.0, 3, 10, 31.0, 1.0};
  ShortfallReport rep = shortfall_report(
      sample_design_l3_m10(), spec, ThresholdSchedule::layered_bound(spec));
  for (int l = 0; l < 3; ++l) {
    for (int m = 0; m < 10; ++m) {
      CHECK(std::abs(rep.percent(m, l) - expected[l][m]) < 0.05);
    }
  }
  CHECK(rep.max_percent < 1.55);
}

TEST_CASE("gauge canonicalization is idempotent and MI-preserving") {
  GainMatrix g = sample_design_l3_m10();
  CodeSpec spec{5.0, 3, 10, 31.0, 1.0};
  const auto sched = ThresholdSchedule::layered_bound(spec);
  ShortfallReport before = shortfall_report(g, spec, sched);

  GainMatrix fixed = g;
  fixed.canonicalize_gauge();
  for (int l = 0; l < 3; ++l) {
    CHECK(fixed.entries()(0, l).imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fixed.entries()(0, l).real() >= 0.0);
  }
  for (int m = 0; m < 10; ++m) {
    CHECK(fixed.entries()(m, 0).imag() == doctest::Approx(0.0).epsilon(1e-14));
  }
  ShortfallReport after = shortfall_report(fixed, spec, sched);
  CHECK((after.percent - before.percent).cwiseAbs().maxCoeff() < 1e-10);

  GainMatrix twice = fixed;
  twice.canonicalize_gauge();
  CHECK((twice.entries() - fixed.entries()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("layer order matters: swapping columns changes the report") {
  GainMatrix g = sample_design_l3_m10();
  Eigen::MatrixXcd swapped = g.entries();
  swapped.col(0).swap(swapped.col(2));
  CodeSpec spec{5.0, 3, 10, 31.0, 1.0};
  const auto sched = ThresholdSchedule::layered_bound(spec);
  ShortfallReport a = shortfall_report(g, spec, sched);
  ShortfallReport b = shortfall_report(GainMatrix(swapped, 31.0), spec, sched);
  CHECK((a.percent - b.percent).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("optimizer recovers the 2x2 closed form") {
  CodeSpec spec{4.0, 2, 2, 15.0, 1.0};
  OptimizerConfig cfg;
  cfg.restarts = 2;
  OptimizeResult res = optimize_gain_matrix(spec, cfg);
  CHECK(res.converged);
  CHECK(res.report.max_percent < 0.01);
  CHECK(res.gain.row_power_residual() < 1e-12);

  // Same MI profile as the closed form, entry gauge aside.
  GainMatrix ref = design_2x2(4.0, 15.0);
  for (int m = 1; m <= 2; ++m) {
    const double gain_sq = ideal_threshold_gain_sq(m, spec);
    for (int l = 1; l <= 2; ++l) {
      CHECK(accumulated_layer_mi(res.gain, m, l, gain_sq, 1.0) ==
            doctest::Approx(accumulated_layer_mi(ref, m, l, gain_sq, 1.0))
                .epsilon(1e-4));
    }
  }
}

TEST_CASE("optimizer is deterministic for a fixed seed") {
  CodeSpec spec{4.0, 2, 3, 15.0, 1.0};
  OptimizerConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 60;
  OptimizeResult a = optimize_gain_matrix(spec, cfg);
  OptimizeResult b = optimize_gain_matrix(spec, cfg);
  CHECK((a.gain.entries() - b.gain.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.objective == b.objective);
}

TEST_CASE("square case converges at lower rate too") {
  OptimizerConfig cfg;
  cfg.restarts = 3;
  CodeSpec spec{6.0, 3, 3, 63.0, 1.0};
  OptimizeResult high = optimize_gain_matrix(spec, cfg);
  CHECK(high.report.max_percent < 0.1);
  CodeSpec lower{4.5, 3, 3, 63.0, 1.0};
  OptimizeResult low = optimize_gain_matrix(lower, cfg);
  CHECK(low.report.max_percent <= high.report.max_percent + 0.1);
}

TEST_CASE("invalid configurations are rejected") {
  CodeSpec bad{5.0, 4, 3, 10.0, 1.0};  // L > M
  CHECK_THROWS(optimize_gain_matrix(bad));
  CodeSpec ok{5.0, 2, 2, 10.0, 1.0};
  OptimizerConfig cfg;
  cfg.restarts = 0;
  CHECK_THROWS(optimize_gain_matrix(ok, cfg));
}
