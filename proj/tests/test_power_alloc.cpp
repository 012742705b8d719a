#include <cmath>

#include "doctest.h"
#include "rateless/capacity.hpp"
#include "rateless/power_alloc.hpp"

using namespace rateless;

namespace {
CodeSpec table_spec(int blocks) { return CodeSpec{8.0, 4, blocks, 255.0, 1.0}; }
}  // namespace

TEST_CASE("power allocation reproduces the 4-layer P=255 grid") {
  PowerAllocation alloc = allocate_powers(table_spec(5));
  const double expected[5][4] = {{3.00, 12.00, 48.00, 192.00},
                                 {40.80, 86.70, 86.70, 40.80},
                                 {48.98, 61.21, 81.32, 63.48},
                                 {55.77, 60.58, 71.48, 67.16},
                                 {58.79, 61.65, 67.50, 67.06}};
  for (int m = 0; m < 5; ++m)
    for (int l = 0; l < 4; ++l)
      CHECK(std::abs(alloc.powers(m, l) - expected[m][l]) < 0.01);

  const double gains_db[5] = {0.00, -12.30, -16.78, -19.29, -20.99};
  for (int m = 0; m < 5; ++m) {
    CHECK(std::abs(10.0 * std::log10(alloc.thresholds.gains_sq[m]) -
                   gains_db[m]) < 0.01);
  }
}

TEST_CASE("rows conserve total power") {
  CodeSpec spec{8.0, 4, 50, 255.0, 1.0};
  PowerAllocation alloc = allocate_powers(spec);
  for (int m = 0; m < 50; ++m) {
    CHECK(std::abs(alloc.powers.row(m).sum() - 255.0) / 255.0 < 1e-9);
    for (int l = 0; l < 4; ++l) CHECK(alloc.powers(m, l) >= 0.0);
  }
}

TEST_CASE("verify_allocation residuals vanish, perturbations do not") {
  PowerAllocation alloc = allocate_powers(table_spec(5));
  Eigen::MatrixXd residual = verify_allocation(alloc);
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-9);

  PowerAllocation bumped = alloc;
  bumped.powers(1, 1) *= 1.01;
  Eigen::MatrixXd r2 = verify_allocation(bumped);
  for (int m = 1; m < 5; ++m) CHECK(std::abs(r2(m, 1)) > 1e-6);
}

TEST_CASE("block-1 row telescopes to the single-block capacity") {
  PowerAllocation alloc = allocate_powers(table_spec(5));
  double total = 0.0;
  double cum = 0.0;
  for (int l = 0; l < 4; ++l) {
    const double snr = alloc.powers(0, l) / (cum + 1.0);
    total += std::log2(1.0 + snr);
    cum += alloc.powers(0, l);
  }
  CHECK(total == doctest::Approx(std::log2(1.0 + 255.0)).epsilon(1e-10));
}

TEST_CASE("per-layer shortfalls are unequal from block 2 on") {
  const CodeSpec spec = table_spec(2);
  PowerAllocation alloc = allocate_powers(spec);
  const double gain_sq = alloc.thresholds.gains_sq[1];
  auto delta = [&](int l) {
    return alloc.per_layer_rate -
           std::log2(1.0 + layer_block_snr(alloc.powers.row(0).transpose(),
                                           l, gain_sq, 1.0));
  };
  CHECK(std::abs(delta(1) - delta(2)) > 1e-6);
}

TEST_CASE("single-layer allocation accumulates the full rate") {
  CodeSpec spec{3.0, 1, 6, 7.0, 1.0};
  PowerAllocation alloc = allocate_powers(spec);
  CHECK(alloc.powers(0, 0) == doctest::Approx(7.0));
  Eigen::MatrixXd residual = verify_allocation(alloc);
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-9);
  for (int m = 0; m < 6; ++m) CHECK(alloc.powers(m, 0) > 0.0);
}

TEST_CASE("allocation is prefix-stable when M grows") {
  PowerAllocation small = allocate_powers(table_spec(3));
  PowerAllocation big = allocate_powers(table_spec(8));
  CHECK((big.powers.topRows(3) - small.powers).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("accumulated SNR dominates the conservative bound") {
  PowerAllocation alloc = allocate_powers(table_spec(5));
  const double rl = alloc.per_layer_rate;
  for (int m = 1; m <= 5; ++m) {
    const double gain_sq = alloc.thresholds.gains_sq[m - 1];
    for (int l = 1; l <= 4; ++l) {
      double snr_sum = 0.0;
      for (int mp = 0; mp < m; ++mp) {
        snr_sum += layer_block_snr(alloc.powers.row(mp).transpose(), l,
                                   gain_sq, 1.0);
      }
      CHECK(std::log2(1.0 + std::log(2.0) * rl) <=
            std::log2(1.0 + snr_sum) + 1e-12);
    }
  }
}

TEST_CASE("efficiency bounds") {
  const auto [mid, linear] = efficiency_lower_bound(1.0 / 3.0);
  CHECK(mid == doctest::Approx((std::log(2.0) / 3.0) /
                               (std::exp2(1.0 / 3.0) - 1.0))
                   .epsilon(1e-12));
  CHECK(mid == doctest::Approx(0.8889).epsilon(1e-3));
  CHECK(mid >= linear);
  for (double r = 0.02; r <= 4.0; r += 0.02) {
    const auto [m, li] = efficiency_lower_bound(r);
    CHECK(m >= li);
  }
  const auto [m0, l0] = efficiency_lower_bound(1e-9);
  CHECK(m0 == doctest::Approx(1.0));
  CHECK(l0 == doctest::Approx(1.0));
}

TEST_CASE("conservative rate and its inversion identity") {
  const double r = conservative_rate(5.0, 15.0);
  CHECK(r == doctest::Approx(15.0 * std::log2(1.0 + std::log(2.0) / 3.0)));
  // R/L = (2^{R''/L} - 1)/ln2
  CHECK(5.0 / 15.0 ==
        doctest::Approx((std::exp2(r / 15.0) - 1.0) / std::log(2.0))
            .epsilon(1e-12));
  CHECK(conservative_rate(1e-8, 1.0) / 1e-8 == doctest::Approx(1.0));
}
