#include <cmath>
#include <complex>

#include "doctest.h"
#include "rateless/capacity.hpp"
#include "rateless/closed_form.hpp"
#include "rateless/rng.hpp"

using namespace rateless;

namespace {
double circular_dist(double a, double b) {
  const double two_pi = 2.0 * M_PI;
  double d = std::fmod(a - b, two_pi);
  if (d < 0.0) d += two_pi;
  return std::min(d, two_pi - d);
}
}  // namespace

TEST_CASE("2x2 design: entries and mutual information") {
  const double rate = 4.0;
  const double power = 63.0;
  GainMatrix g = design_2x2(rate, power);
  CHECK(std::norm(g.entries()(0, 0)) == doctest::Approx(power / 5.0));
  CHECK(g.entries()(1, 1).real() < 0.0);
  CHECK(g.row_power_residual() < 1e-12);
  CHECK(g.unitarity_residual() < 1e-12);

  CodeSpec spec{rate, 2, 2, power, 1.0};
  const double a1 = ideal_threshold_gain_sq(1, spec);
  const double a2 = ideal_threshold_gain_sq(2, spec);
  CHECK(accumulated_layer_mi(g, 1, 1, a1, 1.0) ==
        doctest::Approx(rate / 2).epsilon(1e-12));
  CHECK(accumulated_layer_mi(g, 1, 2, a1, 1.0) ==
        doctest::Approx(rate / 2).epsilon(1e-12));
  CHECK(accumulated_layer_mi(g, 2, 1, a2, 1.0) ==
        doctest::Approx(rate / 2).epsilon(1e-12));
  CHECK(accumulated_layer_mi(g, 2, 2, a2, 1.0) ==
        doctest::Approx(rate / 2).epsilon(1e-12));
}

TEST_CASE("2x2 design: Hadamard-like structure at small rate") {
  GainMatrix g = design_2x2(1e-9, 2.0);
  for (int m = 0; m < 2; ++m)
    for (int l = 0; l < 2; ++l)
      CHECK(std::abs(g.entries()(m, l)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("2x2 design is perfect over a rate sweep") {
  for (int i = 1; i <= 20; ++i) {
    const double rate = 12.0 * i / 20.0;
    GainMatrix g = design_2x2(rate, 10.0);
    CodeSpec spec{rate, 2, 2, 10.0, 1.0};
    ShortfallReport rep = validate_perfect(g, spec);
    CHECK(rep.max_percent < 1e-7);  // < 1e-9 relative
    CHECK(rep.unitarity_residual < 1e-9);
  }
}

TEST_CASE("3x3 design at R=6 matches the known solution") {
  GainMatrix g = design_3x3(6.0, 63.0);
  const double mag_sq[3][3] = {{3, 12, 48}, {24, 33, 6}, {36, 18, 9}};
  for (int m = 0; m < 3; ++m)
    for (int l = 0; l < 3; ++l)
      CHECK(std::norm(g.entries()(m, l)) ==
            doctest::Approx(mag_sq[m][l]).epsilon(1e-9));

  const double theta1 = std::acos(-5.0 / (2.0 * std::sqrt(22.0)));
  const double theta2 = 2.0 * M_PI - std::atan(3.0 * std::sqrt(7.0));
  const double theta3 = -std::atan(std::sqrt(7.0));
  const double theta4 = M_PI - std::atan(std::sqrt(7.0) / 3.0);
  CHECK(circular_dist(std::arg(g.entries()(1, 1)), theta1) < 1e-9);
  CHECK(circular_dist(std::arg(g.entries()(1, 2)), theta2) < 1e-9);
  CHECK(circular_dist(std::arg(g.entries()(2, 1)), theta3) < 1e-9);
  CHECK(circular_dist(std::arg(g.entries()(2, 2)), theta4) < 1e-9);

  CHECK(g.unitarity_residual() < 1e-9);
  CodeSpec spec{6.0, 3, 3, 63.0, 1.0};
  for (int m = 1; m <= 3; ++m) {
    const double gain_sq = ideal_threshold_gain_sq(m, spec);
    for (int l = 1; l <= 3; ++l) {
      CHECK(accumulated_layer_mi(g, m, l, gain_sq, 1.0) ==
            doctest::Approx(2.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("3x3 power rescaling keeps the design perfect") {
  const double rate = 5.0;
  GainMatrix g = design_3x3(rate, 10.0);
  CHECK(g.row_power_residual() < 1e-12);
  CodeSpec spec{rate, 3, 3, 10.0, 0.25};
  ShortfallReport rep = validate_perfect(g, spec);
  CHECK(rep.max_percent < 1e-7);
}

TEST_CASE("3x3 maximum rate") {
  const double limit = max_rate_3x3();
  CHECK(limit == doctest::Approx(8.33).epsilon(1e-3));
  CHECK(limit ==
        doctest::Approx(3.0 * (std::log2(7.0 + 3.0 * std::sqrt(5.0)) - 1.0))
            .epsilon(1e-13));
  CHECK_NOTHROW(design_3x3(limit - 1e-9, 1.0));
  CHECK_THROWS_AS(design_3x3(limit + 1e-6, 1.0), RateTooHighError);

  // Triangle closes exactly at the boundary.
  const double x = (3.0 + std::sqrt(5.0)) / 2.0;
  const double q = x * x * x * x - x * x * x + x * x - x + 1.0;
  CHECK(std::abs(std::sqrt(x) + std::sqrt(x * x * x) - std::sqrt(q)) < 1e-9);

  // Feasible below: strictly positive slack over a grid of x.
  for (double xv = 1.01; xv < x; xv += 0.05) {
    const double qq = xv * xv * xv * xv - xv * xv * xv + xv * xv - xv + 1.0;
    CHECK(std::sqrt(xv) + std::sqrt(xv * xv * xv) - std::sqrt(qq) > 0.0);
  }
}

TEST_CASE("gauge twirls leave mutual information unchanged") {
  GainMatrix g = design_3x3(6.0, 63.0);
  Rng rng(11);
  Eigen::MatrixXcd twirled = g.entries();
  for (int m = 0; m < 3; ++m)
    twirled.row(m) *= std::polar(1.0, 2.0 * M_PI * rng.uniform());
  for (int l = 0; l < 3; ++l)
    twirled.col(l) *= std::polar(1.0, 2.0 * M_PI * rng.uniform());
  GainMatrix h(twirled, 63.0);
  for (int m = 1; m <= 3; ++m) {
    for (int l = 1; l <= 3; ++l) {
      CHECK(accumulated_layer_mi(h, m, l, 0.3, 1.0) ==
            doctest::Approx(accumulated_layer_mi(g, m, l, 0.3, 1.0))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("conjugate solution is equally valid") {
  GainMatrix g = design_3x3(6.0, 63.0);
  GainMatrix conj(g.entries().conjugate(), 63.0);
  CodeSpec spec{6.0, 3, 3, 63.0, 1.0};
  CHECK(validate_perfect(conj, spec).max_percent < 1e-7);
}

TEST_CASE("random non-unitary matrix shows positive shortfall") {
  Rng rng(5);
  Eigen::MatrixXcd e(3, 3);
  for (int m = 0; m < 3; ++m) {
    for (int l = 0; l < 3; ++l)
      e(m, l) = std::complex<double>(rng.normal(), rng.normal());
    e.row(m) *= std::sqrt(63.0) / e.row(m).norm();
  }
  CodeSpec spec{6.0, 3, 3, 63.0, 1.0};
  ShortfallReport rep = validate_perfect(GainMatrix(e, 63.0), spec);
  CHECK(rep.max_percent > 1e-3);
}

TEST_CASE("validate_perfect rejects mismatched dimensions") {
  GainMatrix g = design_2x2(4.0, 10.0);
  CodeSpec spec{4.0, 3, 3, 10.0, 1.0};
  CHECK_THROWS_AS(validate_perfect(g, spec), DimensionError);
}
