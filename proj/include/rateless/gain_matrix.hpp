#pragma once

#include <Eigen/Dense>

#include "rateless/types.hpp"

namespace rateless {

/// M x L complex combining matrix with rows constrained to squared norm P.
/// Row m holds the weights applied to the L layer codewords in redundancy
/// block m.
class GainMatrix {
 public:
  GainMatrix(Eigen::MatrixXcd entries, double power);

  int rows() const { return static_cast<int>(entries_.rows()); }
  int cols() const { return static_cast<int>(entries_.cols()); }
  double power() const { return power_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  /// Upper-left m x l submatrix (l may be 0, giving an m x 0 matrix).
  Eigen::MatrixXcd top_left(int m, int l) const;

  /// Rotates row and column phases so the first row and first column are
  /// real and nonnegative.  Leaves every |det| quantity unchanged.
  void canonicalize_gauge();

  /// max_m |  ||row_m||^2 - P | / P
  double row_power_residual() const;

  /// || G^H G - P I ||_F / P; meaningful only when rows == cols.
  double unitarity_residual() const;

 private:
  Eigen::MatrixXcd entries_;
  double power_;
};

/// Per-(m,l) percent shortfall of accumulated layer mutual information
/// against the per-layer rate.  Rows index blocks m, columns index layers l.
struct ShortfallReport {
  Eigen::MatrixXd percent;     // 100 * max(0, (R/L - I_{m,l}) / (R/L))
  double max_percent = 0.0;
  double unitarity_residual = 0.0;
};

}  // namespace rateless
