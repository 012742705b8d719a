#include "rateless/gain_matrix.hpp"

#include <cmath>
#include <complex>

namespace rateless {

GainMatrix::GainMatrix(Eigen::MatrixXcd entries, double power)
    : entries_(std::move(entries)), power_(power) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw DimensionError("gain matrix must be at least 1x1");
  }
  if (power_ <= 0.0) {
    throw std::invalid_argument("gain matrix power must be positive");
  }
}

Eigen::MatrixXcd GainMatrix::top_left(int m, int l) const {
  if (m < 1 || m > rows() || l < 0 || l > cols()) {
    throw DimensionError("submatrix index out of range");
  }
  return entries_.topLeftCorner(m, l);
}

void GainMatrix::canonicalize_gauge() {
  using std::abs;
  const std::complex<double> one(1.0, 0.0);
  // Column phases first: makes the first row real-positive.
  for (int l = 0; l < cols(); ++l) {
    const auto pivot = entries_(0, l);
    if (abs(pivot) > 0.0) entries_.col(l) *= std::conj(pivot) / abs(pivot);
  }
  // Row phases for rows 2..M: makes the first column real-positive without
  // touching the first row.
  for (int m = 1; m < rows(); ++m) {
    const auto pivot = entries_(m, 0);
    if (abs(pivot) > 0.0) entries_.row(m) *= std::conj(pivot) / abs(pivot);
  }
  (void)one;
}

double GainMatrix::row_power_residual() const {
  double worst = 0.0;
  for (int m = 0; m < rows(); ++m) {
    worst = std::max(worst,
                     std::abs(entries_.row(m).squaredNorm() - power_) / power_);
  }
  return worst;
}

double GainMatrix::unitarity_residual() const {
  const int l = cols();
  Eigen::MatrixXcd gram = entries_.adjoint() * entries_;
  gram -= power_ * Eigen::MatrixXcd::Identity(l, l);
  return gram.norm() / power_;
}

}  // namespace rateless
