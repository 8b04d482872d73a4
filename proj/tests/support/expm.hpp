#pragma once

// Scaling-and-squaring matrix exponential used as an independent oracle for
// the linear Kolmogorov solves. Taylor series after scaling the norm below
// 1/2; error is at machine level for the desk-scale matrices in the tests.

#include <cmath>

#include <Eigen/Dense>

namespace testsupport {

template <typename Derived>
Eigen::MatrixXd expm(const Eigen::MatrixBase<Derived>& a) {
  using Mat = Eigen::MatrixXd;
  const Mat A = a;
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }

  const Mat B = A * scale;
  Mat term = Mat::Identity(A.rows(), A.cols());
  Mat sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = (term * B) / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace testsupport
