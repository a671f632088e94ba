#include "cct/grid.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace cct {

Complex Rng::gaussian() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

Vector Rng::ball_point(int n, double radius) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = gaussian();
  const double nrm = v.norm();
  if (nrm == 0.0) return Vector::Zero(n);
  // |z| ~ radius * U^(1/2n) gives the uniform volume law on the ball of C^n.
  const double r = radius * std::pow(uniform(), 1.0 / (2.0 * n));
  return v * (r / nrm);
}

Matrix Rng::gaussian_matrix(int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = gaussian();
  return m;
}

Matrix Rng::unitary(int d) {
  Eigen::JacobiSVD<Matrix> svd(gaussian_matrix(d, d),
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

std::vector<Vector> ball_grid(int n, int grid_size, double radius,
                              std::uint64_t seed) {
  std::vector<Vector> pts;
  pts.reserve(grid_size + 1);
  pts.push_back(Vector::Zero(n));
  Rng rng(seed);
  for (int k = 0; k < grid_size; ++k) pts.push_back(rng.ball_point(n, radius));
  return pts;
}

}  // namespace cct
