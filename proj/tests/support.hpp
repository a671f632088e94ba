#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "cct/grid.hpp"
#include "cct/linalg.hpp"
#include "cct/tuple.hpp"
#include "cct/types.hpp"

namespace cct::testing {

inline OperatorTuple make_checked(int n, std::vector<Matrix> mats,
                                  double tol = 1e-9) {
  OperatorTuple t{n, mats.empty() ? 0 : static_cast<int>(mats[0].rows()),
                  std::move(mats), tol};
  validate(t);
  return t;
}

// Polynomials in one Gaussian matrix: exactly commuting; rescaled so the row
// norm is sqrt(1 - margin), a strict contraction.
inline OperatorTuple random_commuting_tuple(Rng& rng, int n, int d,
                                            double margin = 0.1) {
  const Matrix a = rng.gaussian_matrix(d, d) / std::sqrt(double(d));
  std::vector<Matrix> mats(n);
  for (int i = 0; i < n; ++i) {
    mats[i] = rng.gaussian() * eye(d) + rng.gaussian() * a +
              rng.gaussian() * (a * a);
  }
  OperatorTuple t{n, d, std::move(mats), 1e-9};
  const double nrm = op_norm(row_op(t));
  const double s = std::sqrt(1.0 - margin) / std::max(nrm, 1e-8);
  for (auto& m : t.T) m *= s;
  validate(t);
  return t;
}

// Constant-free polynomials in one strictly upper triangular matrix: exactly
// commuting and jointly nilpotent of order <= d.
inline OperatorTuple random_nilpotent_tuple(Rng& rng, int n, int d,
                                            double margin = 0.1) {
  Matrix base = Matrix::Zero(d, d);
  for (int r = 0; r + 1 < d; ++r)
    for (int c = r + 1; c < d; ++c) base(r, c) = rng.gaussian();
  std::vector<Matrix> mats(n);
  for (int i = 0; i < n; ++i)
    mats[i] = rng.gaussian() * base + rng.gaussian() * (base * base);
  OperatorTuple t{n, d, std::move(mats), 1e-9};
  const double nrm = op_norm(row_op(t));
  if (nrm > 1e-12) {
    const double s = std::sqrt(1.0 - margin) / nrm;
    for (auto& m : t.T) m *= s;
  }
  validate(t);
  return t;
}

inline OperatorTuple conjugated(const OperatorTuple& t, const Matrix& q) {
  OperatorTuple out = t;
  for (auto& m : out.T) m = q * m * q.adjoint();
  return out;
}

inline Matrix scalar_matrix(Complex v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace cct::testing
