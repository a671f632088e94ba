#include "cct/tuple.hpp"

#include <Eigen/Eigenvalues>

namespace cct {

void validate(const OperatorTuple& t) {
  if (t.n < 1 || t.d < 1)
    throw dimension_mismatch("tuple needs n >= 1 and d >= 1");
  if (static_cast<int>(t.T.size()) != t.n)
    throw dimension_mismatch("tuple holds " + std::to_string(t.T.size()) +
                             " matrices, n = " + std::to_string(t.n));
  for (const auto& m : t.T)
    if (m.rows() != t.d || m.cols() != t.d)
      throw dimension_mismatch("tuple entries must be d x d");
  for (int i = 0; i < t.n; ++i)
    for (int j = i + 1; j < t.n; ++j) {
      const double mag = max_abs(Matrix(t.T[i] * t.T[j] - t.T[j] * t.T[i]));
      if (mag > t.tol) throw NonCommutingError(i, j, mag);
    }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(sum_TT_adj(t)));
  const double top = es.eigenvalues().maxCoeff();
  if (top > 1.0 + t.tol) throw NotRowContractionError(top - 1.0);
}

Matrix row_op(const OperatorTuple& t) {
  Matrix row(t.d, t.n * t.d);
  for (int i = 0; i < t.n; ++i) row.middleCols(i * t.d, t.d) = t.T[i];
  return row;
}

Matrix sum_TT_adj(const OperatorTuple& t) {
  Matrix s = Matrix::Zero(t.d, t.d);
  for (const auto& m : t.T) s += m * m.adjoint();
  return s;
}

Matrix gram_TstarT(const OperatorTuple& t) {
  Matrix g(t.n * t.d, t.n * t.d);
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j)
      g.block(i * t.d, j * t.d, t.d, t.d) = t.T[i].adjoint() * t.T[j];
  return g;
}

Matrix z_row(const Vector& z, int d) {
  Matrix row = Matrix::Zero(d, z.size() * d);
  for (Eigen::Index i = 0; i < z.size(); ++i)
    row.middleCols(i * d, d) = z(i) * eye(d);
  return row;
}

Matrix z_dot_Tadj(const OperatorTuple& t, const Vector& z) {
  Matrix s = Matrix::Zero(t.d, t.d);
  for (int i = 0; i < t.n; ++i) s += z(i) * t.T[i].adjoint();
  return s;
}

Matrix T_dot_zadj(const OperatorTuple& t, const Vector& z) {
  Matrix s = Matrix::Zero(t.d, t.d);
  for (int i = 0; i < t.n; ++i) s += std::conj(z(i)) * t.T[i];
  return s;
}

DefectData defects(const OperatorTuple& t) {
  DefectData dd;
  dd.D_T = psd_sqrt(eye(t.n * t.d) - gram_TstarT(t), t.tol);
  dd.D_Tstar = psd_sqrt(eye(t.d) - sum_TT_adj(t), t.tol);
  dd.basis_DT = range_basis(dd.D_T, t.tol);
  dd.basis_DTstar = range_basis(dd.D_Tstar, t.tol);
  return dd;
}

Matrix apply_PT(const OperatorTuple& t, const Matrix& x) {
  if (x.rows() != t.d || x.cols() != t.d)
    throw dimension_mismatch("apply_PT needs a d x d argument");
  Matrix s = Matrix::Zero(t.d, t.d);
  for (const auto& m : t.T) s += m * x * m.adjoint();
  return s;
}

ATResult limit_AT(const OperatorTuple& t, double tol, int max_iter) {
  Matrix x = eye(t.d);
  double delta = 0.0;
  for (int k = 1; k <= max_iter; ++k) {
    Matrix next = apply_PT(t, x);
    delta = max_abs(Matrix(next - x));
    x = std::move(next);
    if (delta <= tol) return {hermitize(x), k};
  }
  throw Error("NoConvergence", "limit_AT stalled with step " +
                                   std::to_string(delta) + " after " +
                                   std::to_string(max_iter) + " iterations");
}

Subspace cnc_kernel(const OperatorTuple& t, const DefectData& dd) {
  Subspace k;
  k.ambient_dim = t.d;
  k.tol = t.tol;
  k.basis = complement_basis(dd.basis_DTstar);
  for (int step = 0; step <= t.d && k.dim() > 0; ++step) {
    // Cut K down to {h in K : T_i* h in K for all i}.
    Matrix off_k = eye(t.d) - k.projector();
    Matrix stacked(t.n * t.d, k.dim());
    for (int i = 0; i < t.n; ++i)
      stacked.middleRows(i * t.d, t.d) = off_k * t.T[i].adjoint() * k.basis;
    Subspace coords = null_space(stacked, t.tol);
    if (coords.dim() == k.dim()) return k;  // stabilized
    k.basis = k.basis * coords.basis;
  }
  return k;
}

ClassificationReport classify(const OperatorTuple& t, int max_iter) {
  ClassificationReport rep;
  ATResult at = limit_AT(t, t.tol, max_iter);
  rep.A_T = at.A_T;
  rep.iterations_to_converge = at.iterations;
  rep.is_pure = max_abs(rep.A_T) <= t.tol;
  rep.is_coisometric = max_abs(Matrix(eye(t.d) - sum_TT_adj(t))) <= t.tol;
  Matrix colgram = Matrix::Zero(t.d, t.d);
  for (const auto& m : t.T) colgram += m.adjoint() * m;
  rep.is_spherical_isometry = max_abs(Matrix(eye(t.d) - colgram)) <= t.tol;
  rep.cnc_kernel = cnc_kernel(t, defects(t));
  rep.is_cnc = rep.cnc_kernel.dim() == 0;
  return rep;
}

}  // namespace cct
