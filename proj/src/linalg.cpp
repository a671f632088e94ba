#include "cct/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>

namespace cct {

double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix psd_sqrt(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw dimension_mismatch("psd_sqrt needs a square matrix");
  if (m.size() == 0) return m;
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(Matrix(m - m.adjoint())) > tol * scale)
    throw Error("NotHermitian", "psd_sqrt input is not Hermitian at tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
  Eigen::VectorXd ev = es.eigenvalues();
  const double band = tol * std::max(1.0, ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -band)
      throw Error("NotPSD", "eigenvalue " + std::to_string(ev(i)) + " below -tol");
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

Subspace range_basis(const Matrix& m, double tol) {
  Subspace s;
  s.ambient_dim = static_cast<int>(m.rows());
  s.tol = tol;
  if (m.size() == 0 || max_abs(m) == 0.0) {
    s.basis = Matrix(m.rows(), 0);
    return s;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * sv(0)) ++rank;
  s.basis = svd.matrixU().leftCols(rank);
  return s;
}

Matrix complement_basis(const Subspace& s) {
  const Eigen::Index n = s.ambient_dim;
  if (s.dim() == 0) return eye(n);
  Eigen::JacobiSVD<Matrix> svd(s.basis, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(n - s.dim());
}

Subspace null_space(const Matrix& m, double tol) {
  Subspace s;
  s.ambient_dim = static_cast<int>(m.cols());
  s.tol = tol;
  if (m.rows() == 0 || m.size() == 0) {
    s.basis = eye(m.cols());
    return s;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = tol * std::max(sv.size() ? sv(0) : 0.0, 1.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  s.basis = svd.matrixV().rightCols(m.cols() - rank);
  return s;
}

Subspace subspace_intersection(const std::vector<Subspace>& spaces,
                               int ambient_dim) {
  if (spaces.empty()) {
    if (ambient_dim < 0)
      throw dimension_mismatch(
          "intersection of an empty list needs an ambient dimension");
    Subspace s;
    s.ambient_dim = ambient_dim;
    s.basis = eye(ambient_dim);
    return s;
  }
  const int amb = spaces.front().ambient_dim;
  if (ambient_dim >= 0 && ambient_dim != amb)
    throw dimension_mismatch("ambient dimension disagrees with the list");
  double tol = spaces.front().tol;
  Matrix avg = Matrix::Zero(amb, amb);
  for (const auto& s : spaces) {
    if (s.ambient_dim != amb)
      throw dimension_mismatch("subspaces live in different ambient spaces");
    tol = std::min(tol, s.tol);
    avg += s.projector();
  }
  avg = hermitize(avg / double(spaces.size()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(avg);
  const auto& ev = es.eigenvalues();
  Subspace out;
  out.ambient_dim = amb;
  out.tol = tol;
  Eigen::Index first = ev.size();
  while (first > 0 && ev(first - 1) >= 1.0 - tol) --first;
  out.basis = es.eigenvectors().rightCols(ev.size() - first);
  return out;
}

std::optional<Matrix> isometry_from_gram(const Matrix& a, const Matrix& b,
                                         double tol) {
  if (a.cols() != b.cols())
    throw dimension_mismatch("isometry_from_gram: column counts differ");
  if (max_abs(Matrix(a.adjoint() * a - b.adjoint() * b)) > tol)
    return std::nullopt;
  if (a.size() == 0 || max_abs(a) == 0.0) {
    // Zero family: the zero partial isometry works iff b is zero too
    // (guaranteed by the Gram check up to tol).
    if (max_abs(b) > 10 * tol) return std::nullopt;
    return Matrix::Zero(b.rows(), a.rows());
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * sv(0)) ++rank;
  const Matrix ua = svd.matrixU().leftCols(rank);
  const Matrix va = svd.matrixV().leftCols(rank);
  Matrix x = b * va * sv.head(rank).cwiseInverse().asDiagonal();
  // Re-orthonormalize (polar factor) to wash out the tol-level Gram slack.
  Eigen::JacobiSVD<Matrix> pol(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  x = pol.matrixU() * pol.matrixV().adjoint();
  Matrix u = x * ua.adjoint();
  if (max_abs(Matrix(u * a - b)) > 10 * tol) return std::nullopt;
  return u;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace cct
