#include "cct/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <utility>

#include "cct/bounds.hpp"

namespace cct {

namespace {

// Minimum-norm pseudoinverse; singular values <= cut * max(sigma_max, 1)
// count as zero.
Matrix pinv(const Matrix& m, double cut, int* rank_out = nullptr) {
  if (m.rows() == 0 || m.cols() == 0) {
    if (rank_out) *rank_out = 0;
    return Matrix::Zero(m.cols(), m.rows());
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double floor = cut * std::max(sv.size() ? sv(0) : 0.0, 1.0);
  Matrix out = Matrix::Zero(m.cols(), m.rows());
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= floor) continue;
    out += svd.matrixV().col(i) * (1.0 / sv(i)) * svd.matrixU().col(i).adjoint();
    ++rank;
  }
  if (rank_out) *rank_out = rank;
  return out;
}

Matrix pinv_psd(const Matrix& m, double cut) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
  if (es.info() != Eigen::Success) {
    throw Error("EigenFailure", "self-adjoint eigendecomposition failed");
  }
  const auto& vals = es.eigenvalues();
  const double floor = cut * std::max(vals.size() ? vals(vals.size() - 1) : 0.0, 1.0);
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) <= floor) continue;
    out += es.eigenvectors().col(i) * (1.0 / vals(i)) *
           es.eigenvectors().col(i).adjoint();
  }
  return out;
}

int stacked_rank(const Matrix& m, double cut) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double floor = cut * std::max(sv.size() ? sv(0) : 0.0, 1.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > floor ? 1 : 0;
  return rank;
}

// Square root of a PSD limit together with its range. Eigenvalues at or
// below cut * max(lambda_max, 1) count as structural zeros and are removed
// from the root itself, so the root, its range, and every later rank
// decision agree about noise directions.
std::pair<Matrix, Subspace> psd_split(const Matrix& m, double cut, double tol) {
  if (m.size() == 0) {
    return {m, Subspace{static_cast<int>(m.rows()), Matrix(m.rows(), 0), tol}};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
  if (es.info() != Eigen::Success) {
    throw Error("EigenFailure", "self-adjoint eigendecomposition failed");
  }
  const int d = static_cast<int>(m.rows());
  const double top = d ? es.eigenvalues()(d - 1) : 0.0;
  const double floor = cut * std::max(top, 1.0);
  Eigen::VectorXd root = Eigen::VectorXd::Zero(d);
  int rank = 0;
  for (int i = 0; i < d; ++i) {
    if (es.eigenvalues()(i) <= floor) continue;
    root(i) = std::sqrt(es.eigenvalues()(i));
    ++rank;
  }
  Matrix half = hermitize(es.eigenvectors() * root.cast<Complex>().asDiagonal() *
                          es.eigenvectors().adjoint());
  // ascending eigenvalues: the retained directions are the rightmost columns
  return {std::move(half), Subspace{d, es.eigenvectors().rightCols(rank), tol}};
}

}  // namespace

RMap build_r(const OperatorTuple& t, int truncation_degree,
             const std::vector<Vector>& grid, int dim_cap) {
  ModelSpace ms = build_model(t, truncation_degree, grid, dim_cap);
  return RMap{std::move(ms.r), ms.span_rank, ms.fit_residual, ms.norm_residual,
              ms.connect_residual};
}

ModelSpace build_model(const OperatorTuple& t, int truncation_degree,
                       const std::vector<Vector>& grid, int dim_cap) {
  validate(t);
  if (grid.empty()) throw Error("BadInput", "model construction needs a sample grid");

  ModelSpace ms;
  ms.t = t;
  ms.defects = defects(t);
  const int rd = ms.defects.basis_DT.dim();
  const int rs = ms.defects.basis_DTstar.dim();
  ms.dom_space = build_space(t.n, truncation_degree, rd, dim_cap);
  ms.codom_space = build_space(t.n, truncation_degree, rs, dim_cap);
  ms.theta = theta_taylor(t, ms.defects, truncation_degree);
  ms.mult = multiplier_matrix(ms.theta, ms.dom_space, ms.codom_space);
  ms.j = dilation_j(t, ms.defects, ms.codom_space);

  const int dom_amb = ms.dom_space.ambient_dim();
  const int codom_amb = ms.codom_space.ambient_dim();

  // Delta^2 = I - M^*M has an eigenvalue cluster at 0 (the isometric
  // directions of the multiplier) that rounding smears to about eps; the
  // square root amplifies that to sqrt(eps), above any sensible relative
  // rank cut on Delta. So the split happens here on the defect scale:
  // directions whose defect sqrt(lambda) falls at or below kIsometryCut are
  // declared isometric and zeroed, and the retained eigenvectors double as
  // the range basis.
  if (dom_amb == 0) {
    ms.Delta = Matrix(0, 0);
    ms.ran_Delta = Subspace{0, Matrix(0, 0), t.tol};
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(
        Matrix::Identity(dom_amb, dom_amb) - ms.mult.adjoint() * ms.mult));
    if (es.info() != Eigen::Success) {
      throw Error("EigenFailure", "self-adjoint eigendecomposition failed");
    }
    Eigen::VectorXd dvals = Eigen::VectorXd::Zero(dom_amb);
    int rk_delta = 0;
    for (int i = 0; i < dom_amb; ++i) {
      const double dv = std::sqrt(std::max(es.eigenvalues()(i), 0.0));
      if (dv <= bounds::kIsometryCut) continue;
      dvals(i) = dv;
      ++rk_delta;
    }
    ms.Delta = hermitize(es.eigenvectors() *
                         dvals.cast<Complex>().asDiagonal() *
                         es.eigenvectors().adjoint());
    ms.ran_Delta =
        Subspace{dom_amb, es.eigenvectors().rightCols(rk_delta), t.tol};
  }

  // Defining samples:  r k_T(z) = -Delta (k(., z) (x) theta(z)^*), columns
  // grouped per grid point.
  const int G = static_cast<int>(grid.size());
  Matrix K(t.d, G * rs);
  Matrix R(dom_amb, G * rs);
  for (int s = 0; s < G; ++s) {
    const Vector& z = grid[s];
    K.middleCols(s * rs, rs) = eval_kT(t, ms.defects, z);
    if (rs == 0) continue;
    const Matrix th = eval_theta(t, ms.defects, z);
    const Matrix kv = kernel_vector(ms.dom_space, z);
    R.middleCols(s * rs, rs) = -(ms.Delta * kron(kv, th.adjoint()));
  }

  int span = 0;
  const Matrix Kp = pinv(K, bounds::kRankCut, &span);
  ms.span_rank = span;
  if (span < t.d) {
    throw Error("NotCNC",
                "sampled kernel vectors span a proper subspace of C^d");
  }
  ms.r = R * Kp;
  ms.fit_residual = max_abs(ms.r * K - R);
  ms.norm_residual =
      max_abs(ms.j.adjoint() * ms.j + ms.r.adjoint() * ms.r - eye(t.d));
  ms.connect_residual = max_abs(ms.r * ms.j.adjoint() + ms.Delta * ms.mult.adjoint());
  ms.r_delta_residual =
      max_abs(ms.r.adjoint() * ms.Delta + ms.j.adjoint() * ms.mult);

  const Matrix& W = ms.ran_Delta.basis;
  const int rk = ms.ran_Delta.dim();
  ms.V = Matrix(codom_amb + rk, t.d);
  ms.V.topRows(codom_amb) = ms.j;
  ms.V.bottomRows(rk) = W.adjoint() * ms.r;
  ms.U = Matrix(codom_amb + rk, dom_amb);
  ms.U.topRows(codom_amb) = ms.mult;
  ms.U.bottomRows(rk) = W.adjoint() * ms.Delta;

  const int sum_dim = codom_amb + rk;
  ms.partition_residual = max_abs(ms.V * ms.V.adjoint() + ms.U * ms.U.adjoint() -
                                  Matrix::Identity(sum_dim, sum_dim));
  Subspace ran_u = range_basis(ms.U, t.tol);
  ms.model_subspace = Subspace{sum_dim, complement_basis(ran_u), t.tol};
  return ms;
}

ModelTuple model_tuple(const ModelSpace& ms, double cert_tol) {
  const OperatorTuple& t = ms.t;
  const auto s_dom = shift_matrices(ms.dom_space);
  const auto s_codom = shift_matrices(ms.codom_space);
  const Matrix& W = ms.ran_Delta.basis;
  const int rk = ms.ran_Delta.dim();
  const int codom_amb = ms.codom_space.ambient_dim();
  const Matrix& H = ms.model_subspace.basis;
  const int m = ms.model_subspace.dim();
  const Matrix dpinv = pinv_psd(ms.Delta, bounds::kRankCut);

  ModelTuple out;
  const Matrix vt = H.adjoint() * ms.V;
  out.range_residual = max_abs(ms.V - H * vt);

  std::vector<Matrix> ops;
  ops.reserve(t.n);
  double resid = 0.0;
  for (int i = 0; i < t.n; ++i) {
    Matrix big = Matrix::Zero(codom_amb + rk, codom_amb + rk);
    big.topLeftCorner(codom_amb, codom_amb) = s_codom[i].adjoint();
    if (rk > 0) {
      big.bottomRightCorner(rk, rk) =
          W.adjoint() * dpinv * s_dom[i].adjoint() * ms.Delta * W;
    }
    const Matrix model_adj = H.adjoint() * big * H;
    resid = std::max(resid, max_abs(vt * t.T[i].adjoint() - model_adj * vt));
    ops.push_back(model_adj.adjoint());
  }
  out.intertwine_residual = resid;
  if (resid > cert_tol || out.range_residual > cert_tol) {
    throw Error("ResidualTooLarge",
                "model compression fails to intertwine within tolerance");
  }
  const double tuple_tol =
      std::max(t.tol, 50.0 * (resid + out.range_residual) + 1e-12);
  out.tuple = OperatorTuple{t.n, m, std::move(ops), tuple_tol};
  validate(out.tuple);
  return out;
}

std::vector<Matrix> mv_U_ops(const OperatorTuple& t, const Matrix& A_T) {
  const auto [a_half, ra] = psd_split(A_T, bounds::kRankCut, t.tol);
  const Matrix a_hat = ra.basis.adjoint() * a_half;  // coords of A_T^{1/2}
  const Matrix a_pinv = pinv(a_hat, bounds::kRankCut);
  std::vector<Matrix> out;
  out.reserve(t.n);
  for (int i = 0; i < t.n; ++i) {
    out.push_back(ra.basis.adjoint() * a_half * t.T[i].adjoint() * a_pinv);
  }
  return out;
}

MVForm mv_form(const ModelSpace& ms, double tol) {
  const OperatorTuple& t = ms.t;
  const ATResult at = limit_AT(t, 1e-14, 200000);

  MVForm f;
  auto split = psd_split(at.A_T, bounds::kRankCut, t.tol);
  f.A_half = std::move(split.first);
  const Subspace& ra = split.second;
  const int a = ra.dim();
  const Matrix a_hat = ra.basis.adjoint() * f.A_half;
  const Matrix& W = ms.ran_Delta.basis;
  const int rk = ms.ran_Delta.dim();
  const Matrix r_hat = W.adjoint() * ms.r;

  if (a == 0) {
    if (max_abs(r_hat.adjoint() * r_hat) > tol) {
      throw Error("GramMismatch", "A_T vanishes but the connecting map does not");
    }
    f.phi = Matrix::Zero(rk, 0);
    f.embed_residual = max_abs(r_hat);
  } else {
    auto phi = isometry_from_gram(a_hat, r_hat, tol);
    if (!phi) {
      throw Error("GramMismatch",
                  "|A_T^{1/2} h| and |r h| disagree beyond tolerance");
    }
    f.phi = *phi;
    f.embed_residual = max_abs(f.phi * a_hat - r_hat);
  }

  f.U_ops = mv_U_ops(t, at.A_T);

  // Fixed completion: the first operator absorbs the orthocomplement of
  // Ran(phi), the others vanish there; this keeps sum W_i^* W_i = I exact.
  const Matrix comp = complement_basis(Subspace{rk, range_basis(f.phi, t.tol).basis, t.tol});
  f.W_ops.clear();
  f.W_ops.reserve(t.n);
  Matrix sphere = Matrix::Zero(rk, rk);
  for (int i = 0; i < t.n; ++i) {
    Matrix w = f.phi * f.U_ops[i] * f.phi.adjoint();
    if (i == 0) w += comp * comp.adjoint();
    sphere += w.adjoint() * w;
    f.W_ops.push_back(std::move(w));
  }
  f.sphere_residual = max_abs(sphere - Matrix::Identity(rk, rk));

  const auto s_dom = shift_matrices(ms.dom_space);
  const auto s_codom = shift_matrices(ms.codom_space);
  const Matrix dpinv = pinv_psd(ms.Delta, bounds::kRankCut);
  const Matrix& H = ms.model_subspace.basis;
  const int codom_amb = ms.codom_space.ambient_dim();
  double resid = 0.0;
  for (int i = 0; i < t.n; ++i) {
    Matrix diff = Matrix::Zero(codom_amb + rk, codom_amb + rk);
    if (rk > 0) {
      diff.bottomRightCorner(rk, rk) =
          f.W_ops[i] - W.adjoint() * dpinv * s_dom[i].adjoint() * ms.Delta * W;
    }
    resid = std::max(resid, max_abs(H.adjoint() * diff * H));
  }
  f.compression_residual = resid;
  return f;
}

Matrix equivalence_from_coincidence(const OperatorTuple& t, const OperatorTuple& r,
                                    const CoincidenceWitness& witness,
                                    const std::vector<Vector>& grid, double tol) {
  validate(t);
  validate(r);
  if (t.n != r.n) throw dimension_mismatch("tuples act on different ball dimensions");
  if (grid.empty()) throw Error("BadInput", "empty sample grid");

  const DefectData dd_t = defects(t);
  const DefectData dd_r = defects(r);
  const int rs_t = dd_t.basis_DTstar.dim();
  const int rs_r = dd_r.basis_DTstar.dim();
  if (witness.tau_star.rows() != rs_r || witness.tau_star.cols() != rs_t) {
    throw dimension_mismatch("witness shape disagrees with the defect ranks");
  }

  const int G = static_cast<int>(grid.size());
  Matrix A(t.d, G * rs_r);
  Matrix B(r.d, G * rs_r);
  for (int s = 0; s < G; ++s) {
    A.middleCols(s * rs_r, rs_r) =
        eval_kT(t, dd_t, grid[s]) * witness.tau_star.adjoint();
    B.middleCols(s * rs_r, rs_r) = eval_kT(r, dd_r, grid[s]);
  }
  if (stacked_rank(A, bounds::kRankCut) < t.d || stacked_rank(B, bounds::kRankCut) < r.d) {
    throw Error("SpanDeficient",
                "kernel samples fail to span the underlying space");
  }

  auto u = isometry_from_gram(B, A, tol);
  if (!u) {
    throw Error("IntertwiningFailure",
                "witness fails the kernel Gram compatibility");
  }
  double resid = 0.0;
  for (int i = 0; i < t.n; ++i) {
    resid = std::max(resid, max_abs(*u * r.T[i] - t.T[i] * *u));
  }
  if (resid > tol) {
    throw Error("IntertwiningFailure", "intertwining certificate exceeds tolerance");
  }
  return *u;
}

}  // namespace cct
