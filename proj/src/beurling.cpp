#include "cct/beurling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <utility>

#include "cct/grid.hpp"

namespace cct {

namespace {

void check_shape(const InvariantSubspace& m) {
  if (m.basis.ambient_dim != m.space.ambient_dim()) {
    throw Error("ShapeMismatch", "subspace ambient disagrees with the space");
  }
}

}  // namespace

double invariance_residual(const InvariantSubspace& m) {
  check_shape(m);
  const Matrix p = m.basis.projector();
  const int amb = m.space.ambient_dim();
  const Matrix q = Matrix::Identity(amb, amb) - p;
  double res = 0.0;
  for (const Matrix& s : shift_matrices(m.space)) {
    res = std::max(res, max_abs(q * s * p));
  }
  return res;
}

Subspace reducing_part(const InvariantSubspace& m) {
  check_shape(m);
  const int c = m.space.coeff_dim;
  const int count = m.space.index_count();
  const int amb = m.space.ambient_dim();
  if (c == 0) return Subspace{0, Matrix::Zero(0, 0), m.basis.tol};
  const Matrix q = Matrix::Identity(amb, amb) - m.basis.projector();
  // eta is admitted iff (I - P_M)(e_k (x) eta) = 0 for every monomial slot.
  Matrix constraints(static_cast<Eigen::Index>(count) * amb, c);
  for (int slot = 0; slot < count; ++slot) {
    constraints.middleRows(static_cast<Eigen::Index>(slot) * amb, amb) =
        q.middleCols(slot * c, c);
  }
  return null_space(constraints, m.basis.tol);
}

BLHDecomposition blh_decompose(const InvariantSubspace& m) {
  check_shape(m);
  const int count = m.space.index_count();
  BLHDecomposition out;
  out.reducing = reducing_part(m);

  const Matrix embedded = kron(Matrix::Identity(count, count), out.reducing.basis);
  const Matrix p_m = m.basis.projector();
  const Matrix p_full = embedded * embedded.adjoint();
  const Matrix rest_proj = p_m - p_full;
  Subspace y = range_basis(rest_proj, m.basis.tol);
  y.tol = m.basis.tol;
  out.rest = InvariantSubspace{m.space, y};
  out.split_residual = max_abs(rest_proj - y.projector());
  out.rest_invariance = invariance_residual(out.rest);
  out.rest_reducing_dim = reducing_part(out.rest).dim();
  return out;
}

bool is_purely_contractive(const TaylorCoefficients& theta, double tol) {
  const double n = op_norm(theta.at_zero());
  return n * n < 1.0 - tol;
}

bool is_purely_contractive(const SampledOperatorFunction& f, double tol) {
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    if (f.points[i].norm() < 1e-14) {
      const double n = op_norm(f.samples[i]);
      return n * n < 1.0 - tol;
    }
  }
  throw Error("BadInput", "sample grid does not contain the origin");
}

InnerCheck is_inner(const TaylorCoefficients& theta,
                    const TruncatedFockSpace& dom_space,
                    const TruncatedFockSpace& codom_space, double tol) {
  const int deg = theta.max_degree();
  if (dom_space.N < 2 * deg) {
    throw Error("ShapeMismatch",
                "projection test needs truncation degree >= 2 deg(theta)");
  }
  const Matrix mult = multiplier_matrix(theta, dom_space, codom_space);
  const Matrix gram = mult.adjoint() * mult;
  const int exact_degree = dom_space.N - 2 * deg;
  const int rows = dom_space.degree_count(exact_degree) * dom_space.coeff_dim;
  const Matrix diff = (gram * gram - gram).topLeftCorner(rows, rows);
  InnerCheck out;
  out.exact_degree = exact_degree;
  out.residual = max_abs(diff);
  out.inner = out.residual <= tol;
  return out;
}

InnerFromInvariant inner_from_invariant(const InvariantSubspace& y, double tol) {
  check_shape(y);
  const TruncatedFockSpace& space = y.space;
  const int c = space.coeff_dim;
  const int count = space.index_count();
  const int amb = space.ambient_dim();

  if (reducing_part(y).dim() > 0) {
    throw Error("HasReducingPart",
                "subspace contains a full slice H2 (x) eta");
  }

  InnerFromInvariant out;
  if (y.basis.dim() == 0) {
    // Nothing to represent: the zero function from a zero-dimensional domain,
    // with the untouched shift tuple as the model.
    out.theta = TaylorCoefficients{space.n, 0, c, {}, {}, {}};
    out.tuple = OperatorTuple{space.n, amb, shift_matrices(space), y.basis.tol};
    out.tau = Matrix::Zero(c, 0);
    out.degenerate = true;
    return out;
  }

  const auto shifts = shift_matrices(space);
  const Matrix k = complement_basis(y.basis);  // amb x m
  const int m = static_cast<int>(k.cols());
  std::vector<Matrix> comp;
  comp.reserve(space.n);
  for (const Matrix& s : shifts) comp.push_back(k.adjoint() * s * k);
  OperatorTuple t{space.n, m, std::move(comp), std::max(y.basis.tol, 1e-12)};
  validate(t);

  const DefectData dd = defects(t);
  const int rs = dd.basis_DTstar.dim();
  const TaylorCoefficients tc = theta_taylor(t, dd, space.N);
  const TruncatedFockSpace codom = build_space(space.n, space.N, rs);
  const Matrix j = dilation_j(t, dd, codom);

  // Constant tau from the block relation tau (j h)_k = h_k: stack the blocks
  // of j against the blocks of the embedding of the complement.
  Matrix a(rs, static_cast<Eigen::Index>(count) * m);
  Matrix b(c, static_cast<Eigen::Index>(count) * m);
  for (int slot = 0; slot < count; ++slot) {
    a.middleCols(static_cast<Eigen::Index>(slot) * m, m) =
        j.middleRows(slot * rs, rs);
    b.middleCols(static_cast<Eigen::Index>(slot) * m, m) =
        k.middleRows(slot * c, c);
  }
  const auto tau = isometry_from_gram(a, b, tol);
  if (!tau) {
    throw Error("CertificationFailure",
                "dilation blocks are not isometrically compatible");
  }
  out.tau = *tau;

  out.theta = TaylorCoefficients{space.n, tc.domain_dim, c,
                                 tc.degrees,  {},          tc.pos};
  out.theta.coeffs.reserve(tc.coeffs.size());
  for (const Matrix& cb : tc.coeffs) out.theta.coeffs.push_back(out.tau * cb);

  const TruncatedFockSpace dom = build_space(space.n, space.N, tc.domain_dim);
  const Matrix mult = multiplier_matrix(out.theta, dom, space);
  out.range_residual = max_abs(y.basis.projector() - mult * mult.adjoint());
  if (out.range_residual > tol) {
    throw Error("CertificationFailure",
                "range of the recovered inner function misses the subspace");
  }
  out.tuple = std::move(t);
  return out;
}

TupleFromInner tuple_from_inner(const TaylorCoefficients& theta,
                                int truncation_degree, double tol,
                                int dim_cap) {
  const int deg = theta.max_degree();
  if (truncation_degree < std::max(deg + 4, 2 * deg)) {
    throw Error("BadInput", "truncation margin too small for certification");
  }
  // A constant unitary maps the whole space onto itself: the quotient is
  // zero dimensional and there is no purely contractive part to realize.
  if (deg == 0 && theta.codomain_dim == theta.domain_dim) {
    const Matrix u = theta.at_zero();
    if (max_abs(Matrix(u.adjoint() * u - eye(theta.domain_dim))) <=
        std::max(tol, 1e-12)) {
      TupleFromInner out;
      out.tuple = OperatorTuple{theta.n, 0, std::vector<Matrix>(theta.n), tol};
      out.degenerate = true;
      return out;
    }
  }
  if (!is_purely_contractive(theta, tol)) {
    throw Error("NotPurelyContractive",
                "theta(0) has a unit-norm vector in its initial space");
  }
  const TruncatedFockSpace dom =
      build_space(theta.n, truncation_degree, theta.domain_dim, dim_cap);
  const TruncatedFockSpace codom =
      build_space(theta.n, truncation_degree, theta.codomain_dim, dim_cap);
  const InnerCheck ic = is_inner(theta, dom, codom, std::max(tol, 1e-10));
  if (!ic.inner) {
    throw Error("NotInner", "multiplier fails the partial-isometry test");
  }

  const Matrix mult = multiplier_matrix(theta, dom, codom);
  const Subspace ran = range_basis(mult, tol);
  const Matrix k = complement_basis(ran);
  const int m = static_cast<int>(k.cols());

  TupleFromInner out;
  if (m == 0) {
    out.tuple = OperatorTuple{theta.n, 0, std::vector<Matrix>(theta.n), tol};
    out.degenerate = true;
    return out;
  }
  const auto shifts = shift_matrices(codom);
  std::vector<Matrix> comp;
  comp.reserve(theta.n);
  for (const Matrix& s : shifts) comp.push_back(k.adjoint() * s * k);
  out.tuple = OperatorTuple{theta.n, m, std::move(comp), std::max(tol, 1e-12)};
  validate(out.tuple);

  const DefectData dd = defects(out.tuple);
  const std::vector<Vector> pts = ball_grid(theta.n, 24, 0.6, 0x62657572ULL);
  SampledOperatorFunction f;
  f.domain_dim = theta.domain_dim;
  f.codomain_dim = theta.codomain_dim;
  f.points = pts;
  f.samples.reserve(pts.size());
  for (const auto& z : pts) f.samples.push_back(eval_taylor(theta, z));
  const SampledOperatorFunction g = sample_theta(out.tuple, dd, pts);
  out.coincidence = decide_weak_coincidence(f, g, std::max(tol, 1e-9));
  if (!out.coincidence.ok()) {
    throw Error("CertificationFailure",
                "recovered tuple does not reproduce theta up to coincidence");
  }
  return out;
}

}  // namespace cct
