#include "cct/mobius.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace cct {

namespace {

Complex ip(const Vector& x, const Vector& y) {
  Complex s(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) s += x(i) * std::conj(y(i));
  return s;
}

Matrix inv(const Matrix& m) {
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible())
    throw Error("SingularResolvent", "I - T A* is numerically singular");
  return lu.inverse();
}

// T_a before the unitary u is applied.
std::vector<Matrix> base_transform(const OperatorTuple& t, const MobiusMap& m) {
  const int n = t.n, d = t.d;
  std::vector<Matrix> out(n);
  const double a2 = m.a.squaredNorm();
  if (a2 == 0.0) {
    for (int j = 0; j < n; ++j) out[j] = -t.T[j];
    return out;
  }
  Matrix mu = Matrix::Zero(d, d);  // T A* = sum conj(a_i) T_i
  for (int i = 0; i < n; ++i) mu += std::conj(m.a(i)) * t.T[i];
  const Matrix r = inv(eye(d) - mu);
  for (int j = 0; j < n; ++j)
    out[j] = r * (m.a(j) * eye(d) - (m.a(j) * (1.0 - m.s_a) / a2) * mu -
                  m.s_a * t.T[j]);
  return out;
}

}  // namespace

MobiusMap make_mobius(const Vector& a, const Matrix& u, double tol) {
  const int n = static_cast<int>(a.size());
  if (u.rows() != n || u.cols() != n)
    throw dimension_mismatch("mobius unitary must be n x n");
  if (a.norm() >= 1.0)
    throw Error("OutsideBall", "mobius center must satisfy |a| < 1");
  if (max_abs(Matrix(u.adjoint() * u - eye(n))) > tol)
    throw Error("NotUnitary", "mobius matrix u is not unitary at tolerance");
  MobiusMap m;
  m.a = a;
  m.u = u;
  const double a2 = a.squaredNorm();
  if (a2 == 0.0) {
    m.s_a = 1.0;
    m.P_a = Matrix::Zero(n, n);
    m.Q_a = eye(n);
  } else {
    m.s_a = std::sqrt(1.0 - a2);
    m.P_a = (a * a.adjoint()) / a2;
    m.Q_a = eye(n) - m.P_a;
  }
  return m;
}

Vector phi(const MobiusMap& m, const Vector& z) {
  if (z.size() != m.a.size()) throw dimension_mismatch("point dimension");
  const Complex denom = Complex(1.0) - ip(z, m.a);
  Vector w = (m.a - m.P_a * z - m.s_a * (m.Q_a * z)) / denom;
  return m.u * w;
}

OperatorTuple transform_tuple(const OperatorTuple& t, const MobiusMap& m) {
  if (m.a.size() != t.n) throw dimension_mismatch("mobius center dimension");
  const std::vector<Matrix> base = base_transform(t, m);
  OperatorTuple out;
  out.n = t.n;
  out.d = t.d;
  out.tol = t.tol;
  out.T.resize(t.n);
  for (int i = 0; i < t.n; ++i) {
    out.T[i] = Matrix::Zero(t.d, t.d);
    for (int j = 0; j < t.n; ++j) out.T[i] += m.u(i, j) * base[j];
  }
  validate(out);
  return out;
}

double check_defect_identity(const OperatorTuple& t, const MobiusMap& m) {
  const std::vector<Matrix> base = base_transform(t, m);
  OperatorTuple ta{t.n, t.d, base, t.tol};
  const double a2 = m.a.squaredNorm();
  Matrix mu = Matrix::Zero(t.d, t.d);
  for (int i = 0; i < t.n; ++i) mu += std::conj(m.a(i)) * t.T[i];
  const Matrix r = inv(eye(t.d) - mu);
  const Matrix lhs = eye(t.d) - sum_TT_adj(ta);
  const Matrix rhs =
      (1.0 - a2) * r * (eye(t.d) - sum_TT_adj(t)) * r.adjoint();
  return max_abs(Matrix(lhs - rhs));
}

DefectUnitary defect_unitary(const OperatorTuple& t, const MobiusMap& m) {
  const std::vector<Matrix> base = base_transform(t, m);
  OperatorTuple ta{t.n, t.d, base, t.tol};
  Matrix mu = Matrix::Zero(t.d, t.d);
  for (int i = 0; i < t.n; ++i) mu += std::conj(m.a(i)) * t.T[i];
  DefectUnitary du;
  du.S = m.s_a * inv(eye(t.d) - mu);
  const Matrix d_ta_star = psd_sqrt(eye(t.d) - sum_TT_adj(ta), t.tol);
  const Matrix d_t_star = psd_sqrt(eye(t.d) - sum_TT_adj(t), t.tol);
  const Matrix target = d_t_star * du.S.adjoint();
  const auto u = isometry_from_gram(d_ta_star, target, 100 * t.tol);
  if (!u)
    throw Error("CertificationFailure",
                "defect Gram mismatch in the ball-transform witness");
  du.U = *u;
  du.residual = max_abs(Matrix(du.U * d_ta_star - target));
  return du;
}

TransformationLawReport verify_transformation_law(
    const OperatorTuple& t, const MobiusMap& m,
    const std::vector<Vector>& grid) {
  TransformationLawReport rep;
  const OperatorTuple s = transform_tuple(t, m);  // u(T_a)
  const DefectData dd_t = defects(t);
  const DefectData dd_s = defects(s);

  // F(z) = theta_T(phi_a(u* z)), G(z) = theta of u(T_a), on the same grid.
  const MobiusMap plain = make_mobius(m.a, eye(t.n));
  SampledOperatorFunction f, g;
  f.domain_dim = dd_t.basis_DT.dim();
  f.codomain_dim = dd_t.basis_DTstar.dim();
  f.points = grid;
  for (const auto& z : grid)
    f.samples.push_back(eval_theta(t, dd_t, phi(plain, Vector(m.u.adjoint() * z))));
  g = sample_theta(s, dd_s, grid);

  // Defect-unitary witness in defect coordinates: G-pairs = U* F-pairs U.
  const DefectUnitary du = defect_unitary(t, plain);
  const Matrix u_hat = dd_t.basis_DTstar.basis.adjoint() * du.U *
                       dd_s.basis_DTstar.basis;
  const Matrix tau = u_hat.adjoint();
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Matrix lhs = g.samples[i] * g.samples[j].adjoint();
      const Matrix rhs =
          tau * f.samples[i] * f.samples[j].adjoint() * tau.adjoint();
      rep.witness_residual =
          std::max(rep.witness_residual, max_abs(Matrix(lhs - rhs)));
    }

  // Independent decision, no witness provided.
  const CoincidenceResult dec = decide_weak_coincidence(f, g, 1e-8);
  rep.decider_found = dec.ok();
  rep.decider_residual = dec.residual;

  // Resolvent identities for the plain (u = I) transform T_a.
  const std::vector<Matrix> base = base_transform(t, plain);
  const OperatorTuple ta{t.n, t.d, base, t.tol};
  Matrix mu = Matrix::Zero(t.d, t.d);
  for (int i = 0; i < t.n; ++i) mu += std::conj(m.a(i)) * t.T[i];
  const Matrix r_ta = inv(eye(t.d) - mu);          // (I - T A*)^{-1}
  const Matrix r_at = inv(eye(t.d) - mu.adjoint());  // (I - A T*)^{-1}
  for (const auto& w : grid) {
    const Vector wp = phi(plain, w);
    const Matrix lhs1 =
        inv(eye(t.d) - z_dot_Tadj(t, wp)) / (Complex(1.0) - ip(w, m.a));
    const Matrix rhs1 = r_at * inv(eye(t.d) - z_dot_Tadj(ta, w));
    rep.resolvent_residual =
        std::max(rep.resolvent_residual, max_abs(Matrix(lhs1 - rhs1)));
    const Matrix lhs2 =
        inv(eye(t.d) - T_dot_zadj(t, wp)) / (Complex(1.0) - ip(m.a, w));
    const Matrix rhs2 = inv(eye(t.d) - T_dot_zadj(ta, w)) * r_ta;
    rep.resolvent_residual =
        std::max(rep.resolvent_residual, max_abs(Matrix(lhs2 - rhs2)));
  }

  // Scalar identity tying the automorphism to the ball kernel.
  const double a2 = m.a.squaredNorm();
  for (const auto& w : grid)
    for (const auto& z : grid) {
      const Vector pw = phi(plain, w), pz = phi(plain, z);
      const Complex lhs = Complex(1.0) - ip(pw, pz);
      const Complex rhs = (1.0 - a2) * (Complex(1.0) - ip(w, z)) /
                          ((Complex(1.0) - ip(w, m.a)) *
                           (Complex(1.0) - ip(m.a, z)));
      rep.scalar_residual = std::max(rep.scalar_residual, std::abs(lhs - rhs));
    }

  rep.max_residual = std::max({rep.witness_residual, rep.decider_residual,
                               rep.resolvent_residual, rep.scalar_residual});
  return rep;
}

}  // namespace cct
