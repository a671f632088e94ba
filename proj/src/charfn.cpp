#include "cct/charfn.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace cct {

namespace {

void check_in_ball(const Vector& z) {
  if (z.norm() >= 1.0) throw Error("OutsideBall", "sample point has |z| >= 1");
}

Matrix resolvent_solve(const Matrix& a, const Matrix& rhs) {
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible())
    throw Error("SingularResolvent", "ball resolvent is numerically singular");
  return lu.solve(rhs);
}

Complex pair_ip(const Vector& w, const Vector& z) {
  Complex s(0);
  for (Eigen::Index i = 0; i < w.size(); ++i) s += w(i) * std::conj(z(i));
  return s;
}

}  // namespace

Matrix eval_theta(const OperatorTuple& t, const DefectData& dd,
                  const Vector& z) {
  check_in_ball(z);
  if (z.size() != t.n) throw dimension_mismatch("point dimension != n");
  const Matrix zt = z_dot_Tadj(t, z);        // Z T*
  const Matrix zd = z_row(z, t.d) * dd.D_T;  // Z D_T, d x nd
  const Matrix amb =
      -row_op(t) + dd.D_Tstar * resolvent_solve(eye(t.d) - zt, zd);
  Matrix coords = dd.basis_DTstar.basis.adjoint() * amb * dd.basis_DT.basis;
  if (coords.size() > 0 && op_norm(coords) > 1.0 + 10 * t.tol)
    throw Error("CertificationFailure",
                "characteristic function sample exceeds unit norm");
  return coords;
}

Matrix eval_kT(const OperatorTuple& t, const DefectData& dd, const Vector& z) {
  check_in_ball(z);
  if (z.size() != t.n) throw dimension_mismatch("point dimension != n");
  const Matrix tz = T_dot_zadj(t, z);  // T Z*
  return resolvent_solve(eye(t.d) - tz,
                         Matrix(dd.D_Tstar * dd.basis_DTstar.basis));
}

double check_theta_identity(const OperatorTuple& t, const DefectData& dd,
                            const Vector& z, const Vector& w) {
  const Matrix th_z = eval_theta(t, dd, z);
  const Matrix th_w = eval_theta(t, dd, w);
  const Eigen::Index r = dd.basis_DTstar.dim();
  const Matrix lhs = eye(r) - th_w * th_z.adjoint();
  const Matrix x1 = resolvent_solve(eye(t.d) - T_dot_zadj(t, z), dd.D_Tstar);
  const Matrix x2 = resolvent_solve(eye(t.d) - z_dot_Tadj(t, w), x1);
  const Matrix rhs = (Complex(1.0) - pair_ip(w, z)) *
                     (dd.basis_DTstar.basis.adjoint() * dd.D_Tstar * x2 *
                      dd.basis_DTstar.basis);
  return max_abs(Matrix(lhs - rhs));
}

double check_kernel_identity(const OperatorTuple& t, const DefectData& dd,
                             const Vector& z, const Vector& w) {
  const Matrix th_z = eval_theta(t, dd, z);
  const Matrix th_w = eval_theta(t, dd, w);
  const Eigen::Index r = dd.basis_DTstar.dim();
  const Matrix lhs =
      (eye(r) - th_w * th_z.adjoint()) / (Complex(1.0) - pair_ip(w, z));
  const Matrix rhs = eval_kT(t, dd, w).adjoint() * eval_kT(t, dd, z);
  return max_abs(Matrix(lhs - rhs));
}

SampledOperatorFunction sample_theta(const OperatorTuple& t,
                                     const DefectData& dd,
                                     const std::vector<Vector>& grid) {
  SampledOperatorFunction f;
  f.domain_dim = dd.basis_DT.dim();
  f.codomain_dim = dd.basis_DTstar.dim();
  f.points = grid;
  f.samples.reserve(grid.size());
  for (const auto& z : grid) f.samples.push_back(eval_theta(t, dd, z));
  return f;
}

Subspace support(const SampledOperatorFunction& f, double tol) {
  if (f.samples.empty())
    throw Error("EmptySamples", "support needs at least one sample");
  Matrix stacked(f.domain_dim,
                 static_cast<Eigen::Index>(f.samples.size()) * f.codomain_dim);
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    stacked.middleCols(static_cast<Eigen::Index>(i) * f.codomain_dim,
                       f.codomain_dim) = f.samples[i].adjoint();
  return range_basis(stacked, tol);
}

std::string to_string(NoSolutionReason r) {
  switch (r) {
    case NoSolutionReason::None: return "None";
    case NoSolutionReason::CodomainMismatch: return "CodomainMismatch";
    case NoSolutionReason::NoUnitaryWitness: return "NoUnitaryWitness";
    case NoSolutionReason::WeakFailure: return "WeakFailure";
    case NoSolutionReason::ComplementMismatch: return "ComplementMismatch";
    case NoSolutionReason::ResidualTooLarge: return "ResidualTooLarge";
  }
  return "Unknown";
}

namespace {

void require_same_grid(const SampledOperatorFunction& f,
                       const SampledOperatorFunction& g) {
  if (f.points.size() != g.points.size())
    throw Error("GridMismatch", "sample grids have different sizes");
  for (std::size_t i = 0; i < f.points.size(); ++i)
    if (f.points[i].size() != g.points[i].size() ||
        max_abs(Vector(f.points[i] - g.points[i])) > 0)
      throw Error("GridMismatch",
                  "sample grids differ at sample " + std::to_string(i));
}

// Gram pair family (A_ij, B_ij) = (f_i f_j*, g_i g_j*), reduced to a spanning
// subset by Gram-Schmidt in the direct sum so the intertwiner system stays
// small however many grid pairs there are. The solution set of
// X A - B X = 0 over the reduced family equals the one over all pairs.
struct PairFamily {
  std::vector<Matrix> a, b;
};

PairFamily span_reduced_pairs(const SampledOperatorFunction& f,
                              const SampledOperatorFunction& g) {
  PairFamily fam;
  std::vector<Eigen::VectorXcd> basis;
  const Eigen::Index c = f.codomain_dim;
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    for (std::size_t j = 0; j < f.samples.size(); ++j) {
      Matrix a = f.samples[i] * f.samples[j].adjoint();
      Matrix b = g.samples[i] * g.samples[j].adjoint();
      Eigen::VectorXcd v(2 * c * c);
      v << Eigen::Map<const Eigen::VectorXcd>(a.data(), c * c),
          Eigen::Map<const Eigen::VectorXcd>(b.data(), c * c);
      const double scale = v.norm();
      if (scale < 1e-300) continue;
      Eigen::VectorXcd w = v;
      for (const auto& e : basis) w -= e.dot(w) * e;
      for (const auto& e : basis) w -= e.dot(w) * e;  // second pass
      if (w.norm() > 1e-10 * std::max(scale, 1.0)) {
        basis.push_back(w.normalized());
        fam.a.push_back(std::move(a));
        fam.b.push_back(std::move(b));
      }
    }
  return fam;
}

}  // namespace

CoincidenceResult decide_weak_coincidence(const SampledOperatorFunction& f,
                                          const SampledOperatorFunction& g,
                                          double tol) {
  require_same_grid(f, g);
  CoincidenceResult res;
  if (f.codomain_dim != g.codomain_dim) {
    res.reason = NoSolutionReason::CodomainMismatch;
    res.residual = std::abs(double(f.codomain_dim - g.codomain_dim));
    return res;
  }
  const Eigen::Index c = f.codomain_dim;
  if (c == 0) {
    res.witness = CoincidenceWitness{std::nullopt, Matrix(0, 0),
                                     CoincidenceKind::Weak, 0.0};
    return res;
  }

  const PairFamily fam = span_reduced_pairs(f, g);

  auto verify = [&](const Matrix& u) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); ++i)
      for (std::size_t j = 0; j < f.samples.size(); ++j) {
        const Matrix lhs = g.samples[i] * g.samples[j].adjoint();
        const Matrix rhs =
            u * f.samples[i] * f.samples[j].adjoint() * u.adjoint();
        worst = std::max(worst, max_abs(Matrix(lhs - rhs)));
      }
    return worst;
  };

  if (fam.a.empty()) {
    // Both functions vanish identically on the grid.
    Matrix id = eye(c);
    res.witness =
        CoincidenceWitness{std::nullopt, id, CoincidenceKind::Weak, verify(id)};
    res.residual = res.witness->residual;
    return res;
  }

  // vec(X A) = (A^T kron I) vec(X), vec(B X) = (I kron B) vec(X).
  const Eigen::Index cc = c * c;
  Matrix sys(static_cast<Eigen::Index>(fam.a.size()) * cc, cc);
  for (std::size_t k = 0; k < fam.a.size(); ++k)
    sys.middleRows(static_cast<Eigen::Index>(k) * cc, cc) =
        kron(fam.a[k].transpose(), eye(c)) - kron(eye(c), fam.b[k]);

  const Subspace w = null_space(sys, std::max(tol, 1e-12));
  if (w.dim() == 0) {
    res.reason = NoSolutionReason::NoUnitaryWitness;
    res.residual = 1.0;
    return res;
  }

  double best = 1e300;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Rng rng(0x0c0ffee0ULL + std::uint64_t(attempt));
    Eigen::VectorXcd coef(w.dim());
    for (int i = 0; i < w.dim(); ++i) coef(i) = rng.gaussian();
    Eigen::VectorXcd xv = w.basis * coef;
    Matrix x = Eigen::Map<Matrix>(xv.data(), c, c);
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * sv(0)) continue;  // singular pick, retry
    const Matrix cand = svd.matrixU() * svd.matrixV().adjoint();
    const double r = verify(cand);
    best = std::min(best, r);
    if (r <= tol) {
      res.witness =
          CoincidenceWitness{std::nullopt, cand, CoincidenceKind::Weak, r};
      res.residual = r;
      return res;
    }
  }
  res.reason = NoSolutionReason::NoUnitaryWitness;
  res.residual = best;
  return res;
}

CoincidenceResult decide_coincidence(const SampledOperatorFunction& f,
                                     const SampledOperatorFunction& g,
                                     double tol) {
  CoincidenceResult weak = decide_weak_coincidence(f, g, tol);
  if (!weak.ok()) {
    if (weak.reason == NoSolutionReason::NoUnitaryWitness)
      weak.reason = NoSolutionReason::WeakFailure;
    return weak;
  }
  const Matrix tau_star = weak.witness->tau_star;

  const Subspace supp_f = support(f, tol);
  const Subspace supp_g = support(g, tol);
  CoincidenceResult res;
  res.residual = weak.witness->residual;
  if (f.domain_dim - supp_f.dim() != g.domain_dim - supp_g.dim()) {
    res.reason = NoSolutionReason::ComplementMismatch;
    return res;
  }

  const Eigen::Index c = f.codomain_dim;
  const Eigen::Index m = static_cast<Eigen::Index>(f.samples.size());
  Matrix a(f.domain_dim, m * c), b(g.domain_dim, m * c);
  for (Eigen::Index i = 0; i < m; ++i) {
    a.middleCols(i * c, c) = f.samples[i].adjoint() * tau_star.adjoint();
    b.middleCols(i * c, c) = g.samples[i].adjoint();
  }
  const double tol_eff = std::max(tol, 10 * weak.witness->residual);
  const auto u0 = isometry_from_gram(a, b, tol_eff);
  if (!u0) {
    res.reason = NoSolutionReason::ResidualTooLarge;
    return res;
  }
  const Matrix tau =
      *u0 + complement_basis(supp_g) * complement_basis(supp_f).adjoint();

  double worst = weak.witness->residual;
  for (Eigen::Index i = 0; i < m; ++i)
    worst = std::max(
        worst, max_abs(Matrix(g.samples[i] * tau - tau_star * f.samples[i])));
  if (worst > 10 * tol_eff) {
    res.reason = NoSolutionReason::ResidualTooLarge;
    res.residual = worst;
    return res;
  }
  res.witness =
      CoincidenceWitness{tau, tau_star, CoincidenceKind::Strong, worst};
  res.residual = worst;
  return res;
}

}  // namespace cct
