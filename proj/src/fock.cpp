#include "cct/fock.hpp"

#include <algorithm>
#include <cmath>

#include "cct/charfn.hpp"
#include "cct/grid.hpp"

namespace cct {

namespace {

void enumerate_degree(int vars_left, int deg_left, MultiIndex& prefix,
                      std::vector<MultiIndex>& out) {
  if (vars_left == 1) {
    prefix.push_back(deg_left);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = deg_left; first >= 0; --first) {
    prefix.push_back(first);
    enumerate_degree(vars_left - 1, deg_left - first, prefix, out);
    prefix.pop_back();
  }
}

Complex monomial(const Vector& z, const MultiIndex& k) {
  Complex p(1.0);
  for (std::size_t i = 0; i < k.size(); ++i)
    for (int q = 0; q < k[i]; ++q) p *= z(static_cast<Eigen::Index>(i));
  return p;
}

// T*^k for every index in the list, using that each index past the first has
// a predecessor (index minus a unit vector) earlier in the graded listing.
std::vector<Matrix> adjoint_powers(const OperatorTuple& t,
                                   const std::vector<MultiIndex>& indices,
                                   const std::map<MultiIndex, int>& pos) {
  std::vector<Matrix> pow(indices.size());
  for (std::size_t p = 0; p < indices.size(); ++p) {
    const MultiIndex& k = indices[p];
    if (total_degree(k) == 0) {
      pow[p] = eye(t.d);
      continue;
    }
    int j = 0;
    while (k[j] == 0) ++j;
    MultiIndex parent = k;
    --parent[j];
    pow[p] = t.T[j].adjoint() * pow[pos.at(parent)];
  }
  return pow;
}

}  // namespace

int total_degree(const MultiIndex& k) {
  int s = 0;
  for (int v : k) s += v;
  return s;
}

double gamma_weight(const MultiIndex& k) {
  // Product of binomials C(k_1+...+k_i, k_i), each built multiplicatively.
  double g = 1.0;
  int seen = 0;
  for (int v : k) {
    for (int q = 1; q <= v; ++q) g *= double(seen + q) / double(q);
    seen += v;
  }
  return g;
}

int TruncatedFockSpace::degree_count(int deg) const {
  int c = 0;
  while (c < index_count() && total_degree(indices[c]) <= deg) ++c;
  return c;
}

TruncatedFockSpace build_space(int n, int N, int coeff_dim, int dim_cap) {
  if (n < 1 || N < 0 || coeff_dim < 0)
    throw dimension_mismatch("space parameters out of range");
  double count = 1.0;  // C(N+n, n)
  for (int i = 1; i <= n; ++i) count *= double(N + i) / double(i);
  if (count * std::max(coeff_dim, 1) > double(dim_cap))
    throw Error("SizeOverflow",
                "truncated space needs " +
                    std::to_string(static_cast<long long>(count)) + " x " +
                    std::to_string(coeff_dim) +
                    " basis vectors, cap is " + std::to_string(dim_cap));
  TruncatedFockSpace s;
  s.n = n;
  s.N = N;
  s.coeff_dim = coeff_dim;
  MultiIndex prefix;
  for (int deg = 0; deg <= N; ++deg)
    enumerate_degree(n, deg, prefix, s.indices);
  s.gamma.reserve(s.indices.size());
  for (std::size_t p = 0; p < s.indices.size(); ++p) {
    s.gamma.push_back(gamma_weight(s.indices[p]));
    s.pos[s.indices[p]] = static_cast<int>(p);
  }
  return s;
}

std::vector<Matrix> shift_matrices(const TruncatedFockSpace& s) {
  const int c = s.coeff_dim, dim = s.ambient_dim();
  std::vector<Matrix> out(s.n, Matrix::Zero(dim, dim));
  for (int p = 0; p < s.index_count(); ++p) {
    if (total_degree(s.indices[p]) == s.N) continue;
    for (int i = 0; i < s.n; ++i) {
      MultiIndex k = s.indices[p];
      ++k[i];
      const int q = s.pos.at(k);
      const double ratio = std::sqrt(s.gamma[p] / s.gamma[q]);
      out[i].block(q * c, p * c, c, c) = ratio * eye(c);
    }
  }
  return out;
}

Vector kernel_vector(const TruncatedFockSpace& s, const Vector& z) {
  if (z.size() != s.n) throw dimension_mismatch("point dimension != n");
  Vector v(s.index_count());
  for (int p = 0; p < s.index_count(); ++p)
    v(p) = std::sqrt(s.gamma[p]) * std::conj(monomial(z, s.indices[p]));
  return v;
}

Vector evaluate(const TruncatedFockSpace& s, const Vector& coeffs,
                const Vector& z) {
  if (coeffs.size() != s.ambient_dim())
    throw dimension_mismatch("coefficient vector length");
  if (z.size() != s.n) throw dimension_mismatch("point dimension != n");
  Vector val = Vector::Zero(s.coeff_dim);
  for (int p = 0; p < s.index_count(); ++p)
    val += std::sqrt(s.gamma[p]) * monomial(z, s.indices[p]) *
           coeffs.segment(p * s.coeff_dim, s.coeff_dim);
  return val;
}

int TaylorCoefficients::max_degree() const {
  int m = 0;
  for (const auto& k : degrees) m = std::max(m, total_degree(k));
  return m;
}

Matrix TaylorCoefficients::coeff(const MultiIndex& beta) const {
  const auto it = pos.find(beta);
  if (it == pos.end()) return Matrix::Zero(codomain_dim, domain_dim);
  return coeffs[it->second];
}

Matrix TaylorCoefficients::at_zero() const {
  return coeff(MultiIndex(n, 0));
}

Matrix eval_taylor(const TaylorCoefficients& tc, const Vector& z) {
  if (z.size() != tc.n) throw dimension_mismatch("point dimension");
  Matrix val = Matrix::Zero(tc.codomain_dim, tc.domain_dim);
  for (std::size_t q = 0; q < tc.degrees.size(); ++q)
    val += monomial(z, tc.degrees[q]) * tc.coeffs[q];
  return val;
}

TaylorCoefficients theta_taylor(const OperatorTuple& t, const DefectData& dd,
                                int max_degree) {
  const int d = t.d;
  const Matrix& bd = dd.basis_DT.basis;        // nd x r
  const Matrix& bs = dd.basis_DTstar.basis;    // d x r_*
  const TruncatedFockSpace scalar = build_space(t.n, max_degree, 1, 1 << 20);
  const std::vector<Matrix> pow = adjoint_powers(t, scalar.indices, scalar.pos);

  TaylorCoefficients tc;
  tc.n = t.n;
  tc.domain_dim = dd.basis_DT.dim();
  tc.codomain_dim = dd.basis_DTstar.dim();
  for (int p = 0; p < scalar.index_count(); ++p) {
    const MultiIndex& beta = scalar.indices[p];
    Matrix amb;  // d x nd
    if (total_degree(beta) == 0) {
      amb = -row_op(t);
    } else {
      amb = Matrix::Zero(d, t.n * d);
      for (int j = 0; j < t.n; ++j) {
        if (beta[j] == 0) continue;
        MultiIndex parent = beta;
        --parent[j];
        amb += scalar.gamma[scalar.pos.at(parent)] * pow[scalar.pos.at(parent)] *
               dd.D_T.middleRows(j * d, d);
      }
      amb = dd.D_Tstar * amb;
    }
    tc.pos[beta] = static_cast<int>(tc.degrees.size());
    tc.degrees.push_back(beta);
    tc.coeffs.push_back(bs.adjoint() * amb * bd);
  }

  // Cross-check the closed form against the resolvent evaluation. The
  // difference must stay within the analytic tail of the series.
  const std::vector<Vector> pts = ball_grid(t.n, 15, 0.6, 0x74617972ULL);
  for (const auto& z : pts) {
    const double diff = max_abs(Matrix(eval_taylor(tc, z) - eval_theta(t, dd, z)));
    const double nz = z.norm();
    const double tail = std::pow(nz, max_degree + 1) / (1.0 - nz);
    if (diff > tail + t.tol + 1e-12)
      throw Error("OracleMismatch",
                  "Taylor expansion disagrees with the resolvent form by " +
                      std::to_string(diff));
  }
  return tc;
}

Matrix multiplier_matrix(const TaylorCoefficients& theta,
                         const TruncatedFockSpace& dom_space,
                         const TruncatedFockSpace& codom_space) {
  if (dom_space.n != theta.n || codom_space.n != theta.n ||
      dom_space.N != codom_space.N ||
      dom_space.coeff_dim != theta.domain_dim ||
      codom_space.coeff_dim != theta.codomain_dim)
    throw Error("ShapeMismatch", "spaces do not match the multiplier symbol");
  const int cd = dom_space.coeff_dim, cc = codom_space.coeff_dim;
  Matrix out = Matrix::Zero(codom_space.ambient_dim(), dom_space.ambient_dim());
  for (int pl = 0; pl < dom_space.index_count(); ++pl) {
    const MultiIndex& l = dom_space.indices[pl];
    const int free_deg = dom_space.N - total_degree(l);
    for (std::size_t q = 0; q < theta.degrees.size(); ++q) {
      const MultiIndex& beta = theta.degrees[q];
      if (total_degree(beta) > free_deg) continue;
      MultiIndex k = l;
      for (int i = 0; i < theta.n; ++i) k[i] += beta[i];
      const int pk = codom_space.pos.at(k);
      const double w = std::sqrt(dom_space.gamma[pl] / codom_space.gamma[pk]);
      out.block(pk * cc, pl * cd, cc, cd) += w * theta.coeffs[q];
    }
  }
  return out;
}

Matrix dilation_j(const OperatorTuple& t, const DefectData& dd,
                  const TruncatedFockSpace& space) {
  if (space.n != t.n || space.coeff_dim != dd.basis_DTstar.dim())
    throw Error("ShapeMismatch", "space is not built over the T*-defect");
  const int rs = space.coeff_dim;
  const std::vector<Matrix> pow = adjoint_powers(t, space.indices, space.pos);
  Matrix j = Matrix::Zero(space.ambient_dim(), t.d);
  const Matrix comp = dd.basis_DTstar.basis.adjoint() * dd.D_Tstar;  // r_* x d
  for (int p = 0; p < space.index_count(); ++p)
    j.middleRows(p * rs, rs) = std::sqrt(space.gamma[p]) * comp * pow[p];
  return j;
}

DilationReport check_dilation_identities(const OperatorTuple& t,
                                         const TruncatedFockSpace& space,
                                         double at_tol, int at_max_iter) {
  const DefectData dd = defects(t);
  const Matrix j = dilation_j(t, dd, space);
  const ATResult at = limit_AT(t, at_tol, at_max_iter);

  DilationReport rep;
  rep.at_iterations = at.iterations;
  rep.defect_residual =
      max_abs(Matrix(j.adjoint() * j + at.A_T - eye(t.d)));

  const TaylorCoefficients tc = theta_taylor(t, dd, space.N);
  const TruncatedFockSpace dom = build_space(
      t.n, space.N, tc.domain_dim,
      std::max(20000, space.index_count() * std::max(tc.domain_dim, 1)));
  const Matrix m = multiplier_matrix(tc, dom, space);
  rep.complement_residual = max_abs(
      Matrix(j * j.adjoint() + m * m.adjoint() - eye(space.ambient_dim())));

  const std::vector<Matrix> shifts = shift_matrices(space);
  const int keep = space.degree_count(space.N - 1) * space.coeff_dim;
  for (int i = 0; i < t.n; ++i) {
    const Matrix dif = shifts[i].adjoint() * j - j * t.T[i].adjoint();
    rep.intertwine_residual =
        std::max(rep.intertwine_residual, max_abs(Matrix(dif.topRows(keep))));
  }
  return rep;
}

}  // namespace cct
