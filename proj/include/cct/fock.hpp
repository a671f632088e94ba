#pragma once

#include <map>
#include <vector>

#include "cct/tuple.hpp"

namespace cct {

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& k);

// gamma_k = |k|! / k!, the multinomial weight of z^k.
double gamma_weight(const MultiIndex& k);

// E-valued polynomials of total degree <= N on the ball, carried in the
// orthonormal basis {sqrt(gamma_k) z^k (x) e_j}. Indices are listed in graded
// order: degree ascending, within a degree lexicographically by descending
// first coordinate, so constants come first and the listing is reproducible.
// coeff_dim may be zero (degenerate coefficient spaces are legal values).
struct TruncatedFockSpace {
  int n = 0;
  int N = 0;
  int coeff_dim = 0;
  std::vector<MultiIndex> indices;
  std::vector<double> gamma;
  std::map<MultiIndex, int> pos;

  int index_count() const { return static_cast<int>(indices.size()); }
  int ambient_dim() const { return index_count() * coeff_dim; }
  // Number of indices of total degree <= deg (a prefix of the listing).
  int degree_count(int deg) const;
};

// Errors: SizeOverflow when C(N+n, n) * max(coeff_dim, 1) exceeds dim_cap.
TruncatedFockSpace build_space(int n, int N, int coeff_dim,
                               int dim_cap = 20000);

// The truncated shifts M_{z_i} (x) I_E, mapping the unit vector of z^k (x) x
// to sqrt(gamma_k / gamma_{k+e_i}) times the unit vector of z^{k+e_i} (x) x
// and the top degree to zero. They commute exactly and form a row
// contraction whose codomain defect is the projection onto constants.
std::vector<Matrix> shift_matrices(const TruncatedFockSpace& s);

// Coefficient vector (scalar part, index_count entries) of the degree-<=N
// slice of the reproducing kernel k(., z): entry at k is
// sqrt(gamma_k) * conj(z)^k.
Vector kernel_vector(const TruncatedFockSpace& s, const Vector& z);

// Point evaluation f(z) = sum_k sqrt(gamma_k) z^k f_k of a coefficient
// vector; returns an element of E.
Vector evaluate(const TruncatedFockSpace& s, const Vector& coeffs,
                const Vector& z);

// Polynomial multiplier symbol: finitely many Taylor coefficients C_beta,
// each codomain_dim x domain_dim.
struct TaylorCoefficients {
  int n = 0;
  int domain_dim = 0;
  int codomain_dim = 0;
  std::vector<MultiIndex> degrees;
  std::vector<Matrix> coeffs;
  std::map<MultiIndex, int> pos;

  int max_degree() const;
  // C_beta, or zero when beta is not stored.
  Matrix coeff(const MultiIndex& beta) const;
  Matrix at_zero() const;
};

// Pointwise value sum_beta z^beta C_beta.
Matrix eval_taylor(const TaylorCoefficients& tc, const Vector& z);

// Taylor expansion of theta_T about the origin up to max_degree, in defect
// coordinates: C_0 is the compression of -T, and for |beta| >= 1
//   C_beta = D_Tstar (sum_{j: beta_j >= 1} gamma_{beta-e_j} T*^(beta-e_j)
//            Pi_j) D_T,
// Pi_j extracting the j-th block of C^{nd}. The closed form is
// cross-validated against eval_theta at 16 sample points; a difference
// beyond the analytic tail bound |z|^(max_degree+1) / (1 - |z|) plus tol
// slack raises OracleMismatch.
TaylorCoefficients theta_taylor(const OperatorTuple& t, const DefectData& dd,
                                int max_degree);

// Matrix of f -> truncation of theta * f in the orthonormal bases; the block
// from monomial l to monomial k is sqrt(gamma_l / gamma_k) C_{k-l}.
// Errors: ShapeMismatch when the spaces disagree with theta or each other.
Matrix multiplier_matrix(const TaylorCoefficients& theta,
                         const TruncatedFockSpace& dom_space,
                         const TruncatedFockSpace& codom_space);

// Truncated dilation map j: C^d -> H2_N (x) D_Tstar, whose alpha-block is
// sqrt(gamma_alpha) times the coordinates of D_Tstar T*^alpha. Its adjoint L
// acts as L(p (x) xi) = p(T) D_Tstar xi on elementary tensors.
// Errors: ShapeMismatch unless space.n = t.n and space.coeff_dim =
// rank(D_Tstar).
Matrix dilation_j(const OperatorTuple& t, const DefectData& dd,
                  const TruncatedFockSpace& space);

struct DilationReport {
  double defect_residual = 0.0;      // | L L* + A_T - I_d |      (L = j*)
  double complement_residual = 0.0;  // | L* L + M M* - I | on the full space
  double intertwine_residual = 0.0;  // | j T_i* - (M_i* (x) I) j |, deg <= N-1
  int at_iterations = 0;
};

// Certifies the two defect identities of the dilation and the shift
// intertwining. A_T is resolved at at_tol, tighter than t.tol on purpose:
// the reported defect residual should be dominated by the truncation tail,
// not by the fixed-point stopping rule.
DilationReport check_dilation_identities(const OperatorTuple& t,
                                         const TruncatedFockSpace& space,
                                         double at_tol = 1e-13,
                                         int at_max_iter = 200000);

}  // namespace cct
