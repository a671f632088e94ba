#pragma once

#include "cct/charfn.hpp"
#include "cct/fock.hpp"
#include "cct/linalg.hpp"
#include "cct/tuple.hpp"

namespace cct {

// Shift-invariant subspace of a truncated space, carried as an orthonormal
// basis of the ambient coefficient space.
struct InvariantSubspace {
  TruncatedFockSpace space;
  Subspace basis;
};

// max_i | (I - P_M) M_{z_i} P_M |.
double invariance_residual(const InvariantSubspace& m);

// Largest subspace X of the coefficient space E with H2_N (x) X contained in
// M: the eta whose full monomial orbit { z^k (x) eta : |k| <= N } lies in M.
Subspace reducing_part(const InvariantSubspace& m);

// Splitting M = (H2_N (x) X) (+) Y with Y shift-invariant and without
// reducing part.
struct BLHDecomposition {
  Subspace reducing;       // X, inside the coefficient space
  InvariantSubspace rest;  // Y
  double split_residual = 0;   // | P_M - P_{H2 (x) X} - P_Y |
  double rest_invariance = 0;  // invariance residual of Y
  int rest_reducing_dim = 0;   // dim reducing_part(Y); 0 when the split is clean
};

BLHDecomposition blh_decompose(const InvariantSubspace& m);

// lambda_max(phi(0)^* phi(0)) < 1 - tol. The sampled overload reads the value
// at the origin, which must be on the grid.
bool is_purely_contractive(const TaylorCoefficients& theta, double tol);
bool is_purely_contractive(const SampledOperatorFunction& f, double tol);

struct InnerCheck {
  bool inner = false;
  double residual = 0;    // | (M^*M)^2 - M^*M | on the exactness block
  int exact_degree = 0;   // the block covers total degrees <= exact_degree
};

// Partial-isometry test for the multiplier of theta. The truncated Gram
// matrix M^*M agrees with the untruncated one on total degrees up to
// N - 2 deg(theta); the projection identity is tested there.
// Errors: ShapeMismatch when N < 2 deg(theta).
InnerCheck is_inner(const TaylorCoefficients& theta,
                    const TruncatedFockSpace& dom_space,
                    const TruncatedFockSpace& codom_space, double tol);

struct InnerFromInvariant {
  TaylorCoefficients theta;  // tau . theta_T, coefficients into E
  OperatorTuple tuple;       // compression of the shifts to the complement of Y
  Matrix tau;                // isometric constant, defect coordinates -> E
  double range_residual = 0;  // | P_Y - M M^* | for the multiplier of theta
  bool degenerate = false;    // Y = {0}: the zero-domain inner function
};

// Inner function representing a shift-invariant Y without reducing part:
// Y = Ran M_theta with theta = tau . theta_T, T the compression of the
// shifts to the orthogonal complement of Y.
// Errors: HasReducingPart when reducing_part(Y) != {0}; CertificationFailure
// when the range identity cannot be certified at tol (truncation-only
// invariant subspaces with no untruncated counterpart end up here).
InnerFromInvariant inner_from_invariant(const InvariantSubspace& y, double tol);

struct TupleFromInner {
  OperatorTuple tuple;
  bool degenerate = false;  // theta constant unitary: everything is range
  CoincidenceResult coincidence;  // theta vs theta_tuple on the default grid
};

// Model tuple of an inner, purely contractive theta: the compression of the
// shifts to the complement of Ran M_theta, certified by weak coincidence of
// the characteristic functions.
// Errors: NotPurelyContractive, NotInner, BadInput (margin
// truncation_degree >= max(deg theta + 4, 2 deg theta) violated),
// CertificationFailure.
TupleFromInner tuple_from_inner(const TaylorCoefficients& theta,
                                int truncation_degree, double tol,
                                int dim_cap = 20000);

}  // namespace cct
