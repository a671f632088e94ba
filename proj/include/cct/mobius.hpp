#pragma once

#include <vector>

#include "cct/charfn.hpp"
#include "cct/tuple.hpp"

namespace cct {

// Automorphism of the unit ball: z -> u * phi_a(z) with
//   phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>),
// P_a the projection onto span{a}, Q_a = I - P_a, s_a = sqrt(1 - |a|^2).
// Convention at a = 0: P_0 = 0, Q_0 = I, s_0 = 1, so phi_0 = -id.
struct MobiusMap {
  Vector a;
  Matrix u;  // n x n unitary applied after phi_a
  double s_a = 1.0;
  Matrix P_a, Q_a;
};

MobiusMap make_mobius(const Vector& a, const Matrix& u, double tol = 1e-9);

// u * phi_a(z). With u = I this is an involution of the ball.
Vector phi(const MobiusMap& m, const Vector& z);

// The transformed tuple u(T_a), where
//   T_a = (I - T A*)^{-1} (A - P_a T - s_a Q_a T),  A = (a_1 I, ..., a_n I),
// and u acts componentwise: u(S)_i = sum_j u_ij S_j.
OperatorTuple transform_tuple(const OperatorTuple& t, const MobiusMap& m);

// Residual of I - T_a T_a* = (1-|a|^2) (I-TA*)^{-1} (I-TT*) (I-AT*)^{-1}.
double check_defect_identity(const OperatorTuple& t, const MobiusMap& m);

// Corollary witness: S = s_a (I - TA*)^{-1} and the partial isometry U from
// the T_a*-defect space onto the T*-defect space with U D_{T_a*} = D_T* S*.
struct DefectUnitary {
  Matrix S;
  Matrix U;  // d x d, partial isometry Ran D_{T_a*} -> Ran D_{T*}
  double residual = 0.0;
};

DefectUnitary defect_unitary(const OperatorTuple& t, const MobiusMap& m);

// Transformation law of the characteristic function under m: the function
// z -> theta_T(phi_a(u* z)) weakly coincides with theta of u(T_a). Checks the
// constructed defect-unitary witness on all grid pairs, runs the independent
// weak-coincidence decider, and cross-checks the two resolvent identities and
// the scalar automorphism identity on the grid.
struct TransformationLawReport {
  double witness_residual = 0.0;
  double decider_residual = 0.0;
  bool decider_found = false;
  double resolvent_residual = 0.0;
  double scalar_residual = 0.0;
  double max_residual = 0.0;
};

TransformationLawReport verify_transformation_law(
    const OperatorTuple& t, const MobiusMap& m, const std::vector<Vector>& grid);

}  // namespace cct
