#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cct/grid.hpp"
#include "cct/tuple.hpp"

namespace cct {

// Operator-valued function on the ball, known through samples on a grid.
// samples[i] maps coordinates of the domain space to coordinates of the
// codomain space (codomain_dim x domain_dim).
struct SampledOperatorFunction {
  int domain_dim = 0;
  int codomain_dim = 0;
  std::vector<Vector> points;
  std::vector<Matrix> samples;
};

// theta_T(z) = -T + D_Tstar (I - Z T*)^{-1} Z D_T as a map from the defect
// space of T to the defect space of T*, expressed in the orthonormal bases
// carried by dd (so the result is rank(D_Tstar) x rank(D_T)). Requires
// |z| < 1; the resolvent there is invertible for every row contraction.
Matrix eval_theta(const OperatorTuple& t, const DefectData& dd,
                  const Vector& z);

// k_T(z) = (I - T Z*)^{-1} D_Tstar with the domain written in the basis of
// the T*-defect space: a d x rank(D_Tstar) matrix.
Matrix eval_kT(const OperatorTuple& t, const DefectData& dd, const Vector& z);

// Residual of
//   I - theta(w) theta(z)* =
//     (1 - <w,z>) D_Tstar (I - W T*)^{-1} (I - T Z*)^{-1} D_Tstar
// in defect coordinates (entrywise max norm).
double check_theta_identity(const OperatorTuple& t, const DefectData& dd,
                            const Vector& z, const Vector& w);

// Residual of (I - theta(w) theta(z)*) / (1 - <w,z>) = k_T(w)* k_T(z).
double check_kernel_identity(const OperatorTuple& t, const DefectData& dd,
                             const Vector& z, const Vector& w);

SampledOperatorFunction sample_theta(const OperatorTuple& t,
                                     const DefectData& dd,
                                     const std::vector<Vector>& grid);

// Grid support: the span of the ranges of all sampled phi(z)* (a subspace of
// the domain space).
Subspace support(const SampledOperatorFunction& f, double tol);

enum class CoincidenceKind { Weak, Strong };

enum class NoSolutionReason {
  None,
  CodomainMismatch,
  NoUnitaryWitness,
  WeakFailure,
  ComplementMismatch,
  ResidualTooLarge,
};

std::string to_string(NoSolutionReason r);

struct CoincidenceWitness {
  std::optional<Matrix> tau;  // domain unitary, present for strong witnesses
  Matrix tau_star;            // codomain unitary
  CoincidenceKind kind = CoincidenceKind::Weak;
  double residual = 0.0;
};

struct CoincidenceResult {
  std::optional<CoincidenceWitness> witness;
  NoSolutionReason reason = NoSolutionReason::None;
  double residual = 0.0;  // best residual seen, also on the NoSolution branch

  bool ok() const { return witness.has_value(); }
};

// Decide whether psi (= g) and phi (= f) weakly coincide on the grid: find a
// codomain unitary tau_star with
//   g(w) g(z)* = tau_star f(w) f(z)* tau_star*   for all sample pairs.
// tau_star is recovered from the linear intertwining space of the Gram pair
// family {(f_i f_j*, g_i g_j*)}; since that family is closed under adjoints,
// the space is a unitary translate of a von Neumann algebra and the polar
// factor of a generic element is a witness whenever one exists. Both
// functions must be sampled on the identical grid (GridMismatch otherwise).
CoincidenceResult decide_weak_coincidence(const SampledOperatorFunction& f,
                                          const SampledOperatorFunction& g,
                                          double tol);

// Upgrade to coincidence: additionally build the domain unitary tau mapping
// support(f) onto support(g) through U(f(z)* tau_star* x) = g(z)* x and a
// deterministic unitary identification of the support complements (which must
// have equal dimensions; ComplementMismatch otherwise).
CoincidenceResult decide_coincidence(const SampledOperatorFunction& f,
                                     const SampledOperatorFunction& g,
                                     double tol);

}  // namespace cct
