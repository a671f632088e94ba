#pragma once

#include <vector>

#include "cct/charfn.hpp"
#include "cct/fock.hpp"
#include "cct/linalg.hpp"
#include "cct/tuple.hpp"

namespace cct {

// Functional model of a c.n.c. tuple inside H2_N (x) D_Tstar  (+)  cl Ran Delta.
//
// Pieces, all in defect coordinates:
//   theta   Taylor coefficients of the characteristic function, degree N
//   j       isometric embedding  C^d -> H2_N (x) D_Tstar,  (jh)(z) = k_T(z)^* h
//   mult    multiplier matrix of theta,  H2_N (x) D_T -> H2_N (x) D_Tstar
//   Delta   psd sqrt of I - mult^* mult on the domain side
//   r       connecting map  C^d -> cl Ran Delta (ambient domain coordinates),
//           solved least-squares from  r k_T(z) x = -Delta (k(.,z) (x) theta(z)^* x)
//   V = [j; W^* r],  U = [mult; W^* Delta]   (W = orthonormal basis of Ran Delta)
//   model_subspace = orthogonal complement of Ran U in the sum space
//
// On the truncated space the defining samples for r carry a truncation artifact
// of order radius^(N+1-deg theta); keep the sample radius small and the degree
// margin generous (see bounds.hpp) so the certificates below are meaningful.
struct ModelSpace {
  OperatorTuple t;
  DefectData defects;
  TruncatedFockSpace dom_space;    // coefficients in D_T coordinates
  TruncatedFockSpace codom_space;  // coefficients in D_Tstar coordinates
  TaylorCoefficients theta;
  Matrix j;
  Matrix mult;
  Matrix Delta;
  Subspace ran_Delta;
  Matrix r;
  Matrix V;
  Matrix U;
  Subspace model_subspace;  // of the sum space C^codom_ambient (+) C^rank(Delta)

  int span_rank = 0;         // rank of the stacked kernel samples [k_T(z_s)]
  double fit_residual = 0;   // | r K - R |          (defining relation on the grid)
  double norm_residual = 0;  // | j^* j + r^* r - I_d |
  double connect_residual = 0;    // | r j^* + Delta mult^* |
  double partition_residual = 0;  // | V V^* + U U^* - I |  on the sum space
  double r_delta_residual = 0;    // | r^* Delta + j^* mult |
};

struct RMap {
  Matrix r;
  int span_rank = 0;
  double fit_residual = 0;
  double norm_residual = 0;
  double connect_residual = 0;
};

// Solves the connecting map from its spanning-set definition over the grid.
// Throws Error("NotCNC") when the sampled kernel vectors fail to span C^d.
RMap build_r(const OperatorTuple& t, int truncation_degree,
             const std::vector<Vector>& grid, int dim_cap = 20000);

ModelSpace build_model(const OperatorTuple& t, int truncation_degree,
                       const std::vector<Vector>& grid, int dim_cap = 20000);

struct ModelTuple {
  OperatorTuple tuple;              // the compressed model tuple on model_subspace
  double intertwine_residual = 0;   // max_i | Vt T_i^* - MT_i^* Vt |,  Vt = H^* V
  double range_residual = 0;        // | (I - H H^*) V |  (Ran V inside the subspace)
};

// Compression of (shift^* (x) I) (+) Delta^+ shift^* Delta to the model subspace,
// certified against V as an intertwiner.  Throws Error("ResidualTooLarge") when
// the certificate exceeds the given tolerance.
ModelTuple model_tuple(const ModelSpace& ms, double cert_tol);

struct MVForm {
  Matrix A_half;                  // psd sqrt of the limit operator A_T
  Matrix phi;                     // isometry  cl Ran A_T -> cl Ran Delta (coords)
  std::vector<Matrix> U_ops;      // U_i on cl Ran A_T coordinates
  std::vector<Matrix> W_ops;      // spherical isometry tuple on cl Ran Delta coords
  double embed_residual = 0;      // | phi Ahat - W^* r |,  Ahat = coords of A_half
  double sphere_residual = 0;     // | sum W_i^* W_i - I |
  double compression_residual = 0;  // model adjoint vs (shift^* (x) I) (+) W_i on
                                    // the model subspace
};

// U_i on cl Ran A_T defined by U_i (A_T^{1/2} h) = A_T^{1/2} T_i^* h, in the
// coordinates of range_basis(A_T^{1/2}).  Well defined for any row contraction.
std::vector<Matrix> mv_U_ops(const OperatorTuple& t, const Matrix& A_T);

// Realizes r = phi A_T^{1/2} and extends U_i by a fixed completion to a
// spherical isometry tuple on cl Ran Delta.  Throws Error("GramMismatch") when
// | A_T^{1/2} h | != | r h | beyond tolerance.
MVForm mv_form(const ModelSpace& ms, double tol);

// Unitary  U : C^{d_R} -> C^{d_T}  with  U R_i = T_i U,  built from a weak
// coincidence witness between the characteristic functions via the kernel maps:
// U k_R(z) = k_T(z) tau_star^*.  Throws Error("SpanDeficient") when either
// kernel family fails to span, Error("IntertwiningFailure") when the witness
// does not certify.
Matrix equivalence_from_coincidence(const OperatorTuple& t, const OperatorTuple& r,
                                    const CoincidenceWitness& witness,
                                    const std::vector<Vector>& grid, double tol);

}  // namespace cct
