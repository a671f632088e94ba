#pragma once

#include <vector>

#include "cct/linalg.hpp"
#include "cct/types.hpp"

namespace cct {

// Commuting tuple T = (T_1, ..., T_n) of d x d matrices with
// sum T_i T_i* <= (1 + tol) I (row contraction).
struct OperatorTuple {
  int n = 0;
  int d = 0;
  std::vector<Matrix> T;
  double tol = 1e-9;
};

class NonCommutingError : public Error {
 public:
  NonCommutingError(int i, int j, double magnitude)
      : Error("NonCommuting", "[T" + std::to_string(i + 1) + ", T" +
                                  std::to_string(j + 1) + "] has magnitude " +
                                  std::to_string(magnitude)),
        i(i),
        j(j),
        magnitude(magnitude) {}
  int i, j;
  double magnitude;
};

class NotRowContractionError : public Error {
 public:
  explicit NotRowContractionError(double excess)
      : Error("NotRowContraction",
              "largest eigenvalue of sum T_i T_i* exceeds 1 by " +
                  std::to_string(excess)),
        excess(excess) {}
  double excess;
};

// Throws NonCommuting / NotRowContraction / DimensionMismatch.
void validate(const OperatorTuple& t);

// T as a row operator C^{nd} -> C^d: the block row [T_1 ... T_n].
Matrix row_op(const OperatorTuple& t);

// sum_i T_i T_i* (d x d).
Matrix sum_TT_adj(const OperatorTuple& t);

// T*T as an nd x nd block matrix, block (i, j) = T_i* T_j.
Matrix gram_TstarT(const OperatorTuple& t);

// Row multiplication by z: the d x nd block row [z_1 I ... z_n I].
Matrix z_row(const Vector& z, int d);

// sum_i z_i T_i* (the operator Z T* of the resolvent (I - Z T*)^{-1}).
Matrix z_dot_Tadj(const OperatorTuple& t, const Vector& z);

// sum_i conj(z_i) T_i (the operator T Z*).
Matrix T_dot_zadj(const OperatorTuple& t, const Vector& z);

// Defect operators and their ranges. D_T = (I - T*T)^{1/2} on C^{nd},
// D_Tstar = (I - sum T_i T_i*)^{1/2} on C^d. Satisfies the intertwining
// row(T) D_T = D_Tstar row(T).
struct DefectData {
  Matrix D_T;
  Matrix D_Tstar;
  Subspace basis_DT;      // subspace of C^{nd}
  Subspace basis_DTstar;  // subspace of C^d
};

DefectData defects(const OperatorTuple& t);

// The CP map P_T(X) = sum_i T_i X T_i*.
Matrix apply_PT(const OperatorTuple& t, const Matrix& x);

struct ATResult {
  Matrix A_T;
  int iterations = 0;
};

// Decreasing limit A_T = lim P_T^k(I), stopped when the successive
// difference max-norm drops to tol; NoConvergence after max_iter steps.
ATResult limit_AT(const OperatorTuple& t, double tol, int max_iter = 10000);

// Largest T*-invariant subspace of Ker D_Tstar; the tuple is completely
// non-coisometric (c.n.c.) iff this is {0}. Stabilizes in at most d steps.
Subspace cnc_kernel(const OperatorTuple& t, const DefectData& dd);

struct ClassificationReport {
  bool is_pure = false;
  bool is_coisometric = false;
  bool is_spherical_isometry = false;
  bool is_cnc = false;
  Matrix A_T;
  Subspace cnc_kernel;
  int iterations_to_converge = 0;
};

ClassificationReport classify(const OperatorTuple& t, int max_iter = 10000);

}  // namespace cct
