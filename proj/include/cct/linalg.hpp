#pragma once

#include <optional>
#include <vector>

#include "cct/types.hpp"

namespace cct {

// Closed subspace of C^ambient_dim, carried as an orthonormal column basis.
// dim() == 0 is the zero subspace and perfectly legal.
struct Subspace {
  int ambient_dim = 0;
  Matrix basis;  // ambient_dim x dim, orthonormal columns
  double tol = 1e-9;

  int dim() const { return static_cast<int>(basis.cols()); }
  Matrix projector() const { return basis * basis.adjoint(); }
};

// Hermitian PSD square root via spectral decomposition.
// Hermiticity is checked entrywise against tol * max(1, |m|_inf); eigenvalues
// below -tol * max(1, lambda_max) raise NotPSD, eigenvalues in the [-tol, 0]
// band are clamped to zero. Guarantee on acceptance: |S*S - m| <= 10*tol*|m|
// (and S is exactly Hermitian PSD by construction).
Matrix psd_sqrt(const Matrix& m, double tol);

// Orthonormal basis of the closed range of m. Singular values
// <= tol * sigma_max are treated as zero; the zero matrix yields dim 0.
Subspace range_basis(const Matrix& m, double tol);

// Orthonormal basis of the orthogonal complement of s.
Matrix complement_basis(const Subspace& s);

// Intersection of finitely many subspaces of a common ambient space.
// The intersection of an empty list is the full space, so the ambient
// dimension must be supplied for that case (otherwise it is inferred and
// cross-checked; mismatch raises DimensionMismatch). Implemented through the
// averaged-projector eigenproblem: the intersection is the eigenvalue-1
// eigenspace of (1/m) sum P_i, detected at the common tolerance.
Subspace subspace_intersection(const std::vector<Subspace>& spaces,
                               int ambient_dim = -1);

// Partial isometry U with U*a == b, initial space Ran(a), final space Ran(b),
// zero on the orthocomplement of Ran(a). Exists iff the column Gram matrices
// agree; returns std::nullopt when |a*a - b*b|_inf > tol or when the residual
// bound |U*a - b|_inf <= 10*tol cannot be met. Column counts must match
// (DimensionMismatch otherwise).
std::optional<Matrix> isometry_from_gram(const Matrix& a, const Matrix& b,
                                         double tol);

// Null space of m (right singular vectors with sigma <= tol * max(sigma_max, 1)).
Subspace null_space(const Matrix& m, double tol);

// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace cct
