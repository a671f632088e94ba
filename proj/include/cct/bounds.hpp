#pragma once

namespace cct::bounds {

// Pass thresholds, pinned in one place. Each constant states what a check on
// sound input must achieve at the default working tolerance; the CLI scales
// them linearly when the user overrides --tol.
inline constexpr double kDefaultTol = 1e-9;

inline constexpr double kIdentityBound = 1e-10;   // theta / kernel identities
inline constexpr double kDefectBound = 1e-10;     // Mobius defect identity
inline constexpr double kInvolutionBound = 1e-12; // phi_a o phi_a = id
inline constexpr double kTransformBound = 1e-9;   // transformation-law witness
inline constexpr double kDilationBound = 1e-10;   // dilation identities, nilpotent
inline constexpr double kModelBound = 1e-8;       // model partition / connecting maps
inline constexpr double kEquivalenceBound = 1e-8; // intertwiner certificates
inline constexpr double kBeurlingBound = 1e-9;    // planted-subspace recovery
inline constexpr double kDecayFloor = 1e-14;      // geometric-decay assertions stop here

// Model-grid geometry: the least-squares samples for the connecting map carry
// a truncation artifact of order radius^(N + 1 - deg theta), so the model
// sample radius stays small and fixtures keep N - deg(theta) >= 9. At radius
// 0.1 that puts the artifact near 1e-10, safely under kModelBound.
inline constexpr double kModelGridRadius = 0.1;
inline constexpr int kModelGridSize = 24;

// Structural rank decisions (does a sample family span), as opposed to
// residual checks: genuine singular values in the fixtures sit far above
// this, structural zeros far below.
inline constexpr double kRankCut = 1e-10;

// Splitting a contraction into isometric and defective directions happens on
// its singular values, where sigma = 1 is resolved to machine precision. The
// defect sqrt(1 - sigma^2) of a spurious sigma stays under sqrt(2 eps), about
// 2e-8, so the cut sits above that and far below any genuine defect.
inline constexpr double kIsometryCut = 1e-6;

inline constexpr double scaled(double pinned, double tol) {
  return pinned * (tol / kDefaultTol);
}

}  // namespace cct::bounds
