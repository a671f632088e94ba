#pragma once

#include <cstdint>
#include <vector>

#include "cct/types.hpp"

namespace cct {

// Deterministic, platform-independent generator (splitmix64). Standard
// library distributions are avoided on purpose: their output may differ
// between implementations, and sampled grids must be reproducible byte for
// byte from the seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Standard complex Gaussian (Box-Muller on two uniforms).
  Complex gaussian();

  // Uniform on the open ball of the given radius in C^n (volume measure).
  Vector ball_point(int n, double radius);

  Matrix gaussian_matrix(int rows, int cols);

  // Haar-ish unitary: polar factor of a Gaussian matrix.
  Matrix unitary(int d);

 private:
  std::uint64_t state_;
};

// Point of the open unit ball B_n in C^n.
struct BallPoint {
  Vector z;
};

// grid_size quasi-random points at |z| <= radius, with the origin prepended
// (sample 0), so the returned vector has grid_size + 1 entries.
std::vector<Vector> ball_grid(int n, int grid_size, double radius,
                              std::uint64_t seed);

}  // namespace cct
