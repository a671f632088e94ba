#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "cct/charfn.hpp"
#include "cct/grid.hpp"
#include "cct/linalg.hpp"
#include "cct/tuple.hpp"
#include "support.hpp"

using namespace cct;
using cct::testing::conjugated;
using cct::testing::make_checked;
using cct::testing::random_commuting_tuple;
using cct::testing::random_nilpotent_tuple;
using cct::testing::scalar_matrix;

namespace {

Vector vec1(Complex z) {
  Vector v(1);
  v << z;
  return v;
}

Vector vec2(Complex a, Complex b) {
  Vector v(2);
  v << a, b;
  return v;
}

SampledOperatorFunction constant_function(const Matrix& value,
                                          const std::vector<Vector>& grid) {
  SampledOperatorFunction f;
  f.domain_dim = static_cast<int>(value.cols());
  f.codomain_dim = static_cast<int>(value.rows());
  f.points = grid;
  f.samples.assign(grid.size(), value);
  return f;
}

}  // namespace

TEST_CASE("theta of a scalar contraction is the Moebius transform") {
  const OperatorTuple t = make_checked(1, {scalar_matrix(0.5)});
  const DefectData dd = defects(t);
  Rng rng(311);
  for (int i = 0; i < 25; ++i) {
    const Vector z = rng.ball_point(1, 0.95);
    const Complex zz = z(0);
    const Complex oracle = (zz - 0.5) / (1.0 - 0.5 * zz);
    CHECK(std::abs(eval_theta(t, dd, z)(0, 0) - oracle) <= 1e-13);
  }
  CHECK(std::abs(eval_theta(t, dd, vec1(0.5))(0, 0)) <= 1e-14);
}

TEST_CASE("theta of the zero tuple is the coordinate row") {
  const OperatorTuple t =
      make_checked(2, {Matrix::Zero(1, 1), Matrix::Zero(1, 1)});
  const DefectData dd = defects(t);
  Rng rng(313);
  for (int i = 0; i < 10; ++i) {
    const Vector z = rng.ball_point(2, 0.9);
    const Matrix coords = eval_theta(t, dd, z);
    REQUIRE(coords.rows() == 1);
    REQUIRE(coords.cols() == 2);
    // Undo the defect bases: the ambient operator is the row [z1 z2].
    const Matrix ambient = dd.basis_DTstar.basis * coords *
                           dd.basis_DT.basis.adjoint();
    CHECK(max_abs(ambient - z_row(z, 1)) <= 1e-14);
  }
}

TEST_CASE("theta at the origin compresses -T") {
  Rng rng(317);
  const OperatorTuple t = random_commuting_tuple(rng, 2, 3);
  const DefectData dd = defects(t);
  const Matrix coords = eval_theta(t, dd, Vector::Zero(2));
  // Strict contraction: both defects have full rank, so the bases undo.
  REQUIRE(dd.basis_DT.dim() == 6);
  REQUIRE(dd.basis_DTstar.dim() == 3);
  const Matrix ambient =
      dd.basis_DTstar.basis * coords * dd.basis_DT.basis.adjoint();
  CHECK(max_abs(ambient + row_op(t)) <= 1e-12);
}

TEST_CASE("theta rejects points outside the ball") {
  const OperatorTuple t = make_checked(1, {scalar_matrix(0.5)});
  const DefectData dd = defects(t);
  CHECK_THROWS_WITH_AS(eval_theta(t, dd, vec1(1.0)),
                       doctest::Contains("OutsideBall"), Error);
  CHECK_THROWS_WITH_AS(eval_kT(t, dd, vec1(Complex(0.8, 0.7))),
                       doctest::Contains("OutsideBall"), Error);
  CHECK_THROWS_AS(eval_theta(t, dd, vec2(0.1, 0.1)), Error);
}

TEST_CASE("kernel map of a scalar contraction") {
  const OperatorTuple t = make_checked(1, {scalar_matrix(0.5)});
  const DefectData dd = defects(t);
  const Complex k0 = eval_kT(t, dd, vec1(0.0))(0, 0);
  CHECK(std::abs(std::abs(k0) - std::sqrt(3.0) / 2.0) <= 1e-14);
  Rng rng(331);
  for (int i = 0; i < 10; ++i) {
    const Vector z = rng.ball_point(1, 0.9);
    const Complex ratio = eval_kT(t, dd, z)(0, 0) / k0;
    // k(z)/k(0) = 1/(1 - conj(z)/2), independent of the basis sign.
    CHECK(std::abs(ratio - 1.0 / (1.0 - 0.5 * std::conj(z(0)))) <= 1e-13);
  }
}

TEST_CASE("kernel map of the zero tuple is constant") {
  const OperatorTuple t =
      make_checked(2, {Matrix::Zero(1, 1), Matrix::Zero(1, 1)});
  const DefectData dd = defects(t);
  Rng rng(337);
  for (int i = 0; i < 5; ++i) {
    const Matrix k = eval_kT(t, dd, rng.ball_point(2, 0.9));
    CHECK(std::abs(std::abs(k(0, 0)) - 1.0) <= 1e-14);
  }
}

TEST_CASE("difference-quotient identity") {
  Rng rng(347);
  const OperatorTuple scalar = make_checked(1, {scalar_matrix(0.5)});
  const DefectData sdd = defects(scalar);
  CHECK(check_theta_identity(scalar, sdd, vec1(0.3), vec1(-0.2)) <= 1e-14);
  CHECK(check_theta_identity(scalar, sdd, Vector::Zero(1), Vector::Zero(1)) <=
        1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    const OperatorTuple t =
        random_commuting_tuple(rng, 1 + trial % 3, 2 + trial % 5);
    const DefectData dd = defects(t);
    for (int i = 0; i < 5; ++i) {
      const Vector z = rng.ball_point(t.n, 0.8);
      const Vector w = rng.ball_point(t.n, 0.8);
      CHECK(check_theta_identity(t, dd, z, w) <= 1e-10);
    }
  }
}

TEST_CASE("kernel factorization identity") {
  Rng rng(349);
  const OperatorTuple zero =
      make_checked(2, {Matrix::Zero(1, 1), Matrix::Zero(1, 1)});
  const DefectData zdd = defects(zero);
  CHECK(check_kernel_identity(zero, zdd, rng.ball_point(2, 0.9),
                              rng.ball_point(2, 0.9)) <= 1e-14);
  for (int trial = 0; trial < 10; ++trial) {
    const OperatorTuple t =
        random_commuting_tuple(rng, 1 + trial % 3, 2 + trial % 5);
    const DefectData dd = defects(t);
    for (int i = 0; i < 5; ++i) {
      const Vector z = rng.ball_point(t.n, 0.8);
      const Vector w = rng.ball_point(t.n, 0.8);
      CHECK(check_kernel_identity(t, dd, z, w) <= 1e-10);
      CHECK(check_kernel_identity(t, dd, z, z) <= 1e-10);
    }
  }
}

TEST_CASE("theta is contractive and the kernel Gram is PSD") {
  Rng rng(353);
  const OperatorTuple t = random_commuting_tuple(rng, 2, 4, 0.02);
  const DefectData dd = defects(t);
  const auto grid = ball_grid(2, 40, 0.85, 1234);
  const int rs = dd.basis_DTstar.dim();
  Matrix gram(5 * rs, 5 * rs);
  std::vector<Matrix> ks;
  for (int i = 0; i < 5; ++i) ks.push_back(eval_kT(t, dd, grid[i + 1]));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      gram.block(i * rs, j * rs, rs, rs) = ks[i].adjoint() * ks[j];
  const Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(gram));
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  for (const Vector& z : grid)
    CHECK(op_norm(eval_theta(t, dd, z)) <= 1.0 + 1e-8);
}

TEST_CASE("sample_theta records the grid and the values") {
  const OperatorTuple t = make_checked(1, {scalar_matrix(0.5)});
  const DefectData dd = defects(t);
  const auto grid = ball_grid(1, 12, 0.8, 5);
  const SampledOperatorFunction f = sample_theta(t, dd, grid);
  CHECK(f.domain_dim == 1);
  CHECK(f.codomain_dim == 1);
  REQUIRE(f.samples.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(max_abs(f.samples[i] - eval_theta(t, dd, grid[i])) == 0.0);
}

TEST_CASE("support of simple sampled functions") {
  const auto grid = ball_grid(2, 12, 0.8, 17);
  const SampledOperatorFunction full = constant_function(eye(2), grid);
  CHECK(support(full, 1e-10).dim() == 2);

  Matrix second(1, 2);
  second << Complex(0, 0), Complex(1, 0);
  const Subspace s = support(constant_function(second, grid), 1e-10);
  REQUIRE(s.dim() == 1);
  Matrix p_oracle = Matrix::Zero(2, 2);
  p_oracle(1, 1) = 1.0;
  CHECK(max_abs(s.projector() - p_oracle) <= 1e-13);

  const OperatorTuple zero =
      make_checked(2, {Matrix::Zero(1, 1), Matrix::Zero(1, 1)});
  const DefectData dd = defects(zero);
  const SampledOperatorFunction row = sample_theta(zero, dd, grid);
  CHECK(support(row, 1e-10).dim() == 2);

  SampledOperatorFunction empty;
  empty.domain_dim = 1;
  empty.codomain_dim = 1;
  CHECK_THROWS_WITH_AS(support(empty, 1e-10),
                       doctest::Contains("EmptySamples"), Error);
}

TEST_CASE("weak coincidence: reflexive and unitarily twisted") {
  Rng rng(359);
  const OperatorTuple t = random_nilpotent_tuple(rng, 2, 3);
  const DefectData dd = defects(t);
  const auto grid = ball_grid(2, 20, 0.6, 23);
  const SampledOperatorFunction f = sample_theta(t, dd, grid);

  const CoincidenceResult same = decide_weak_coincidence(f, f, 1e-10);
  REQUIRE(same.ok());
  CHECK(same.witness->residual <= 1e-12);
  CHECK(max_abs(same.witness->tau_star * same.witness->tau_star.adjoint() -
                eye(f.codomain_dim)) <= 1e-10);

  const Matrix q = rng.unitary(f.codomain_dim);
  const Matrix r = rng.unitary(f.domain_dim);
  SampledOperatorFunction g = f;
  for (Matrix& m : g.samples) m = q * m * r.adjoint();
  const CoincidenceResult res = decide_weak_coincidence(f, g, 1e-9);
  REQUIRE(res.ok());
  CHECK(res.witness->residual <= 1e-9);
  // Verify the witness by direct substitution on a few sample pairs.
  const Matrix& ts = res.witness->tau_star;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(max_abs(g.samples[i] * g.samples[j].adjoint() -
                    ts * f.samples[i] * f.samples[j].adjoint() *
                        ts.adjoint()) <= 1e-9);

  // Symmetric direction must succeed as well.
  CHECK(decide_weak_coincidence(g, f, 1e-9).ok());
}

TEST_CASE("weak coincidence refuses unrelated functions") {
  const auto grid = ball_grid(1, 10, 0.5, 29);
  const SampledOperatorFunction one =
      constant_function(eye(1), grid);
  const SampledOperatorFunction half =
      constant_function(0.5 * eye(1), grid);
  const CoincidenceResult res = decide_weak_coincidence(one, half, 1e-9);
  CHECK(!res.ok());
  CHECK(res.reason != NoSolutionReason::None);

  SampledOperatorFunction other = one;
  other.points = ball_grid(1, 10, 0.5, 30);
  CHECK_THROWS_WITH_AS(decide_weak_coincidence(one, other, 1e-9),
                       doctest::Contains("GridMismatch"), Error);

  const SampledOperatorFunction wide = constant_function(eye(2), grid);
  const CoincidenceResult mis = decide_weak_coincidence(one, wide, 1e-9);
  CHECK(!mis.ok());
  CHECK(mis.reason == NoSolutionReason::CodomainMismatch);
}

TEST_CASE("coincidence of a function with itself is strong") {
  Rng rng(367);
  const OperatorTuple t = random_nilpotent_tuple(rng, 2, 3);
  const DefectData dd = defects(t);
  const auto grid = ball_grid(2, 20, 0.6, 31);
  const SampledOperatorFunction f = sample_theta(t, dd, grid);
  const CoincidenceResult res = decide_coincidence(f, f, 1e-9);
  REQUIRE(res.ok());
  CHECK(res.witness->kind == CoincidenceKind::Strong);
  REQUIRE(res.witness->tau.has_value());
  CHECK(max_abs(res.witness->tau->adjoint() * *res.witness->tau -
                eye(f.domain_dim)) <= 1e-9);
}

TEST_CASE("coincidence under tuple conjugation") {
  Rng rng(373);
  for (int trial = 0; trial < 3; ++trial) {
    const OperatorTuple t = random_nilpotent_tuple(rng, 1 + trial, 3);
    const Matrix q = rng.unitary(3);
    const OperatorTuple r = conjugated(t, q);
    const auto grid = ball_grid(t.n, 20, 0.6, 41 + trial);
    const SampledOperatorFunction f = sample_theta(t, defects(t), grid);
    const SampledOperatorFunction g = sample_theta(r, defects(r), grid);
    const CoincidenceResult res = decide_coincidence(f, g, 1e-9);
    REQUIRE(res.ok());
    CHECK(res.witness->kind == CoincidenceKind::Strong);
    CHECK(res.witness->residual <= 1e-9);

    const CoincidenceResult weak = decide_weak_coincidence(f, g, 1e-9);
    REQUIRE(weak.ok());
  }
}

TEST_CASE("constant embeddings coincide weakly but not strongly") {
  const auto grid = ball_grid(2, 16, 0.7, 43);
  const SampledOperatorFunction phi = constant_function(eye(1), grid);
  Matrix psi_val(1, 2);
  psi_val << Complex(0, 0), Complex(1, 0);
  const SampledOperatorFunction psi = constant_function(psi_val, grid);

  const CoincidenceResult weak = decide_weak_coincidence(phi, psi, 1e-10);
  REQUIRE(weak.ok());
  CHECK(weak.witness->residual <= 1e-12);

  const CoincidenceResult strong = decide_coincidence(phi, psi, 1e-10);
  CHECK(!strong.ok());
  CHECK(strong.reason == NoSolutionReason::ComplementMismatch);
}
