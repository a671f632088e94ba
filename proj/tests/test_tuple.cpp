#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "cct/grid.hpp"
#include "cct/linalg.hpp"
#include "cct/tuple.hpp"
#include "support.hpp"

using namespace cct;
using cct::testing::make_checked;
using cct::testing::random_commuting_tuple;
using cct::testing::random_nilpotent_tuple;
using cct::testing::scalar_matrix;

namespace {

OperatorTuple zero_tuple(int n, int d) {
  return make_checked(n, std::vector<Matrix>(n, Matrix::Zero(d, d)));
}

// Commuting coisometric pair of coordinate projections on C^2.
OperatorTuple projection_pair() {
  Matrix t1 = Matrix::Zero(2, 2), t2 = Matrix::Zero(2, 2);
  t1(0, 0) = 1.0;
  t2(1, 1) = 1.0;
  return make_checked(2, {t1, t2});
}

OperatorTuple diag_half() {
  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = 1.0;
  t(1, 1) = 0.5;
  return make_checked(1, {t});
}

}  // namespace

TEST_CASE("validate accepts simple contractive tuples") {
  CHECK_NOTHROW(zero_tuple(2, 3));
  Matrix t1(2, 2), t2(2, 2);
  t1 << 0, Complex(1.0 / std::sqrt(2.0)), 0, 0;
  t2.setZero();
  const OperatorTuple t = make_checked(2, {t1, t2});
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  CHECK(max_abs(sum_TT_adj(t) - expected) <= 1e-15);
}

TEST_CASE("validate rejects an expanded identity") {
  OperatorTuple t{1, 2, {2.0 * eye(2)}, 1e-9};
  try {
    validate(t);
    FAIL("expected NotRowContraction");
  } catch (const NotRowContractionError& e) {
    CHECK(std::abs(e.excess - 3.0) <= 1e-12);
  }
}

TEST_CASE("validate rejects noncommuting pairs and names the offender") {
  Matrix t1 = Matrix::Zero(2, 2), t2 = Matrix::Zero(2, 2);
  t1(0, 1) = 0.5;
  t2(1, 0) = 0.5;
  OperatorTuple t{2, 2, {t1, t2}, 1e-9};
  try {
    validate(t);
    FAIL("expected NonCommuting");
  } catch (const NonCommutingError& e) {
    CHECK(e.i == 0);
    CHECK(e.j == 1);
    CHECK(std::abs(e.magnitude - 0.25) <= 1e-12);
  }
}

TEST_CASE("validate rejects a commuting pair overloading one coordinate") {
  // Two copies of the same projection commute, but the row operator piles
  // them both onto e1 and ends with norm sqrt(2).
  Matrix t1 = Matrix::Zero(2, 2);
  t1(0, 0) = 1.0;
  OperatorTuple t{2, 2, {t1, t1}, 1e-9};
  try {
    validate(t);
    FAIL("expected NotRowContraction");
  } catch (const NotRowContractionError& e) {
    CHECK(std::abs(e.excess - 1.0) <= 1e-12);
  }
}

TEST_CASE("validate rejects malformed shapes") {
  CHECK_THROWS_AS(validate(OperatorTuple{0, 1, {}, 1e-9}), Error);
  CHECK_THROWS_AS(validate(OperatorTuple{2, 2, {eye(2)}, 1e-9}), Error);
  CHECK_THROWS_AS(validate(OperatorTuple{1, 2, {eye(3)}, 1e-9}), Error);
}

TEST_CASE("row_op and z contractions") {
  const OperatorTuple t = projection_pair();
  const Matrix r = row_op(t);
  CHECK(r.rows() == 2);
  CHECK(r.cols() == 4);
  CHECK(max_abs(r.leftCols(2) - t.T[0]) == 0.0);
  CHECK(max_abs(r.rightCols(2) - t.T[1]) == 0.0);

  Vector z(2);
  z << Complex(0.3, 0.1), Complex(-0.2, 0.4);
  CHECK(max_abs(z_dot_Tadj(t, z) -
                (z(0) * t.T[0].adjoint() + z(1) * t.T[1].adjoint())) == 0.0);
  CHECK(max_abs(T_dot_zadj(t, z) -
                (std::conj(z(0)) * t.T[0] + std::conj(z(1)) * t.T[1])) == 0.0);
  CHECK(max_abs(z_row(z, 2) * kron(Vector::Ones(2).eval(), eye(2)) -
                (z(0) + z(1)) * eye(2)) <= 1e-15);
}

TEST_CASE("defects of the zero tuple are identities") {
  const OperatorTuple t = zero_tuple(2, 3);
  const DefectData dd = defects(t);
  CHECK(max_abs(dd.D_T - eye(6)) <= 1e-14);
  CHECK(max_abs(dd.D_Tstar - eye(3)) <= 1e-14);
  CHECK(dd.basis_DT.dim() == 6);
  CHECK(dd.basis_DTstar.dim() == 3);
}

TEST_CASE("defects of a scalar contraction") {
  const OperatorTuple t = make_checked(1, {scalar_matrix(0.5)});
  const DefectData dd = defects(t);
  const double root = std::sqrt(3.0) / 2.0;
  CHECK(std::abs(dd.D_T(0, 0) - root) <= 1e-14);
  CHECK(std::abs(dd.D_Tstar(0, 0) - root) <= 1e-14);
}

TEST_CASE("defects of the coisometric projection pair") {
  const OperatorTuple t = projection_pair();
  const DefectData dd = defects(t);
  CHECK(max_abs(sum_TT_adj(t) - eye(2)) == 0.0);
  CHECK(max_abs(dd.D_Tstar) <= 1e-12);
  CHECK(dd.basis_DTstar.dim() == 0);
  const int gram_rank = range_basis(gram_TstarT(t), 1e-10).dim();
  CHECK(dd.basis_DT.dim() == 4 - gram_rank);
}

TEST_CASE("defect intertwining relation") {
  Rng rng(211);
  for (int trial = 0; trial < 8; ++trial) {
    const OperatorTuple t = random_commuting_tuple(rng, 1 + trial % 3,
                                                   2 + trial % 4);
    const DefectData dd = defects(t);
    const Matrix r = row_op(t);
    CHECK(max_abs(r * dd.D_T - dd.D_Tstar * r) <= 1e-10);
    CHECK(max_abs(dd.D_Tstar * dd.D_Tstar + sum_TT_adj(t) - eye(t.d)) <=
          1e-10);
    CHECK(max_abs(dd.D_T * dd.D_T + gram_TstarT(t) - eye(t.n * t.d)) <= 1e-10);
  }
}

TEST_CASE("apply_PT on diagonal data") {
  CHECK(max_abs(apply_PT(zero_tuple(2, 2), eye(2))) == 0.0);
  const OperatorTuple t = diag_half();
  CHECK(max_abs(apply_PT(t, Matrix::Zero(2, 2))) == 0.0);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  expected(1, 1) = 0.25;
  CHECK(max_abs(apply_PT(t, eye(2)) - expected) <= 1e-15);
  CHECK_THROWS_AS(apply_PT(t, eye(3)), Error);
}

TEST_CASE("limit_AT fixed points") {
  Matrix u(2, 2);
  u << 0, 1, 1, 0;
  const OperatorTuple perm = make_checked(1, {u});
  const ATResult unit = limit_AT(perm, 1e-12);
  CHECK(max_abs(unit.A_T - eye(2)) <= 1e-14);
  CHECK(unit.iterations <= 2);

  const ATResult half = limit_AT(diag_half(), 1e-9);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK(max_abs(half.A_T - expected) <= 1e-8);

  Rng rng(229);
  const OperatorTuple nil = random_nilpotent_tuple(rng, 2, 4);
  const ATResult gone = limit_AT(nil, 1e-13);
  CHECK(max_abs(gone.A_T) <= 1e-13);
  CHECK(gone.iterations <= nil.d + 2);

  CHECK_THROWS_WITH_AS(limit_AT(diag_half(), 1e-9, 3),
                       doctest::Contains("NoConvergence"), Error);
}

TEST_CASE("limit_AT chain is monotone and P_T-fixed") {
  Rng rng(233);
  for (int trial = 0; trial < 6; ++trial) {
    const OperatorTuple t = random_commuting_tuple(rng, 1 + trial % 3, 3);
    Matrix x = eye(t.d);
    for (int k = 0; k < 12; ++k) {
      const Matrix next = apply_PT(t, x);
      const Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(x - next));
      CHECK(es.eigenvalues().minCoeff() >= -1e-11);
      x = next;
    }
    const ATResult res = limit_AT(t, 1e-11);
    CHECK(max_abs(apply_PT(t, res.A_T) - res.A_T) <= 1e-10);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(res.A_T));
    CHECK(es.eigenvalues().minCoeff() >= -1e-11);
    CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-11);
  }
}

TEST_CASE("cnc_kernel isolates the unitary part") {
  const OperatorTuple t = diag_half();
  const Subspace k = cnc_kernel(t, defects(t));
  REQUIRE(k.dim() == 1);
  Matrix p_oracle = Matrix::Zero(2, 2);
  p_oracle(0, 0) = 1.0;
  CHECK(max_abs(k.projector() - p_oracle) <= 1e-12);

  const OperatorTuple z = zero_tuple(2, 3);
  CHECK(cnc_kernel(z, defects(z)).dim() == 0);

  Matrix u(2, 2);
  u << 0, 1, 1, 0;
  const OperatorTuple perm = make_checked(1, {u});
  CHECK(cnc_kernel(perm, defects(perm)).dim() == 2);
}

TEST_CASE("cnc_kernel output is invariant and defect-annihilated") {
  Rng rng(239);
  for (int trial = 0; trial < 6; ++trial) {
    const OperatorTuple t = random_commuting_tuple(rng, 2, 4, 0.02);
    const DefectData dd = defects(t);
    const Subspace k = cnc_kernel(t, dd);
    if (k.dim() == 0) continue;
    CHECK(max_abs(dd.D_Tstar * k.basis) <= 1e-9);
    const Matrix p = k.projector();
    for (const Matrix& ti : t.T)
      CHECK(max_abs((eye(t.d) - p) * ti.adjoint() * p) <= 1e-9);
  }
}

TEST_CASE("classify the zero tuple") {
  const ClassificationReport rep = classify(zero_tuple(2, 2));
  CHECK(rep.is_pure);
  CHECK(rep.is_cnc);
  CHECK(!rep.is_coisometric);
  CHECK(!rep.is_spherical_isometry);
  CHECK(max_abs(rep.A_T) <= 1e-12);
  CHECK(rep.cnc_kernel.dim() == 0);
}

TEST_CASE("classify a unitary") {
  Matrix u(2, 2);
  u << 0, 1, 1, 0;
  const ClassificationReport rep = classify(make_checked(1, {u}));
  CHECK(rep.is_coisometric);
  CHECK(rep.is_spherical_isometry);
  CHECK(!rep.is_pure);
  CHECK(!rep.is_cnc);
}

TEST_CASE("classify the coisometric projection pair") {
  const ClassificationReport rep = classify(projection_pair());
  CHECK(rep.is_coisometric);
  CHECK(!rep.is_pure);
  CHECK(!rep.is_cnc);
  CHECK(rep.cnc_kernel.dim() == 2);
}

TEST_CASE("A_T is a fixed point of P_T across a random corpus") {
  Rng rng(241);
  for (int trial = 0; trial < 10; ++trial) {
    const OperatorTuple t =
        random_commuting_tuple(rng, 1 + trial % 4, 2 + trial % 5, 0.05);
    const ClassificationReport rep = classify(t);
    CHECK(max_abs(apply_PT(t, rep.A_T) - rep.A_T) <= 1e-8);
    if (rep.is_pure) CHECK(rep.is_cnc);
  }
}
