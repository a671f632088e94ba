#include <doctest.h>

#include <cmath>
#include <vector>

#include "cct/charfn.hpp"
#include "cct/fock.hpp"
#include "cct/grid.hpp"
#include "cct/linalg.hpp"
#include "cct/tuple.hpp"
#include "support.hpp"

using namespace cct;
using cct::testing::make_checked;
using cct::testing::random_nilpotent_tuple;
using cct::testing::scalar_matrix;

namespace {

double gamma_oracle(const MultiIndex& k) {
  long long num = 1;
  int total = 0;
  for (int ki : k) total += ki;
  for (int i = 2; i <= total; ++i) num *= i;
  long long den = 1;
  for (int ki : k)
    for (int i = 2; i <= ki; ++i) den *= i;
  return double(num) / double(den);
}

long long binomial(int a, int b) {
  long long r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

Complex monomial(const Vector& z, const MultiIndex& k) {
  Complex p = 1.0;
  for (std::size_t i = 0; i < k.size(); ++i)
    for (int rep = 0; rep < k[i]; ++rep) p *= z(static_cast<int>(i));
  return p;
}

}  // namespace

TEST_CASE("gamma_weight matches the multinomial formula") {
  for (int n : {1, 2, 3}) {
    const TruncatedFockSpace s = build_space(n, 6, 1);
    for (std::size_t i = 0; i < s.indices.size(); ++i) {
      const double oracle = gamma_oracle(s.indices[i]);
      CHECK(std::abs(s.gamma[i] - oracle) <= 1e-12 * oracle);
    }
  }
  CHECK(gamma_weight({1, 1}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gamma_weight({2, 2}) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(gamma_weight({0, 0, 0}) == 1.0);
  CHECK(total_degree({3, 0, 2}) == 5);
}

TEST_CASE("graded enumeration for two variables") {
  const TruncatedFockSpace s = build_space(2, 2, 1);
  REQUIRE(s.index_count() == 6);
  CHECK(s.ambient_dim() == 6);
  const std::vector<MultiIndex> expected = {{0, 0}, {1, 0}, {0, 1},
                                            {2, 0}, {1, 1}, {0, 2}};
  CHECK(s.indices == expected);
  const std::vector<double> gammas = {1, 1, 1, 1, 2, 1};
  for (int i = 0; i < 6; ++i)
    CHECK(s.gamma[i] == doctest::Approx(gammas[i]).epsilon(1e-14));
  CHECK(s.pos.at({1, 1}) == 4);
  CHECK(s.degree_count(0) == 1);
  CHECK(s.degree_count(1) == 3);
  CHECK(s.degree_count(2) == 6);
}

TEST_CASE("space dimensions follow the binomial count") {
  for (int n : {1, 2, 3}) {
    for (int N : {0, 1, 4}) {
      const TruncatedFockSpace s = build_space(n, N, 3);
      CHECK(s.index_count() == binomial(N + n, n));
      CHECK(s.ambient_dim() == 3 * s.index_count());
    }
  }
  const TruncatedFockSpace single = build_space(1, 5, 2);
  for (double g : single.gamma) CHECK(g == 1.0);
  CHECK(build_space(2, 3, 0).ambient_dim() == 0);
  CHECK_THROWS_WITH_AS(build_space(2, 200, 1, 100),
                       doctest::Contains("SizeOverflow"), Error);
}

TEST_CASE("shifts raise the degree with the weight ratio") {
  const TruncatedFockSpace s = build_space(2, 1, 1);
  const auto m = shift_matrices(s);
  REQUIRE(m.size() == 2);
  Matrix m1 = Matrix::Zero(3, 3), m2 = Matrix::Zero(3, 3);
  m1(1, 0) = 1.0;
  m2(2, 0) = 1.0;
  CHECK(max_abs(m[0] - m1) == 0.0);
  CHECK(max_abs(m[1] - m2) == 0.0);
}

TEST_CASE("shift entries across degrees") {
  const TruncatedFockSpace s = build_space(2, 3, 2);
  const auto m = shift_matrices(s);
  for (std::size_t p = 0; p < s.indices.size(); ++p) {
    for (int i = 0; i < 2; ++i) {
      MultiIndex up = s.indices[p];
      up[i] += 1;
      if (total_degree(up) > s.N) {
        CHECK(max_abs(Matrix(m[i].middleCols(2 * p, 2))) == 0.0);
        continue;
      }
      const int q = s.pos.at(up);
      const double ratio = std::sqrt(s.gamma[p] / s.gamma[q]);
      CHECK(std::abs(m[i](2 * q, 2 * p) - ratio) <= 1e-15);
      CHECK(std::abs(m[i](2 * q + 1, 2 * p + 1) - ratio) <= 1e-15);
    }
  }
}

TEST_CASE("shifts commute and complement the constants") {
  const TruncatedFockSpace s = build_space(2, 4, 1);
  const auto m = shift_matrices(s);
  CHECK(max_abs(m[0] * m[1] - m[1] * m[0]) <= 1e-14);
  Matrix sum = Matrix::Zero(s.ambient_dim(), s.ambient_dim());
  for (const Matrix& mi : m) sum += mi * mi.adjoint();
  Matrix p_const = Matrix::Zero(s.ambient_dim(), s.ambient_dim());
  p_const(0, 0) = 1.0;
  CHECK(max_abs(sum + p_const - eye(s.ambient_dim())) <= 1e-14);

  OperatorTuple shifts{2, s.ambient_dim(), m, 1e-9};
  CHECK_NOTHROW(validate(shifts));
}

TEST_CASE("kernel_vector and evaluate reproduce point values") {
  const TruncatedFockSpace s = build_space(2, 3, 2);
  Rng rng(501);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector z = rng.ball_point(2, 0.8);
    const Vector kv = kernel_vector(s, z);
    REQUIRE(kv.size() == s.index_count());
    for (std::size_t i = 0; i < s.indices.size(); ++i) {
      const Complex oracle =
          std::sqrt(s.gamma[i]) * std::conj(monomial(z, s.indices[i]));
      CHECK(std::abs(kv(static_cast<int>(i)) - oracle) <= 1e-14);
    }

    const Vector coeffs = rng.gaussian_matrix(s.ambient_dim(), 1).col(0);
    const Vector x = rng.gaussian_matrix(2, 1).col(0);
    const Vector val = evaluate(s, coeffs, z);
    Complex direct = 0.0;
    for (std::size_t i = 0; i < s.indices.size(); ++i) {
      const Complex mono =
          std::sqrt(s.gamma[i]) * monomial(z, s.indices[i]);
      for (int j = 0; j < 2; ++j)
        direct += std::conj(x(j)) * mono * coeffs(2 * int(i) + j);
    }
    const Complex via_kernel =
        (kron(Matrix(kv), Matrix(x)).adjoint() * coeffs)(0, 0);
    const Complex via_value = (x.adjoint() * val)(0);
    CHECK(std::abs(via_kernel - via_value) <= 1e-12);
    CHECK(std::abs(direct - via_value) <= 1e-12);
  }
}

TEST_CASE("taylor coefficients of the zero tuple are coordinate rows") {
  const OperatorTuple t =
      make_checked(2, {Matrix::Zero(1, 1), Matrix::Zero(1, 1)});
  const DefectData dd = defects(t);
  const TaylorCoefficients tc = theta_taylor(t, dd, 3);
  CHECK(tc.domain_dim == 2);
  CHECK(tc.codomain_dim == 1);
  CHECK(max_abs(tc.coeff({0, 0})) <= 1e-15);
  for (int j = 0; j < 2; ++j) {
    MultiIndex beta = {0, 0};
    beta[j] = 1;
    // Undo the bases; the ambient coefficient selects the j-th block.
    const Matrix amb = dd.basis_DTstar.basis * tc.coeff(beta) *
                       dd.basis_DT.basis.adjoint();
    Matrix oracle = Matrix::Zero(1, 2);
    oracle(0, j) = 1.0;
    CHECK(max_abs(amb - oracle) <= 1e-14);
  }
  CHECK(max_abs(tc.coeff({1, 1})) <= 1e-14);
  CHECK(max_abs(tc.coeff({2, 0})) <= 1e-14);
}

TEST_CASE("taylor coefficients of a scalar contraction are geometric") {
  const OperatorTuple t = make_checked(1, {scalar_matrix(0.5)});
  const TaylorCoefficients tc = theta_taylor(t, defects(t), 8);
  CHECK(std::abs(tc.coeff({0})(0, 0) - Complex(-0.5)) <= 1e-15);
  for (int m = 1; m <= 8; ++m) {
    const double oracle = 0.75 * std::pow(0.5, m - 1);
    CHECK(std::abs(tc.coeff({m})(0, 0) - oracle) <= 1e-14);
  }
  CHECK(tc.max_degree() == 8);
}

TEST_CASE("taylor expansion terminates for nilpotent tuples") {
  Rng rng(509);
  const OperatorTuple t = random_nilpotent_tuple(rng, 2, 4);
  const DefectData dd = defects(t);
  const TaylorCoefficients tc = theta_taylor(t, dd, 9);
  for (std::size_t i = 0; i < tc.degrees.size(); ++i) {
    if (total_degree(tc.degrees[i]) > t.d)
      CHECK(max_abs(tc.coeffs[i]) <= 1e-13);
  }
  // The terminating series is an exact evaluation formula.
  for (int i = 0; i < 8; ++i) {
    const Vector z = rng.ball_point(2, 0.9);
    CHECK(max_abs(eval_taylor(tc, z) - eval_theta(t, dd, z)) <= 1e-12);
  }
}

TEST_CASE("eval_taylor is plain polynomial evaluation") {
  TaylorCoefficients tc;
  tc.n = 2;
  tc.domain_dim = 1;
  tc.codomain_dim = 1;
  tc.degrees = {{0, 0}, {1, 1}};
  tc.coeffs = {scalar_matrix(2.0), scalar_matrix(Complex(0, 1))};
  tc.pos[{0, 0}] = 0;
  tc.pos[{1, 1}] = 1;
  Vector z(2);
  z << Complex(0.2, 0.1), Complex(-0.3, 0.0);
  const Complex oracle = 2.0 + Complex(0, 1) * z(0) * z(1);
  CHECK(std::abs(eval_taylor(tc, z)(0, 0) - oracle) <= 1e-15);
}

TEST_CASE("multiplier of a constant symbol is block diagonal") {
  Rng rng(521);
  const TruncatedFockSpace s = build_space(2, 3, 2);
  TaylorCoefficients tc;
  tc.n = 2;
  tc.domain_dim = 2;
  tc.codomain_dim = 2;
  tc.degrees = {{0, 0}};
  tc.coeffs = {eye(2)};
  tc.pos[{0, 0}] = 0;
  CHECK(max_abs(multiplier_matrix(tc, s, s) - eye(s.ambient_dim())) == 0.0);

  const Matrix u = rng.unitary(2);
  tc.coeffs = {u};
  CHECK(max_abs(multiplier_matrix(tc, s, s) -
                kron(eye(s.index_count()), u)) == 0.0);
}

TEST_CASE("multiplier of the coordinate symbol is the shift") {
  const TruncatedFockSpace s = build_space(1, 5, 1);
  TaylorCoefficients tc;
  tc.n = 1;
  tc.domain_dim = 1;
  tc.codomain_dim = 1;
  tc.degrees = {{1}};
  tc.coeffs = {scalar_matrix(1.0)};
  tc.pos[{1}] = 0;
  CHECK(max_abs(multiplier_matrix(tc, s, s) - shift_matrices(s)[0]) == 0.0);
}

TEST_CASE("multipliers intertwine the shifts exactly") {
  Rng rng(523);
  const OperatorTuple t = random_nilpotent_tuple(rng, 2, 3);
  const DefectData dd = defects(t);
  const TaylorCoefficients tc = theta_taylor(t, dd, 6);
  const TruncatedFockSpace dom = build_space(2, 6, tc.domain_dim);
  const TruncatedFockSpace codom = build_space(2, 6, tc.codomain_dim);
  const Matrix m = multiplier_matrix(tc, dom, codom);
  const auto s_dom = shift_matrices(dom);
  const auto s_codom = shift_matrices(codom);
  for (int i = 0; i < 2; ++i)
    CHECK(max_abs(s_codom[i] * m - m * s_dom[i]) <= 1e-13);
  CHECK(op_norm(m) <= 1.0 + 1e-9);

  CHECK_THROWS_WITH_AS(multiplier_matrix(tc, codom, dom),
                       doctest::Contains("ShapeMismatch"), Error);
  const TruncatedFockSpace other = build_space(2, 5, tc.codomain_dim);
  CHECK_THROWS_WITH_AS(multiplier_matrix(tc, dom, other),
                       doctest::Contains("ShapeMismatch"), Error);
}

TEST_CASE("dilation of the zero scalar tuple is the vacuum embedding") {
  const OperatorTuple t = make_checked(1, {Matrix::Zero(1, 1)});
  const DefectData dd = defects(t);
  const TruncatedFockSpace s = build_space(1, 4, 1);
  const Matrix j = dilation_j(t, dd, s);
  REQUIRE(j.rows() == 5);
  REQUIRE(j.cols() == 1);
  CHECK(std::abs(std::abs(j(0, 0)) - 1.0) <= 1e-15);
  CHECK(max_abs(Matrix(j.bottomRows(4))) <= 1e-15);
  CHECK(std::abs((j.adjoint() * j)(0, 0) - 1.0) <= 1e-14);
}

TEST_CASE("dilation_j is an isometry for nilpotent tuples") {
  Rng rng(541);
  const OperatorTuple t = random_nilpotent_tuple(rng, 2, 3);
  const DefectData dd = defects(t);
  const TruncatedFockSpace s = build_space(2, 6, dd.basis_DTstar.dim());
  const Matrix j = dilation_j(t, dd, s);
  CHECK(max_abs(j.adjoint() * j - eye(t.d)) <= 1e-12);

  const TruncatedFockSpace wrong = build_space(2, 6, t.d + 5);
  CHECK_THROWS_WITH_AS(dilation_j(t, dd, wrong),
                       doctest::Contains("ShapeMismatch"), Error);
}

TEST_CASE("dilation identities for nilpotent tuples") {
  Rng rng(547);
  for (int trial = 0; trial < 4; ++trial) {
    const OperatorTuple t =
        random_nilpotent_tuple(rng, 1 + trial % 3, 2 + trial % 2);
    const DefectData dd = defects(t);
    const TruncatedFockSpace s =
        build_space(t.n, t.d + 4, dd.basis_DTstar.dim());
    const DilationReport rep = check_dilation_identities(t, s);
    CHECK(rep.defect_residual <= 1e-10);
    CHECK(rep.complement_residual <= 1e-10);
    CHECK(rep.intertwine_residual <= 1e-10);
  }
}

TEST_CASE("dilation defect carries exactly the truncation tail") {
  const OperatorTuple t = make_checked(1, {scalar_matrix(0.5)});
  for (int N : {6, 10}) {
    const TruncatedFockSpace s = build_space(1, N, 1);
    const DilationReport rep = check_dilation_identities(t, s, 1e-15, 200000);
    const double tail = std::pow(0.25, N + 1);
    CHECK(rep.defect_residual >= 0.9 * tail);
    CHECK(rep.defect_residual <= 1.1 * tail);
    CHECK(rep.complement_residual <= 1e-12);
    CHECK(rep.intertwine_residual <= 1e-12);
  }
}

TEST_CASE("dilation of a coisometry is trivial") {
  Matrix u(2, 2);
  u << 0, 1, 1, 0;
  const OperatorTuple t = make_checked(1, {u});
  const DefectData dd = defects(t);
  REQUIRE(dd.basis_DTstar.dim() == 0);
  const TruncatedFockSpace s = build_space(1, 3, 0);
  const Matrix j = dilation_j(t, dd, s);
  CHECK(j.rows() == 0);
  CHECK(j.cols() == 2);
  const DilationReport rep = check_dilation_identities(t, s);
  CHECK(rep.defect_residual <= 1e-12);
  CHECK(rep.complement_residual <= 1e-12);
}
