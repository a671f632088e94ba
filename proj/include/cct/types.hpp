#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace cct {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// All failures carry a short machine-readable code (stable across releases,
// used by the CLI to map onto exit codes) plus a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline Error dimension_mismatch(const std::string& what) {
  return Error("DimensionMismatch", what);
}

// Entrywise max modulus. The default residual norm everywhere below.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Largest singular value; 2-norm of the operator.
double op_norm(const Matrix& m);

inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline Matrix eye(Eigen::Index d) { return Matrix::Identity(d, d); }

}  // namespace cct
