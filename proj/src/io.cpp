#include "cct/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cct {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw Error("ParseError", e.what());
  }
}

Complex entry_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error("ParseError", "matrix entry must be a [re, im] pair");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Matrix matrix_from_json(const ordered_json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw Error("ParseError", "matrix has the wrong number of rows");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw Error("ParseError", "matrix has the wrong number of columns");
    }
    for (int c = 0; c < cols; ++c) m(i, c) = entry_from_json(row[c]);
  }
  return m;
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(i, c).real(), m(i, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int int_field(const ordered_json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_number_integer()) {
    throw Error("ParseError", std::string("missing integer field '") + name + "'");
  }
  return j[name].get<int>();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

OperatorTuple tuple_from_json_text(const std::string& text) {
  const ordered_json j = parse(text);
  const int n = int_field(j, "n");
  const int d = int_field(j, "d");
  if (n < 0 || d < 0) throw Error("ParseError", "n and d must be nonnegative");
  double tol = 1e-9;
  if (j.contains("tol")) {
    if (!j["tol"].is_number()) throw Error("ParseError", "tol must be a number");
    tol = j["tol"].get<double>();
  }
  if (!j.contains("matrices") || !j["matrices"].is_array() ||
      static_cast<int>(j["matrices"].size()) != n) {
    throw Error("ParseError", "'matrices' must list exactly n matrices");
  }
  std::vector<Matrix> mats;
  mats.reserve(n);
  for (const auto& m : j["matrices"]) mats.push_back(matrix_from_json(m, d, d));
  return OperatorTuple{n, d, std::move(mats), tol};
}

std::string tuple_to_json_text(const OperatorTuple& t) {
  ordered_json j;
  j["n"] = t.n;
  j["d"] = t.d;
  j["tol"] = t.tol;
  ordered_json mats = ordered_json::array();
  for (const Matrix& m : t.T) mats.push_back(matrix_to_json(m));
  j["matrices"] = std::move(mats);
  return j.dump(2) + "\n";
}

TaylorCoefficients taylor_from_json_text(const std::string& text) {
  const ordered_json j = parse(text);
  TaylorCoefficients tc;
  tc.n = int_field(j, "n");
  tc.domain_dim = int_field(j, "dom");
  tc.codomain_dim = int_field(j, "codom");
  if (tc.n < 0 || tc.domain_dim < 0 || tc.codomain_dim < 0) {
    throw Error("ParseError", "dimensions must be nonnegative");
  }
  if (!j.contains("coeffs") || !j["coeffs"].is_array()) {
    throw Error("ParseError", "missing 'coeffs' list");
  }
  for (const auto& item : j["coeffs"]) {
    if (!item.contains("k") || !item["k"].is_array() ||
        static_cast<int>(item["k"].size()) != tc.n) {
      throw Error("ParseError", "each coefficient needs a length-n index 'k'");
    }
    MultiIndex k(tc.n);
    for (int i = 0; i < tc.n; ++i) {
      if (!item["k"][i].is_number_integer() || item["k"][i].get<int>() < 0) {
        throw Error("ParseError", "multi-indices are nonnegative integers");
      }
      k[i] = item["k"][i].get<int>();
    }
    if (tc.pos.count(k)) throw Error("ParseError", "duplicate multi-index");
    if (!item.contains("matrix")) throw Error("ParseError", "missing 'matrix'");
    tc.pos[k] = static_cast<int>(tc.degrees.size());
    tc.degrees.push_back(std::move(k));
    tc.coeffs.push_back(
        matrix_from_json(item["matrix"], tc.codomain_dim, tc.domain_dim));
  }
  return tc;
}

std::string taylor_to_json_text(const TaylorCoefficients& tc) {
  ordered_json j;
  j["n"] = tc.n;
  j["dom"] = tc.domain_dim;
  j["codom"] = tc.codomain_dim;
  ordered_json coeffs = ordered_json::array();
  for (std::size_t q = 0; q < tc.degrees.size(); ++q) {
    ordered_json item;
    item["k"] = tc.degrees[q];
    item["matrix"] = matrix_to_json(tc.coeffs[q]);
    coeffs.push_back(std::move(item));
  }
  j["coeffs"] = std::move(coeffs);
  return j.dump(2) + "\n";
}

InvariantSubspace subspace_from_json_text(const std::string& text) {
  const ordered_json j = parse(text);
  const int n = int_field(j, "n");
  const int N = int_field(j, "N");
  const int coeff_dim = int_field(j, "coeff_dim");
  double tol = 1e-9;
  if (j.contains("tol")) tol = j["tol"].get<double>();
  InvariantSubspace m;
  m.space = build_space(n, N, coeff_dim);
  const int amb = m.space.ambient_dim();
  if (!j.contains("basis") || !j["basis"].is_array()) {
    throw Error("ParseError", "missing 'basis' list of columns");
  }
  const int dim = static_cast<int>(j["basis"].size());
  Matrix basis(amb, dim);
  for (int c = 0; c < dim; ++c) {
    const auto& col = j["basis"][c];
    if (!col.is_array() || static_cast<int>(col.size()) != amb) {
      throw Error("ParseError", "basis column has the wrong length");
    }
    for (int i = 0; i < amb; ++i) basis(i, c) = entry_from_json(col[i]);
  }
  // Orthonormality is part of the format contract.
  if (max_abs(Matrix(basis.adjoint() * basis - eye(dim))) > 1e-8) {
    throw Error("ParseError", "basis columns are not orthonormal");
  }
  m.basis = Subspace{amb, std::move(basis), tol};
  return m;
}

std::string subspace_to_json_text(const InvariantSubspace& m) {
  ordered_json j;
  j["n"] = m.space.n;
  j["N"] = m.space.N;
  j["coeff_dim"] = m.space.coeff_dim;
  j["tol"] = m.basis.tol;
  ordered_json cols = ordered_json::array();
  for (Eigen::Index c = 0; c < m.basis.basis.cols(); ++c) {
    ordered_json col = ordered_json::array();
    for (Eigen::Index i = 0; i < m.basis.basis.rows(); ++i) {
      col.push_back({m.basis.basis(i, c).real(), m.basis.basis(i, c).imag()});
    }
    cols.push_back(std::move(col));
  }
  j["basis"] = std::move(cols);
  return j.dump(2) + "\n";
}

void write_samples_csv(std::ostream& os, const SampledOperatorFunction& f) {
  const int n = f.points.empty() ? 0 : static_cast<int>(f.points.front().size());
  os << "sample";
  for (int i = 1; i <= n; ++i) os << ",re_z" << i;
  for (int i = 1; i <= n; ++i) os << ",im_z" << i;
  os << ",row,col,re,im\n";
  for (std::size_t s = 0; s < f.points.size(); ++s) {
    std::ostringstream point;
    for (int i = 0; i < n; ++i) point << ',' << format_double(f.points[s](i).real());
    for (int i = 0; i < n; ++i) point << ',' << format_double(f.points[s](i).imag());
    const Matrix& m = f.samples[s];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        os << s << point.str() << ',' << r << ',' << c << ','
           << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag())
           << '\n';
      }
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("ParseError", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("ParseError", "cannot write " + path);
  out << content;
}

}  // namespace cct
