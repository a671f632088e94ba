#pragma once

#include <iosfwd>
#include <string>

#include "cct/beurling.hpp"
#include "cct/charfn.hpp"
#include "cct/fock.hpp"
#include "cct/tuple.hpp"

namespace cct {

// Shortest representation that round-trips a double (printf %.17g).
std::string format_double(double v);

// Tuple files: {"n": int, "d": int, "tol": float, "matrices": [n matrices,
// each d rows of d [re, im] pairs]}. tol defaults to 1e-9 when absent.
// Malformed text or shapes raise ParseError; the tuple is not validated here.
OperatorTuple tuple_from_json_text(const std::string& text);
std::string tuple_to_json_text(const OperatorTuple& t);

// Multiplier symbols: {"n": int, "dom": int, "codom": int, "coeffs":
// [{"k": [int,...], "matrix": [[[re,im],...]]}]}.
TaylorCoefficients taylor_from_json_text(const std::string& text);
std::string taylor_to_json_text(const TaylorCoefficients& tc);

// Invariant subspaces: {"n": int, "N": int, "coeff_dim": int, "tol": float,
// "basis": [columns, each a list of ambient_dim [re, im] pairs]}.
InvariantSubspace subspace_from_json_text(const std::string& text);
std::string subspace_to_json_text(const InvariantSubspace& m);

// One row per (sample, entry): sample, re(z_1..z_n), im(z_1..z_n), row, col,
// re, im; a single header line in front.
void write_samples_csv(std::ostream& os, const SampledOperatorFunction& f);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace cct
