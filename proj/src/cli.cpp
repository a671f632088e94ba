#include "cct/cli.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "cct/beurling.hpp"
#include "cct/bounds.hpp"
#include "cct/charfn.hpp"
#include "cct/fock.hpp"
#include "cct/grid.hpp"
#include "cct/io.hpp"
#include "cct/mobius.hpp"
#include "cct/model.hpp"
#include "cct/tuple.hpp"

namespace cct {

namespace {

using ordered_json = nlohmann::ordered_json;

int exit_for(const std::string& code) {
  static const char* input_errors[] = {
      "ParseError",      "DimensionMismatch", "NonCommuting",
      "NotRowContraction", "BadInput",        "ShapeMismatch",
      "NotUnitary",      "OutsideBall",       "GridMismatch",
      "NotPSD"};
  static const char* resource_errors[] = {"SizeOverflow", "NoConvergence"};
  for (const char* c : input_errors) {
    if (code == c) return 2;
  }
  for (const char* c : resource_errors) {
    if (code == c) return 3;
  }
  return 1;  // mathematical refutation
}

CommandResult guarded(const std::function<CommandResult()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    ordered_json j;
    j["ok"] = false;
    j["error"] = e.code();
    j["detail"] = e.what();
    return CommandResult{exit_for(e.code()), j.dump(2) + "\n"};
  } catch (const std::exception& e) {
    ordered_json j;
    j["ok"] = false;
    j["error"] = "Internal";
    j["detail"] = e.what();
    return CommandResult{2, j.dump(2) + "\n"};
  }
}

ordered_json matrix_json(const Matrix& m) {
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

ordered_json grid_json(const RunConfig& cfg, double radius, std::uint64_t seed) {
  ordered_json g;
  g["size"] = cfg.grid_size;
  g["radius"] = radius;
  g["seed"] = seed;
  return g;
}

OperatorTuple load_tuple(const std::string& text) {
  OperatorTuple t = tuple_from_json_text(text);
  validate(t);
  return t;
}

// Smallest q <= max_deg with every degree-q adjoint product numerically zero,
// or -1. For commuting tuples the products of a fixed total degree are
// enumerated through the scalar index set.
int nilpotency_degree(const OperatorTuple& t, int max_deg) {
  const TruncatedFockSpace scalar = build_space(t.n, max_deg, 1, 1 << 22);
  std::vector<Matrix> pow(scalar.index_count());
  std::vector<double> level_max(max_deg + 1, 0.0);
  for (int p = 0; p < scalar.index_count(); ++p) {
    const MultiIndex& k = scalar.indices[p];
    const int deg = total_degree(k);
    if (deg == 0) {
      pow[p] = eye(t.d);
    } else {
      for (int j = 0; j < t.n; ++j) {
        if (k[j] == 0) continue;
        MultiIndex parent = k;
        --parent[j];
        pow[p] = t.T[j].adjoint() * pow[scalar.pos.at(parent)];
        break;
      }
    }
    level_max[deg] = std::max(level_max[deg], max_abs(pow[p]));
  }
  for (int q = 1; q <= max_deg; ++q) {
    if (level_max[q] <= 1e-13) return q;
  }
  return -1;
}

// Largest stored total degree carrying a numerically nonzero coefficient.
int effective_degree(const TaylorCoefficients& tc) {
  int deg = 0;
  for (std::size_t q = 0; q < tc.degrees.size(); ++q) {
    if (max_abs(tc.coeffs[q]) > 1e-13) {
      deg = std::max(deg, total_degree(tc.degrees[q]));
    }
  }
  return deg;
}

// Truncation allowance for model-type residuals: the geometric tail of the
// Taylor series (absent for jointly nilpotent tuples) plus the sample-radius
// artifact radius^(N + 1 - deg).
double truncation_allowance(const OperatorTuple& t, int N, int deg_theta,
                            double radius) {
  double tail = 0.0;
  if (nilpotency_degree(t, std::min(t.d, N)) < 0) {
    const double rho = std::min(op_norm(row_op(t)), 1.0);
    tail = std::pow(rho, N + 1) / std::max(1.0 - rho, 1e-3);
  }
  const double junk =
      std::pow(radius, std::max(N + 1 - deg_theta, 0)) / (1.0 - radius);
  return 10.0 * (tail + junk);
}

CommandResult finish(const ordered_json& j, bool ok) {
  return CommandResult{ok ? 0 : 1, j.dump(2) + "\n"};
}

CommandResult verify_identities(const OperatorTuple& t, const RunConfig& cfg) {
  const DefectData dd = defects(t);
  const auto grid = ball_grid(t.n, cfg.grid_size, cfg.grid_radius, cfg.seed);
  double theta_res = 0.0, kernel_res = 0.0;
  for (const auto& w : grid) {
    for (const auto& z : grid) {
      theta_res = std::max(theta_res, check_theta_identity(t, dd, z, w));
      kernel_res = std::max(kernel_res, check_kernel_identity(t, dd, z, w));
    }
  }
  const double bound = bounds::scaled(bounds::kIdentityBound, cfg.tol);
  ordered_json j;
  j["mode"] = "identities";
  j["n"] = t.n;
  j["d"] = t.d;
  j["grid"] = grid_json(cfg, cfg.grid_radius, cfg.seed);
  j["residuals"]["difference_quotient"] = theta_res;
  j["residuals"]["kernel_factorization"] = kernel_res;
  j["bound"] = bound;
  const bool ok = theta_res <= bound && kernel_res <= bound;
  j["ok"] = ok;
  return finish(j, ok);
}

CommandResult verify_mobius(const OperatorTuple& t, const RunConfig& cfg) {
  Rng rng(cfg.seed);
  const Vector a = rng.ball_point(t.n, 0.7);
  const Matrix u = rng.unitary(t.n);
  const MobiusMap m = make_mobius(a, u, t.tol);
  const MobiusMap plain = make_mobius(a, eye(t.n), t.tol);
  const auto grid = ball_grid(t.n, cfg.grid_size, cfg.grid_radius, cfg.seed + 1);

  double invol = 0.0;
  for (const auto& z : grid) {
    invol = std::max(invol, (phi(plain, phi(plain, z)) - z).cwiseAbs().maxCoeff());
  }
  const double defect = check_defect_identity(t, m);
  const TransformationLawReport rep = verify_transformation_law(t, m, grid);

  const double b_defect = bounds::scaled(bounds::kDefectBound, cfg.tol);
  const double b_invol = bounds::scaled(bounds::kInvolutionBound, cfg.tol);
  const double b_law = bounds::scaled(bounds::kTransformBound, cfg.tol);
  ordered_json j;
  j["mode"] = "mobius";
  j["n"] = t.n;
  j["d"] = t.d;
  j["grid"] = grid_json(cfg, cfg.grid_radius, cfg.seed + 1);
  j["point"] = matrix_json(a);
  j["frame"] = matrix_json(u);
  j["residuals"]["defect_identity"] = defect;
  j["residuals"]["involution"] = invol;
  j["residuals"]["law_witness"] = rep.witness_residual;
  j["residuals"]["law_decider"] = rep.decider_residual;
  j["residuals"]["resolvent_identity"] = rep.resolvent_residual;
  j["residuals"]["scalar_identity"] = rep.scalar_residual;
  j["bounds"]["defect_identity"] = b_defect;
  j["bounds"]["involution"] = b_invol;
  j["bounds"]["law_witness"] = b_law;
  const bool ok = defect <= b_defect && invol <= b_invol &&
                  rep.witness_residual <= b_law && rep.decider_found &&
                  rep.resolvent_residual + rep.scalar_residual <= 100.0 * b_law;
  j["ok"] = ok;
  return finish(j, ok);
}

CommandResult verify_coincide(const OperatorTuple& t1, const OperatorTuple& t2,
                              const RunConfig& cfg) {
  if (t1.n != t2.n) {
    throw dimension_mismatch("tuples act on balls of different dimension");
  }
  const DefectData dd1 = defects(t1);
  const DefectData dd2 = defects(t2);
  const auto grid = ball_grid(t1.n, cfg.grid_size, cfg.grid_radius, cfg.seed);
  const SampledOperatorFunction f = sample_theta(t1, dd1, grid);
  const SampledOperatorFunction g = sample_theta(t2, dd2, grid);
  const double eff = std::max(bounds::scaled(bounds::kEquivalenceBound, cfg.tol),
                              1e-10);
  const CoincidenceResult res = decide_coincidence(f, g, eff);

  ordered_json j;
  j["mode"] = "coincide";
  j["n"] = t1.n;
  j["d"] = {t1.d, t2.d};
  j["grid"] = grid_json(cfg, cfg.grid_radius, cfg.seed);
  if (!res.ok()) {
    j["ok"] = false;
    j["reason"] = "NoSolution";
    j["no_solution"] = to_string(res.reason);
    j["residual"] = res.residual;
    return CommandResult{1, j.dump(2) + "\n"};
  }
  const CoincidenceWitness& w = *res.witness;
  const Matrix inter = equivalence_from_coincidence(t1, t2, w, grid, eff);
  double cert = 0.0;
  for (int i = 0; i < t1.n; ++i) {
    cert = std::max(cert, max_abs(inter * t2.T[i] - t1.T[i] * inter));
  }
  j["kind"] = w.kind == CoincidenceKind::Strong ? "strong" : "weak";
  j["witness_residual"] = w.residual;
  j["tau_star"] = matrix_json(w.tau_star);
  if (w.tau) j["tau"] = matrix_json(*w.tau);
  j["intertwiner"] = matrix_json(inter);
  j["intertwiner_residual"] = cert;
  j["ok"] = true;
  return CommandResult{0, j.dump(2) + "\n"};
}

CommandResult verify_model(const OperatorTuple& t, const RunConfig& cfg) {
  const int N = cfg.truncation_N;
  const double radius =
      cfg.radius_set ? cfg.grid_radius : bounds::kModelGridRadius;
  const auto grid = ball_grid(t.n, cfg.grid_size, radius, cfg.seed);
  const ModelSpace ms = build_model(t, N, grid, cfg.dim_cap);
  const int deg_theta = effective_degree(ms.theta);
  const double allow = truncation_allowance(t, N, deg_theta, radius);
  const double bound = bounds::scaled(bounds::kModelBound, cfg.tol) + allow;
  const ModelTuple mt = model_tuple(ms, bound);
  const MVForm mv = mv_form(ms, bound);

  ordered_json j;
  j["mode"] = "model";
  j["n"] = t.n;
  j["d"] = t.d;
  j["truncation_degree"] = N;
  j["grid"] = grid_json(cfg, radius, cfg.seed);
  j["dimensions"]["rank_defect"] = ms.defects.basis_DT.dim();
  j["dimensions"]["rank_defect_adjoint"] = ms.defects.basis_DTstar.dim();
  j["dimensions"]["domain_ambient"] = ms.dom_space.ambient_dim();
  j["dimensions"]["codomain_ambient"] = ms.codom_space.ambient_dim();
  j["dimensions"]["rank_delta"] = ms.ran_Delta.dim();
  j["dimensions"]["model_dim"] = ms.model_subspace.dim();
  j["dimensions"]["span_rank"] = ms.span_rank;
  j["residuals"]["defining_fit"] = ms.fit_residual;
  j["residuals"]["norm_split"] = ms.norm_residual;
  j["residuals"]["connecting"] = ms.connect_residual;
  j["residuals"]["adjoint_connecting"] = ms.r_delta_residual;
  j["residuals"]["partition"] = ms.partition_residual;
  j["residuals"]["model_intertwine"] = mt.intertwine_residual;
  j["residuals"]["model_range"] = mt.range_residual;
  j["residuals"]["embed"] = mv.embed_residual;
  j["residuals"]["sphere"] = mv.sphere_residual;
  j["residuals"]["compression"] = mv.compression_residual;
  j["allowance"] = allow;
  j["bound"] = bound;
  const double worst = std::max(
      {ms.fit_residual, ms.norm_residual, ms.connect_residual,
       ms.r_delta_residual, ms.partition_residual, mt.intertwine_residual,
       mt.range_residual, mv.embed_residual, mv.sphere_residual,
       mv.compression_residual});
  const bool ok = worst <= bound;
  j["worst"] = worst;
  j["ok"] = ok;
  return finish(j, ok);
}

CommandResult verify_blh(const OperatorTuple& t, const RunConfig& cfg) {
  const int N = cfg.truncation_N;
  const DefectData dd = defects(t);
  const TaylorCoefficients tc = theta_taylor(t, dd, N);
  const TruncatedFockSpace dom =
      build_space(t.n, N, dd.basis_DT.dim(), cfg.dim_cap);
  const TruncatedFockSpace codom =
      build_space(t.n, N, dd.basis_DTstar.dim(), cfg.dim_cap);
  const Matrix mult = multiplier_matrix(tc, dom, codom);
  const InvariantSubspace y{codom, range_basis(mult, cfg.tol)};

  const int deg_theta = effective_degree(tc);
  const double allow = truncation_allowance(t, N, deg_theta,
                                            bounds::kModelGridRadius);
  const double bound = bounds::scaled(bounds::kBeurlingBound, cfg.tol) + allow;

  const double inv_res = invariance_residual(y);
  const int red_dim = reducing_part(y).dim();
  const InnerFromInvariant rec = inner_from_invariant(y, bound);

  ordered_json j;
  j["mode"] = "blh";
  j["n"] = t.n;
  j["d"] = t.d;
  j["truncation_degree"] = N;
  j["dimensions"]["invariant_dim"] = y.basis.dim();
  j["dimensions"]["complement_dim"] = rec.tuple.d;
  j["residuals"]["invariance"] = inv_res;
  j["residuals"]["range_identity"] = rec.range_residual;
  j["reducing_dim"] = red_dim;
  j["degenerate"] = rec.degenerate;

  bool coincide_ok = true;
  double coincide_res = 0.0;
  if (!rec.degenerate) {
    const auto grid = ball_grid(t.n, std::min(cfg.grid_size, 24),
                                std::min(cfg.grid_radius, 0.6), cfg.seed);
    const SampledOperatorFunction f = sample_theta(t, dd, grid);
    const SampledOperatorFunction g =
        sample_theta(rec.tuple, defects(rec.tuple), grid);
    const CoincidenceResult wc =
        decide_weak_coincidence(f, g, std::max(bound, 1e-9));
    coincide_ok = wc.ok();
    coincide_res = wc.residual;
  }
  j["residuals"]["model_coincidence"] = coincide_res;
  j["allowance"] = allow;
  j["bound"] = bound;
  const bool ok =
      red_dim == 0 && inv_res <= bound && rec.range_residual <= bound &&
      coincide_ok;
  j["ok"] = ok;
  return finish(j, ok);
}

}  // namespace

CommandResult cmd_report(const std::string& tuple_json, const RunConfig& cfg) {
  return guarded([&]() -> CommandResult {
    const OperatorTuple t = load_tuple(tuple_json);
    const ClassificationReport cls = classify(t);
    const DefectData dd = defects(t);
    const double inter =
        max_abs(row_op(t) * dd.D_T - dd.D_Tstar * row_op(t));

    const TruncatedFockSpace codom =
        build_space(t.n, cfg.truncation_N, dd.basis_DTstar.dim(), cfg.dim_cap);
    const DilationReport dil = check_dilation_identities(t, codom);

    const auto grid = ball_grid(t.n, cfg.grid_size, cfg.grid_radius, cfg.seed);
    double theta_res = 0.0, kernel_res = 0.0;
    for (const auto& w : grid) {
      for (const auto& z : grid) {
        theta_res = std::max(theta_res, check_theta_identity(t, dd, z, w));
        kernel_res = std::max(kernel_res, check_kernel_identity(t, dd, z, w));
      }
    }

    ordered_json j;
    j["input"]["n"] = t.n;
    j["input"]["d"] = t.d;
    j["input"]["tol"] = t.tol;
    j["classification"]["pure"] = cls.is_pure;
    j["classification"]["coisometric"] = cls.is_coisometric;
    j["classification"]["spherical_isometry"] = cls.is_spherical_isometry;
    j["classification"]["cnc"] = cls.is_cnc;
    j["classification"]["limit_norm"] = max_abs(cls.A_T);
    j["classification"]["limit_iterations"] = cls.iterations_to_converge;
    j["classification"]["cnc_kernel_dim"] = cls.cnc_kernel.dim();
    j["defects"]["rank_defect"] = dd.basis_DT.dim();
    j["defects"]["rank_defect_adjoint"] = dd.basis_DTstar.dim();
    j["defects"]["intertwine_residual"] = inter;
    j["dilation"]["truncation_degree"] = cfg.truncation_N;
    j["dilation"]["defect_residual"] = dil.defect_residual;
    j["dilation"]["complement_residual"] = dil.complement_residual;
    j["dilation"]["intertwine_residual"] = dil.intertwine_residual;
    j["dilation"]["intertwine_block"] =
        "total degree <= " + std::to_string(cfg.truncation_N - 1);
    j["dilation"]["limit_iterations"] = dil.at_iterations;
    j["identities"]["grid"] = grid_json(cfg, cfg.grid_radius, cfg.seed);
    j["identities"]["difference_quotient"] = theta_res;
    j["identities"]["kernel_factorization"] = kernel_res;
    return CommandResult{0, j.dump(2) + "\n"};
  });
}

CommandResult cmd_sample_theta(const std::string& tuple_json,
                               const RunConfig& cfg) {
  return guarded([&]() -> CommandResult {
    const OperatorTuple t = load_tuple(tuple_json);
    const DefectData dd = defects(t);
    const auto grid = ball_grid(t.n, cfg.grid_size, cfg.grid_radius, cfg.seed);
    const SampledOperatorFunction f = sample_theta(t, dd, grid);
    std::ostringstream os;
    write_samples_csv(os, f);
    return CommandResult{0, os.str()};
  });
}

CommandResult cmd_verify(const std::vector<std::string>& inputs_json,
                         const std::string& mode, const RunConfig& cfg) {
  return guarded([&]() -> CommandResult {
    if (mode == "coincide") {
      if (inputs_json.size() != 2) {
        throw Error("BadInput", "mode=coincide needs exactly two tuples");
      }
      return verify_coincide(load_tuple(inputs_json[0]),
                             load_tuple(inputs_json[1]), cfg);
    }
    if (inputs_json.size() != 1) {
      throw Error("BadInput", "mode=" + mode + " needs exactly one tuple");
    }
    const OperatorTuple t = load_tuple(inputs_json[0]);
    if (mode == "identities") return verify_identities(t, cfg);
    if (mode == "mobius") return verify_mobius(t, cfg);
    if (mode == "model") return verify_model(t, cfg);
    if (mode == "blh") return verify_blh(t, cfg);
    throw Error("BadInput", "unknown mode '" + mode + "'");
  });
}

}  // namespace cct
