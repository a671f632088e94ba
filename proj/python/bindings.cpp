#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cct/beurling.hpp"
#include "cct/charfn.hpp"
#include "cct/cli.hpp"
#include "cct/fock.hpp"
#include "cct/grid.hpp"
#include "cct/linalg.hpp"
#include "cct/mobius.hpp"
#include "cct/model.hpp"
#include "cct/tuple.hpp"
#include "cct/types.hpp"

namespace py = pybind11;
using namespace cct;

namespace {

RunConfig make_config(double tol, int grid, double radius, bool radius_set,
                      std::uint64_t seed, int degree, int dim_cap) {
  RunConfig cfg;
  cfg.tol = tol;
  cfg.grid_size = grid;
  cfg.grid_radius = radius;
  cfg.radius_set = radius_set;
  cfg.seed = seed;
  cfg.truncation_N = degree;
  cfg.dim_cap = dim_cap;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_cct, m) {
  m.doc() =
      "Characteristic functions, dilations and functional models of "
      "commuting contractive operator tuples";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError,
                      (e.code() + std::string(": ") + e.what()).c_str());
    }
  });

  py::class_<Subspace>(m, "Subspace")
      .def_readonly("ambient_dim", &Subspace::ambient_dim)
      .def_readonly("basis", &Subspace::basis)
      .def_readonly("tol", &Subspace::tol)
      .def("dim", &Subspace::dim)
      .def("projector", &Subspace::projector);

  py::class_<OperatorTuple>(m, "OperatorTuple")
      .def(py::init([](int n, const std::vector<Matrix>& T, double tol,
                       bool check) {
             OperatorTuple t;
             t.n = n;
             t.d = T.empty() ? 0 : static_cast<int>(T[0].rows());
             t.T = T;
             t.tol = tol;
             if (check) validate(t);
             return t;
           }),
           py::arg("n"), py::arg("matrices"), py::arg("tol") = 1e-9,
           py::arg("check") = true)
      .def_readonly("n", &OperatorTuple::n)
      .def_readonly("d", &OperatorTuple::d)
      .def_readonly("T", &OperatorTuple::T)
      .def_readonly("tol", &OperatorTuple::tol);

  m.def("validate", &validate, py::arg("t"));
  m.def("row_op", &row_op);
  m.def("sum_TT_adj", &sum_TT_adj);

  py::class_<DefectData>(m, "DefectData")
      .def_readonly("D_T", &DefectData::D_T)
      .def_readonly("D_Tstar", &DefectData::D_Tstar)
      .def_readonly("basis_DT", &DefectData::basis_DT)
      .def_readonly("basis_DTstar", &DefectData::basis_DTstar);
  m.def("defects", &defects);

  py::class_<ClassificationReport>(m, "ClassificationReport")
      .def_readonly("is_pure", &ClassificationReport::is_pure)
      .def_readonly("is_coisometric", &ClassificationReport::is_coisometric)
      .def_readonly("is_spherical_isometry",
                    &ClassificationReport::is_spherical_isometry)
      .def_readonly("is_cnc", &ClassificationReport::is_cnc)
      .def_readonly("A_T", &ClassificationReport::A_T)
      .def_readonly("cnc_kernel", &ClassificationReport::cnc_kernel)
      .def_readonly("iterations_to_converge",
                    &ClassificationReport::iterations_to_converge);
  m.def("classify", &classify, py::arg("t"), py::arg("max_iter") = 10000);

  m.def("ball_grid", &ball_grid, py::arg("n"), py::arg("grid_size"),
        py::arg("radius"), py::arg("seed"));

  m.def("eval_theta", &eval_theta, py::arg("t"), py::arg("defects"),
        py::arg("z"));
  m.def("eval_kT", &eval_kT, py::arg("t"), py::arg("defects"), py::arg("z"));
  m.def("check_theta_identity", &check_theta_identity, py::arg("t"),
        py::arg("defects"), py::arg("z"), py::arg("w"));
  m.def("check_kernel_identity", &check_kernel_identity, py::arg("t"),
        py::arg("defects"), py::arg("z"), py::arg("w"));

  py::class_<SampledOperatorFunction>(m, "SampledOperatorFunction")
      .def_readonly("domain_dim", &SampledOperatorFunction::domain_dim)
      .def_readonly("codomain_dim", &SampledOperatorFunction::codomain_dim)
      .def_readonly("points", &SampledOperatorFunction::points)
      .def_readonly("samples", &SampledOperatorFunction::samples);
  m.def("sample_theta", &sample_theta, py::arg("t"), py::arg("defects"),
        py::arg("grid"));

  py::class_<CoincidenceWitness>(m, "CoincidenceWitness")
      .def_readonly("tau", &CoincidenceWitness::tau)
      .def_readonly("tau_star", &CoincidenceWitness::tau_star)
      .def_readonly("residual", &CoincidenceWitness::residual)
      .def_property_readonly("kind", [](const CoincidenceWitness& w) {
        return w.kind == CoincidenceKind::Strong ? "strong" : "weak";
      });
  py::class_<CoincidenceResult>(m, "CoincidenceResult")
      .def_readonly("witness", &CoincidenceResult::witness)
      .def_readonly("residual", &CoincidenceResult::residual)
      .def("ok", &CoincidenceResult::ok)
      .def_property_readonly("reason", [](const CoincidenceResult& r) {
        return std::string(to_string(r.reason));
      });
  m.def("decide_weak_coincidence", &decide_weak_coincidence, py::arg("f"),
        py::arg("g"), py::arg("tol"));
  m.def("decide_coincidence", &decide_coincidence, py::arg("f"), py::arg("g"),
        py::arg("tol"));

  py::class_<MobiusMap>(m, "MobiusMap")
      .def_readonly("a", &MobiusMap::a)
      .def_readonly("u", &MobiusMap::u)
      .def_readonly("s_a", &MobiusMap::s_a);
  m.def("make_mobius", &make_mobius, py::arg("a"), py::arg("u"),
        py::arg("tol") = 1e-9);
  m.def("phi", &phi, py::arg("map"), py::arg("z"));
  m.def("transform_tuple", &transform_tuple, py::arg("t"), py::arg("map"));
  m.def("check_defect_identity", &check_defect_identity, py::arg("t"),
        py::arg("map"));

  py::class_<TransformationLawReport>(m, "TransformationLawReport")
      .def_readonly("witness_residual",
                    &TransformationLawReport::witness_residual)
      .def_readonly("decider_residual",
                    &TransformationLawReport::decider_residual)
      .def_readonly("decider_found", &TransformationLawReport::decider_found)
      .def_readonly("resolvent_residual",
                    &TransformationLawReport::resolvent_residual)
      .def_readonly("scalar_residual",
                    &TransformationLawReport::scalar_residual)
      .def_readonly("max_residual", &TransformationLawReport::max_residual);
  m.def("verify_transformation_law", &verify_transformation_law, py::arg("t"),
        py::arg("map"), py::arg("grid"));

  py::class_<TruncatedFockSpace>(m, "TruncatedSpace")
      .def_readonly("n", &TruncatedFockSpace::n)
      .def_readonly("N", &TruncatedFockSpace::N)
      .def_readonly("coeff_dim", &TruncatedFockSpace::coeff_dim)
      .def_readonly("indices", &TruncatedFockSpace::indices)
      .def_readonly("gamma", &TruncatedFockSpace::gamma)
      .def("index_count", &TruncatedFockSpace::index_count)
      .def("ambient_dim", &TruncatedFockSpace::ambient_dim)
      .def("degree_count", &TruncatedFockSpace::degree_count);
  m.def("build_space", &build_space, py::arg("n"), py::arg("N"),
        py::arg("coeff_dim"), py::arg("dim_cap") = 20000);
  m.def("shift_matrices", &shift_matrices, py::arg("space"));
  m.def("kernel_vector", &kernel_vector, py::arg("space"), py::arg("z"));

  py::class_<TaylorCoefficients>(m, "TaylorCoefficients")
      .def_readonly("n", &TaylorCoefficients::n)
      .def_readonly("domain_dim", &TaylorCoefficients::domain_dim)
      .def_readonly("codomain_dim", &TaylorCoefficients::codomain_dim)
      .def_readonly("degrees", &TaylorCoefficients::degrees)
      .def_readonly("coeffs", &TaylorCoefficients::coeffs)
      .def("max_degree", &TaylorCoefficients::max_degree)
      .def("at_zero", &TaylorCoefficients::at_zero);
  m.def("theta_taylor", &theta_taylor, py::arg("t"), py::arg("defects"),
        py::arg("max_degree"));
  m.def("eval_taylor", &eval_taylor, py::arg("coefficients"), py::arg("z"));
  m.def("multiplier_matrix", &multiplier_matrix, py::arg("theta"),
        py::arg("dom_space"), py::arg("codom_space"));
  m.def("dilation_j", &dilation_j, py::arg("t"), py::arg("defects"),
        py::arg("space"));

  py::class_<DilationReport>(m, "DilationReport")
      .def_readonly("defect_residual", &DilationReport::defect_residual)
      .def_readonly("complement_residual",
                    &DilationReport::complement_residual)
      .def_readonly("intertwine_residual",
                    &DilationReport::intertwine_residual)
      .def_readonly("at_iterations", &DilationReport::at_iterations);
  m.def("check_dilation_identities", &check_dilation_identities, py::arg("t"),
        py::arg("space"), py::arg("at_tol") = 1e-13,
        py::arg("at_max_iter") = 200000);

  py::class_<ModelSpace>(m, "ModelSpace")
      .def_readonly("theta", &ModelSpace::theta)
      .def_readonly("j", &ModelSpace::j)
      .def_readonly("mult", &ModelSpace::mult)
      .def_readonly("Delta", &ModelSpace::Delta)
      .def_readonly("r", &ModelSpace::r)
      .def_readonly("V", &ModelSpace::V)
      .def_readonly("U", &ModelSpace::U)
      .def_readonly("model_subspace", &ModelSpace::model_subspace)
      .def_readonly("span_rank", &ModelSpace::span_rank)
      .def_readonly("fit_residual", &ModelSpace::fit_residual)
      .def_readonly("norm_residual", &ModelSpace::norm_residual)
      .def_readonly("connect_residual", &ModelSpace::connect_residual)
      .def_readonly("partition_residual", &ModelSpace::partition_residual)
      .def_readonly("r_delta_residual", &ModelSpace::r_delta_residual);
  m.def("build_model", &build_model, py::arg("t"),
        py::arg("truncation_degree"), py::arg("grid"),
        py::arg("dim_cap") = 20000);

  py::class_<ModelTuple>(m, "ModelTuple")
      .def_readonly("tuple", &ModelTuple::tuple)
      .def_readonly("intertwine_residual", &ModelTuple::intertwine_residual)
      .def_readonly("range_residual", &ModelTuple::range_residual);
  m.def("model_tuple", &model_tuple, py::arg("model"), py::arg("cert_tol"));

  py::class_<MVForm>(m, "MVForm")
      .def_readonly("A_half", &MVForm::A_half)
      .def_readonly("phi", &MVForm::phi)
      .def_readonly("U_ops", &MVForm::U_ops)
      .def_readonly("W_ops", &MVForm::W_ops)
      .def_readonly("embed_residual", &MVForm::embed_residual)
      .def_readonly("sphere_residual", &MVForm::sphere_residual)
      .def_readonly("compression_residual", &MVForm::compression_residual);
  m.def("mv_U_ops", &mv_U_ops, py::arg("t"), py::arg("A_T"));
  m.def("mv_form", &mv_form, py::arg("model"), py::arg("tol"));
  m.def("equivalence_from_coincidence", &equivalence_from_coincidence,
        py::arg("t"), py::arg("r"), py::arg("witness"), py::arg("grid"),
        py::arg("tol"));

  py::class_<InvariantSubspace>(m, "InvariantSubspace")
      .def(py::init([](const TruncatedFockSpace& space, const Subspace& basis) {
             return InvariantSubspace{space, basis};
           }),
           py::arg("space"), py::arg("basis"))
      .def_readonly("space", &InvariantSubspace::space)
      .def_readonly("basis", &InvariantSubspace::basis);
  m.def("invariance_residual", &invariance_residual);
  m.def("reducing_part", &reducing_part);

  py::class_<BLHDecomposition>(m, "BLHDecomposition")
      .def_readonly("reducing", &BLHDecomposition::reducing)
      .def_readonly("rest", &BLHDecomposition::rest)
      .def_readonly("split_residual", &BLHDecomposition::split_residual)
      .def_readonly("rest_invariance", &BLHDecomposition::rest_invariance)
      .def_readonly("rest_reducing_dim", &BLHDecomposition::rest_reducing_dim);
  m.def("blh_decompose", &blh_decompose);

  m.def("is_purely_contractive",
        py::overload_cast<const TaylorCoefficients&, double>(
            &is_purely_contractive),
        py::arg("theta"), py::arg("tol"));
  py::class_<InnerCheck>(m, "InnerCheck")
      .def_readonly("inner", &InnerCheck::inner)
      .def_readonly("residual", &InnerCheck::residual)
      .def_readonly("exact_degree", &InnerCheck::exact_degree);
  m.def("is_inner", &is_inner, py::arg("theta"), py::arg("dom_space"),
        py::arg("codom_space"), py::arg("tol"));

  py::class_<InnerFromInvariant>(m, "InnerFromInvariant")
      .def_readonly("theta", &InnerFromInvariant::theta)
      .def_readonly("tuple", &InnerFromInvariant::tuple)
      .def_readonly("tau", &InnerFromInvariant::tau)
      .def_readonly("range_residual", &InnerFromInvariant::range_residual)
      .def_readonly("degenerate", &InnerFromInvariant::degenerate);
  m.def("inner_from_invariant", &inner_from_invariant, py::arg("y"),
        py::arg("tol"));

  py::class_<TupleFromInner>(m, "TupleFromInner")
      .def_readonly("tuple", &TupleFromInner::tuple)
      .def_readonly("degenerate", &TupleFromInner::degenerate)
      .def_readonly("coincidence", &TupleFromInner::coincidence);
  m.def("tuple_from_inner", &tuple_from_inner, py::arg("theta"),
        py::arg("truncation_degree"), py::arg("tol"),
        py::arg("dim_cap") = 20000);

  m.def(
      "run_report",
      [](const std::string& tuple_json, double tol, int grid, double radius,
         bool radius_set, std::uint64_t seed, int degree, int dim_cap) {
        const CommandResult r = cmd_report(
            tuple_json,
            make_config(tol, grid, radius, radius_set, seed, degree, dim_cap));
        return py::make_tuple(r.exit_code, r.output);
      },
      py::arg("tuple_json"), py::arg("tol") = 1e-9, py::arg("grid") = 64,
      py::arg("radius") = 0.8, py::arg("radius_set") = false,
      py::arg("seed") = 1, py::arg("degree") = 8, py::arg("dim_cap") = 20000);
  m.def(
      "run_sample_theta",
      [](const std::string& tuple_json, double tol, int grid, double radius,
         bool radius_set, std::uint64_t seed, int degree, int dim_cap) {
        const CommandResult r = cmd_sample_theta(
            tuple_json,
            make_config(tol, grid, radius, radius_set, seed, degree, dim_cap));
        return py::make_tuple(r.exit_code, r.output);
      },
      py::arg("tuple_json"), py::arg("tol") = 1e-9, py::arg("grid") = 64,
      py::arg("radius") = 0.8, py::arg("radius_set") = false,
      py::arg("seed") = 1, py::arg("degree") = 8, py::arg("dim_cap") = 20000);
  m.def(
      "run_verify",
      [](const std::vector<std::string>& inputs_json, const std::string& mode,
         double tol, int grid, double radius, bool radius_set,
         std::uint64_t seed, int degree, int dim_cap) {
        const CommandResult r = cmd_verify(
            inputs_json, mode,
            make_config(tol, grid, radius, radius_set, seed, degree, dim_cap));
        return py::make_tuple(r.exit_code, r.output);
      },
      py::arg("inputs_json"), py::arg("mode"), py::arg("tol") = 1e-9,
      py::arg("grid") = 64, py::arg("radius") = 0.8,
      py::arg("radius_set") = false, py::arg("seed") = 1,
      py::arg("degree") = 8, py::arg("dim_cap") = 20000);
}
