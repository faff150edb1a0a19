#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "telecert/json_io.hpp"
#include "telecert/report.hpp"

namespace py = pybind11;
using namespace telecert;

namespace {

using NpMatrix = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const NpMatrix& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D complex array");
    ComplexMatrix m(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    auto r = arr.unchecked<2>();
    for (py::ssize_t i = 0; i < arr.shape(0); ++i)
        for (py::ssize_t j = 0; j < arr.shape(1); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = r(i, j);
    return m;
}

ComplexMatrix to_ket(const py::array_t<std::complex<double>, py::array::forcecast>& arr) {
    if (arr.ndim() != 1) throw std::invalid_argument("expected a 1-D complex array");
    ComplexMatrix m(static_cast<int>(arr.shape(0)), 1);
    auto r = arr.unchecked<1>();
    for (py::ssize_t i = 0; i < arr.shape(0); ++i) m(static_cast<int>(i), 0) = r(i);
    return m;
}

py::array from_matrix(const ComplexMatrix& m) {
    py::array_t<std::complex<double>> arr({m.rows(), m.cols()});
    auto w = arr.mutable_unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
    return arr;
}

py::list recipe_to_list(const ClassicalRecipe& r) {
    py::list out;
    for (const auto& s : r.sigma) out.append(from_matrix(s));
    return out;
}

ClassicalRecipe recipe_from_list(const py::sequence& seq) {
    if (py::len(seq) != 8) throw std::invalid_argument("recipe needs eight matrices");
    ClassicalRecipe r;
    for (int xi = 0; xi < 8; ++xi) r.sigma[xi] = to_matrix(seq[xi].cast<NpMatrix>());
    return r;
}

py::dict report_to_dict(const CertificationReport& rep) {
    py::dict d;
    d["f_expt"] = rep.f_expt;
    d["f_avg_state"] = rep.f_avg_state;
    d["alpha"] = rep.alpha;
    d["beta"] = rep.beta;
    d["gqt"] = rep.gqt;
    d["flags"] = rep.flags;
    py::dict thr;
    thr["f_ct"] = rep.thresholds.f_ct;
    thr["f_avg"] = rep.thresholds.f_avg;
    thr["guard"] = rep.thresholds.guard;
    d["thresholds"] = thr;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "certification toolkit for genuine quantum teleportation";

    m.def("werner", [](double p) { return from_matrix(werner(p)); }, py::arg("p_noise"),
          "Werner state (1-p)|phi+><phi+| + p/4 I");
    m.def("chi_ideal", [] { return from_matrix(chi_ideal()); },
          "process matrix of ideal teleportation");
    m.def("mp_process", [] { return from_matrix(mp_process()); },
          "process matrix of the three-Pauli measure-prepare strategy");
    m.def("resource_to_process",
          [](const NpMatrix& rho) { return from_matrix(resource_to_process(to_matrix(rho))); },
          py::arg("resource"),
          "teleportation process run with the given two-qubit resource state");
    m.def("apply_process",
          [](const NpMatrix& chi, const NpMatrix& rho) {
              return from_matrix(apply_process(to_matrix(chi), to_matrix(rho)));
          },
          py::arg("chi"), py::arg("rho"));
    m.def("assemble_process",
          [](const NpMatrix& o0, const NpMatrix& o1, const NpMatrix& op, const NpMatrix& oR) {
              return from_matrix(assemble_process(
                  {to_matrix(o0), to_matrix(o1), to_matrix(op), to_matrix(oR)}));
          },
          py::arg("out0"), py::arg("out1"), py::arg("out_plus"), py::arg("out_r"));
    m.def("process_fidelity",
          [](const NpMatrix& a, const NpMatrix& b) {
              return process_fidelity(to_matrix(a), to_matrix(b));
          },
          py::arg("a"), py::arg("b"));
    m.def("avg_state_fidelity", &avg_state_fidelity, py::arg("f_process"));
    m.def("process_fidelity_from_avg", &process_fidelity_from_avg, py::arg("f_avg"));
    m.def("state_fidelity",
          [](const NpMatrix& rho, const py::array_t<std::complex<double>,
                                                    py::array::forcecast>& ket) {
              return state_fidelity(to_matrix(rho), to_ket(ket));
          },
          py::arg("rho"), py::arg("pure_ket"));
    m.def("negativity", [](const NpMatrix& rho) { return negativity(to_matrix(rho)); },
          py::arg("rho"));

    m.def("classical_bound", [] {
        const BoundResult r = classical_bound();
        py::dict d;
        d["f_ct"] = r.f_ct;
        d["witness"] = recipe_to_list(r.witness);
        return d;
    });
    m.def("quantum_composition", [](const NpMatrix& chi) {
        const CompositionResult r = quantum_composition(to_matrix(chi));
        py::dict d;
        d["alpha"] = r.alpha;
        d["recipe"] = r.residual_recipe ? py::object(recipe_to_list(*r.residual_recipe))
                                        : py::object(py::none());
        d["chi_was_psd"] = r.chi_was_psd;
        return d;
    }, py::arg("chi"));
    m.def("quantum_robustness", [](const NpMatrix& chi) {
        const RobustnessResult r = quantum_robustness(to_matrix(chi));
        py::dict d;
        d["beta"] = r.beta;
        d["noise_process"] = r.noise_process ? py::object(from_matrix(*r.noise_process))
                                             : py::object(py::none());
        return d;
    }, py::arg("chi"));
    m.def("find_recipe", [](const NpMatrix& chi) {
        const FindRecipeResult r = find_recipe(to_matrix(chi));
        py::dict d;
        d["recipe"] = r.recipe ? py::object(recipe_to_list(*r.recipe))
                               : py::object(py::none());
        d["alpha"] = r.alpha;
        return d;
    }, py::arg("chi"));
    m.def("verify_recipe", [](const py::sequence& recipe, const NpMatrix& chi) {
        const RecipeCheck c = verify_recipe(recipe_from_list(recipe), to_matrix(chi));
        return py::make_tuple(c.ok, c.max_deviation);
    }, py::arg("recipe"), py::arg("chi"));
    m.def("recipe_to_process", [](const py::sequence& recipe) {
        return from_matrix(recipe_to_process(recipe_from_list(recipe)));
    }, py::arg("recipe"));

    m.def("steerable_weight", [](const NpMatrix& state) {
        return steerable_weight(assemblage(to_matrix(state))).steerable_weight;
    }, py::arg("state"), "steerable weight under the three Pauli settings");

    m.def("simulate_tomography", [](const NpMatrix& chi, long long shots, std::uint64_t seed) {
        const ReconstructedProcess rec =
            simulate_process_tomography(to_matrix(chi), shots, seed);
        return py::make_tuple(from_matrix(rec.chi), rec.clipped);
    }, py::arg("chi"), py::arg("shots"), py::arg("seed") = 0);

    py::class_<Certifier>(m, "Certifier")
        .def(py::init([](double gap_tol, double guard) {
                 SdpOptions opts;
                 opts.gap_tol = gap_tol;
                 return Certifier(opts, guard);
             }),
             py::arg("gap_tol") = 1e-9, py::arg("guard") = 1e-6)
        .def("thresholds",
             [](const Certifier& c) {
                 py::dict d;
                 d["f_ct"] = c.thresholds().f_ct;
                 d["f_avg"] = c.thresholds().f_avg;
                 d["guard"] = c.thresholds().guard;
                 return d;
             })
        .def("certify",
             [](const Certifier& c, const NpMatrix& chi) {
                 return report_to_dict(c.certify(to_matrix(chi)));
             },
             py::arg("chi"))
        .def("werner_sweep",
             [](const Certifier& c, double start, double stop, double step,
                std::optional<long long> shots, std::uint64_t seed) {
                 std::optional<ShotSpec> spec;
                 if (shots) spec = ShotSpec{*shots, seed};
                 py::list rows;
                 for (const SweepRow& r : c.werner_sweep({start, stop, step}, spec)) {
                     py::dict d;
                     d["p_noise"] = r.p_noise;
                     d["f_expt"] = r.f_expt;
                     d["f_avg_state"] = r.f_avg_state;
                     d["alpha"] = r.alpha;
                     d["beta"] = r.beta;
                     d["negativity"] = r.negativity;
                     d["steerable_weight"] = r.steerable_weight;
                     d["gqt"] = r.gqt;
                     rows.append(d);
                 }
                 return rows;
             },
             py::arg("start") = 0.0, py::arg("stop") = 1.0, py::arg("step") = 0.01,
             py::arg("shots") = py::none(), py::arg("seed") = 0);

    py::register_exception<SolverFailure>(m, "SolverFailure");
}
