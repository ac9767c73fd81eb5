// Python bindings for the sqcavity core. Matrices cross as NumPy arrays, superoperators
// as scipy.sparse CSC matrices.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sqcavity/errors.hpp"
#include "sqcavity/observables.hpp"
#include "sqcavity/sweep.hpp"

namespace py = pybind11;
using namespace sqcavity;

namespace {

py::dict moments_row(const MomentsRow& row) {
    py::dict d;
    d["r"] = row.r;
    d["mean_n"] = row.mean_n;
    d["P0"] = row.p0;
    d["P1"] = row.p1;
    d["abs_aa"] = row.abs_aa;
    d["arg_aa"] = row.arg_aa;
    d["rho_ee"] = row.rho_ee;
    d["purity"] = row.purity;
    d["tail_mass"] = row.tail_mass;
    d["cutoff"] = row.cutoff;
    return d;
}

py::dict bogoliubov_row(const BogoliubovRow& row) {
    py::dict d;
    d["r"] = row.r;
    d["mean_n_lab"] = row.mean_n_lab;
    d["mean_n_bog"] = row.mean_n_bog;
    d["rho_ee_lab"] = row.rho_ee_lab;
    d["rho_ee_bog"] = row.rho_ee_bog;
    d["discrepancy"] = row.discrepancy;
    d["pass"] = row.pass;
    d["cutoff"] = row.cutoff;
    return d;
}

SweepConfig config_from_kwargs(const py::kwargs& kwargs) {
    SweepConfig config;
    for (const auto& [key, value] : kwargs) {
        const std::string name = py::str(key);
        if (name == "r_values") {
            config.r_values = value.cast<std::vector<double>>();
            continue;
        }
        std::string text = py::str(value);
        if (py::isinstance<py::bool_>(value)) text = value.cast<bool>() ? "true" : "false";
        apply_setting(config, name, text);
    }
    return config;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-level atom in a lossy cavity driven by broadband squeezed vacuum";

    // Argument errors map onto ValueError subclasses, solver failures onto RuntimeError ones.
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<LabelError>(m, "LabelError", PyExc_ValueError);
    py::register_exception<UnsupportedFrameError>(m, "UnsupportedFrameError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    auto solver_error = py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<NonUniqueSteadyStateError>(m, "NonUniqueSteadyStateError", solver_error.ptr());
    py::register_exception<StepTooLargeError>(m, "StepTooLargeError", solver_error.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", solver_error.ptr());
    py::register_exception<CorruptedStateError>(m, "CorruptedStateError", solver_error.ptr());
    py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
    py::register_exception<SweepPointError>(m, "SweepPointError", PyExc_RuntimeError);

    py::enum_<Level>(m, "Level").value("g", Level::g).value("e", Level::e);
    py::enum_<Subsystem>(m, "Subsystem").value("atom", Subsystem::atom).value("field", Subsystem::field);

    py::class_<SpaceDims>(m, "SpaceDims")
        .def(py::init<int>(), py::arg("fock_cutoff"))
        .def_readonly("fock_cutoff", &SpaceDims::fock_cutoff)
        .def("total_dim", &SpaceDims::total_dim);

    py::class_<Space>(m, "Space")
        .def_static("atom", &Space::atom)
        .def_static("field", &Space::field, py::arg("fock_cutoff"))
        .def_static("composite", [](int cutoff) { return Space::composite(SpaceDims(cutoff)); }, py::arg("fock_cutoff"))
        .def_property_readonly("dim", &Space::dim)
        .def_property_readonly("fock_cutoff", &Space::fock_cutoff)
        .def_property_readonly("has_atom", &Space::has_atom)
        .def_property_readonly("has_field", &Space::has_field)
        .def(py::self == py::self)
        .def("__repr__", [](const Space& s) {
            if (!s.has_field()) return std::string("Space.atom()");
            return std::string(s.has_atom() ? "Space.composite(" : "Space.field(") + std::to_string(s.fock_cutoff()) + ")";
        });

    py::class_<Operator>(m, "Operator")
        .def(py::init<Space, Matrix>(), py::arg("space"), py::arg("matrix"))
        .def_property_readonly("space", &Operator::space)
        .def_property_readonly("matrix", &Operator::matrix)
        .def("adjoint", &Operator::adjoint)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(cplx() * py::self);

    m.def("identity", &identity, py::arg("space"));
    m.def("annihilation", &annihilation, py::arg("fock_cutoff"));
    m.def("creation", &creation, py::arg("fock_cutoff"));
    m.def("number", &number, py::arg("fock_cutoff"));
    m.def("parity", &parity, py::arg("fock_cutoff"));
    m.def("atom_sigma", [](const std::string& i, const std::string& j) { return atom_sigma(i, j); }, py::arg("i"), py::arg("j"));
    m.def("atom_sigma", py::overload_cast<Level, Level>(&atom_sigma), py::arg("i"), py::arg("j"));
    m.def("lift", &lift, py::arg("op"), py::arg("subsystem"), py::arg("dims"));
    m.def("displacement", &displacement, py::arg("alpha"), py::arg("fock_cutoff"),
          py::arg("pad") = kDefaultDisplacementPad);
    m.def("bogoliubov_b", &bogoliubov_b, py::arg("r"), py::arg("fock_cutoff"));

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double delta_A, double delta_C, double g0, double gamma, double kappa, bool atom_present) {
                 SystemParams p{delta_A, delta_C, g0, gamma, kappa, atom_present};
                 p.validate();
                 return p;
             }),
             py::arg("delta_A") = 0.0, py::arg("delta_C") = 0.0, py::arg("g0") = 0.0, py::arg("gamma") = 0.0,
             py::arg("kappa") = 1.0, py::arg("atom_present") = true)
        .def_readwrite("delta_A", &SystemParams::delta_A)
        .def_readwrite("delta_C", &SystemParams::delta_C)
        .def_readwrite("g0", &SystemParams::g0)
        .def_readwrite("gamma", &SystemParams::gamma)
        .def_readwrite("kappa", &SystemParams::kappa)
        .def_readwrite("atom_present", &SystemParams::atom_present);

    py::class_<SqueezedBath>(m, "SqueezedBath")
        .def(py::init([](double r, double phi) {
                 SqueezedBath b{r, phi};
                 b.validate();
                 return b;
             }),
             py::arg("r") = 0.0, py::arg("phi") = 0.0)
        .def_readwrite("r", &SqueezedBath::r)
        .def_readwrite("phi", &SqueezedBath::phi)
        .def_property_readonly("n_th", &SqueezedBath::n_th)
        .def_property_readonly("m_corr", &SqueezedBath::m_corr);

    py::class_<Superoperator>(m, "Superoperator")
        .def_readonly("space", &Superoperator::space)
        .def_readonly("matrix", &Superoperator::matrix)
        .def_readonly("rate_scale", &Superoperator::rate_scale)
        .def("apply", &Superoperator::apply, py::arg("rho"))
        .def(py::self + py::self);

    m.def("model_space", &model_space, py::arg("params"), py::arg("fock_cutoff"));
    m.def("build_hamiltonian", &build_hamiltonian, py::arg("params"), py::arg("space"));
    m.def("build_liouvillian", &build_liouvillian, py::arg("params"), py::arg("bath"), py::arg("space"));
    m.def("build_bogoliubov_liouvillian",
          py::overload_cast<const SystemParams&, const SqueezedBath&, const Space&>(&build_bogoliubov_liouvillian),
          py::arg("params"), py::arg("bath"), py::arg("space"));
    m.def("lab_annihilation_in_bogoliubov_frame", &lab_annihilation_in_bogoliubov_frame, py::arg("r"), py::arg("space"));
    m.def("trace_row_defect", &trace_row_defect, py::arg("l"));

    py::class_<StateDiagnostics>(m, "StateDiagnostics")
        .def_readonly("trace_error", &StateDiagnostics::trace_error)
        .def_readonly("hermiticity_error", &StateDiagnostics::hermiticity_error)
        .def_readonly("min_eigenvalue", &StateDiagnostics::min_eigenvalue)
        .def_readonly("tail_mass", &StateDiagnostics::tail_mass)
        .def_readonly("raw_trace_error", &StateDiagnostics::raw_trace_error)
        .def_readonly("raw_hermiticity_error", &StateDiagnostics::raw_hermiticity_error);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init<Space, Matrix>(), py::arg("space"), py::arg("matrix"))
        .def_static("basis_state", &DensityMatrix::basis_state, py::arg("space"), py::arg("index"))
        .def_static("pure", &DensityMatrix::pure, py::arg("space"), py::arg("psi"))
        .def_property_readonly("space", &DensityMatrix::space)
        .def_property_readonly("matrix", &DensityMatrix::matrix)
        .def_property_readonly("diagnostics", &DensityMatrix::diagnostics);

    py::class_<SteadyStateOptions>(m, "SteadyStateOptions")
        .def(py::init<>())
        .def_readwrite("guard", &SteadyStateOptions::guard)
        .def_readwrite("epsilon", &SteadyStateOptions::epsilon)
        .def_readwrite("check_truncation", &SteadyStateOptions::check_truncation)
        .def_readwrite("residual_tolerance", &SteadyStateOptions::residual_tolerance);

    m.def("steady_state", &steady_state, py::arg("l"), py::arg("options") = SteadyStateOptions{},
          py::call_guard<py::gil_scoped_release>());
    m.def("steady_state_adaptive", &steady_state_adaptive, py::arg("build"), py::arg("initial_cutoff"),
          py::arg("max_cutoff"), py::arg("options") = SteadyStateOptions{});
    m.def("steady_state_residual", &steady_state_residual, py::arg("l"), py::arg("rho"));
    m.def("default_guard", &default_guard, py::arg("fock_cutoff"));
    m.def("trace_distance", &trace_distance, py::arg("a"), py::arg("b"));

    m.def(
        "evolve",
        [](const Superoperator& l, const DensityMatrix& rho0, double t_end, double dt, std::vector<double> sample_times) {
            EvolveOptions o;
            o.t_end = t_end;
            o.dt = dt;
            o.sample_times = std::move(sample_times);
            std::vector<std::pair<double, DensityMatrix>> out;
            for (auto& p : evolve(l, rho0, o)) out.emplace_back(p.t, std::move(p.rho));
            return out;
        },
        py::arg("l"), py::arg("rho0"), py::arg("t_end"), py::arg("dt"), py::arg("sample_times") = std::vector<double>{},
        py::call_guard<py::gil_scoped_release>());

    py::class_<PhotonDistribution>(m, "PhotonDistribution")
        .def_readonly("probabilities", &PhotonDistribution::probabilities)
        .def_readonly("tail_mass", &PhotonDistribution::tail_mass)
        .def_readonly("guard", &PhotonDistribution::guard);

    py::class_<GaussianMoments>(m, "GaussianMoments")
        .def_readonly("integral", &GaussianMoments::integral)
        .def_readonly("mean_q", &GaussianMoments::mean_q)
        .def_readonly("mean_p", &GaussianMoments::mean_p)
        .def_readonly("var_q", &GaussianMoments::var_q)
        .def_readonly("var_p", &GaussianMoments::var_p)
        .def_readonly("cov_qp", &GaussianMoments::cov_qp)
        .def_property_readonly("major_variance", &GaussianMoments::major_variance)
        .def_property_readonly("minor_variance", &GaussianMoments::minor_variance)
        .def_property_readonly("variance_ratio", &GaussianMoments::variance_ratio);

    py::class_<WignerGrid>(m, "WignerGrid")
        .def_readonly("q_axis", &WignerGrid::q_axis)
        .def_readonly("p_axis", &WignerGrid::p_axis)
        .def_readonly("values", &WignerGrid::values)
        .def_readonly("max_imaginary", &WignerGrid::max_imaginary)
        .def("moments", &wigner_moments);

    m.def("expectation", &expectation, py::arg("rho"), py::arg("op"));
    m.def("real_expectation", &real_expectation, py::arg("rho"), py::arg("op"));
    m.def("mean_photon_number", &mean_photon_number, py::arg("rho"));
    m.def("pair_amplitude", &pair_amplitude, py::arg("rho"));
    m.def("photon_distribution", &photon_distribution, py::arg("rho"), py::arg("guard") = -1);
    m.def("atom_excited_population", &atom_excited_population, py::arg("rho"));
    m.def("partial_trace_atom", &partial_trace_atom, py::arg("rho"));
    m.def("purity", &purity, py::arg("rho"));
    m.def(
        "wigner",
        [](const DensityMatrix& rho, const std::vector<double>& q, const std::vector<double>& p, int pad, int threads,
           bool check_truncation) {
            WignerOptions o;
            o.pad = pad;
            o.threads = threads;
            o.check_truncation = check_truncation;
            return wigner(rho, q, p, o);
        },
        py::arg("rho"), py::arg("q_axis"), py::arg("p_axis"), py::arg("pad") = kDefaultDisplacementPad,
        py::arg("threads") = 1, py::arg("check_truncation") = true, py::call_guard<py::gil_scoped_release>());
    m.def("symmetric_axis", &symmetric_axis, py::arg("extent"), py::arg("points"));

    // Sweeps take the same keys as the config file, e.g. moments_sweep(r_values=[0.5], g0=5).
    m.def("default_r_grid", &default_r_grid);
    m.def("moments_sweep", [](const py::kwargs& kwargs) {
        const SweepConfig config = config_from_kwargs(kwargs);
        std::vector<MomentsRow> rows;
        {
            py::gil_scoped_release release;
            rows = run_moments_sweep(config);
        }
        py::list out;
        for (const auto& row : rows) out.append(moments_row(row));
        return out;
    });
    m.def("bogoliubov_check", [](const py::kwargs& kwargs) {
        const SweepConfig config = config_from_kwargs(kwargs);
        std::vector<BogoliubovRow> rows;
        {
            py::gil_scoped_release release;
            rows = run_bogoliubov_check(config);
        }
        py::list out;
        for (const auto& row : rows) out.append(bogoliubov_row(row));
        return out;
    });
    m.def("solve_point", [](double r, const py::kwargs& kwargs) {
        const SweepConfig config = config_from_kwargs(kwargs).resolved();
        py::gil_scoped_release release;
        return solve_point(config, r).rho;
    }, py::arg("r"));
}
