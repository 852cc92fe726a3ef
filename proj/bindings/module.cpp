// Python face of the frontspeed core: forcings, the two solvers, speed
// extraction and the config runner. Containers cross the boundary as plain
// lists/dicts so the module has no numpy dependency.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "frontspeed/analysis.hpp"
#include "frontspeed/direct_solver.hpp"
#include "frontspeed/errors.hpp"
#include "frontspeed/harness.hpp"
#include "frontspeed/quadrature.hpp"
#include "frontspeed/reduced_solver.hpp"

namespace py = pybind11;
using namespace frontspeed;

namespace {

nlohmann::json py_to_json(const py::handle& h) {
    if (h.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
    if (py::isinstance<py::int_>(h)) return h.cast<long long>();
    if (py::isinstance<py::float_>(h)) return h.cast<double>();
    if (py::isinstance<py::str>(h)) return h.cast<std::string>();
    if (py::isinstance<py::dict>(h)) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& item : h.cast<py::dict>()) {
            out[item.first.cast<std::string>()] = py_to_json(item.second);
        }
        return out;
    }
    if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& item : h.cast<py::sequence>()) out.push_back(py_to_json(item));
        return out;
    }
    throw py::type_error("unsupported value in config document");
}

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::null:
            return py::none();
        case nlohmann::json::value_t::boolean:
            return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer:
        case nlohmann::json::value_t::number_unsigned:
            return py::int_(j.get<long long>());
        case nlohmann::json::value_t::number_float:
            return py::float_(j.get<double>());
        case nlohmann::json::value_t::string:
            return py::str(j.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case nlohmann::json::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
            return out;
        }
        default:
            return py::none();
    }
}

ModelParams make_params(double eps, double alpha, double p) {
    ModelParams params{eps, alpha, p};
    validate_params(params);
    return params;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "C++ core of the frontspeed laboratory";

    py::register_exception<DegenerateForcing>(m, "DegenerateForcing", PyExc_ValueError);
    py::register_exception<MonotonicityViolation>(m, "MonotonicityViolation", PyExc_ValueError);
    py::register_exception<CflViolation>(m, "CflViolation", PyExc_ValueError);
    py::register_exception<DomainTooSmall>(m, "DomainTooSmall", PyExc_ValueError);
    py::register_exception<NonStationary>(m, "NonStationary", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Nonlinearity>(m, "Nonlinearity",
                             "1-periodic nonpositive Lipschitz reaction term")
        .def_static("constant", &Nonlinearity::constant, py::arg("c"))
        .def_static("shifted_cosine", &Nonlinearity::shifted_cosine, py::arg("a"), py::arg("b"))
        .def_static("touching", &Nonlinearity::touching, py::arg("a"))
        .def_static("tabulated", &Nonlinearity::tabulated, py::arg("samples"))
        .def_static("from_json",
                    [](const py::dict& doc) { return Nonlinearity::from_json(py_to_json(doc)); },
                    py::arg("doc"))
        .def("to_json", [](const Nonlinearity& g) { return json_to_py(g.to_json()); })
        .def("__call__", &Nonlinearity::operator(), py::arg("v"))
        .def_property_readonly("sup_norm", &Nonlinearity::sup_norm)
        .def_property_readonly("lipschitz_constant", &Nonlinearity::lipschitz_constant)
        .def_property_readonly("lipschitz_norm", &Nonlinearity::lipschitz_norm)
        .def_property_readonly("max_value", &Nonlinearity::max_value)
        .def_property_readonly("min_value", &Nonlinearity::min_value)
        .def_property_readonly("strictly_negative", &Nonlinearity::strictly_negative)
        .def("__repr__", [](const Nonlinearity& g) {
            return "Nonlinearity(" + g.to_json().dump() + ")";
        });

    m.def(
        "validate",
        [](const Nonlinearity& g, int sample_count) {
            return json_to_py(validate(g, sample_count).to_json());
        },
        py::arg("g"), py::arg("sample_count") = 4096,
        "Periodicity, sign and norm consistency report for a forcing");

    m.def(
        "mean_g", [](const Nonlinearity& g, int n) { return mean_g(g, n); }, py::arg("g"),
        py::arg("n_nodes") = kDefaultQuadratureNodes);
    m.def(
        "harmonic_time_g", [](const Nonlinearity& g, int n) { return harmonic_time_g(g, n); },
        py::arg("g"), py::arg("n_nodes") = kDefaultQuadratureNodes);

    m.def(
        "effective_speed",
        [](double p, const Nonlinearity& g, int n_nodes) {
            const EffectiveSpeed sp = effective_speed(p, g, n_nodes);
            py::dict out;
            out["value"] = sp.value;
            out["case"] = to_string(sp.case_tag);
            return out;
        },
        py::arg("p"), py::arg("g"), py::arg("n_nodes") = kDefaultQuadratureNodes,
        "Asymptotic front speed with the formula branch that produced it");

    py::class_<Trajectory>(m, "Trajectory", "Sampled diagnostics of a reduced run")
        .def_readonly("t", &Trajectory::t)
        .def_readonly("mean", &Trajectory::mean)
        .def_readonly("lo", &Trajectory::lo)
        .def_readonly("hi", &Trajectory::hi)
        .def_readonly("grad_sup", &Trajectory::grad_sup)
        .def_readonly("snapshot_t", &Trajectory::snapshot_t)
        .def_readonly("snapshots", &Trajectory::snapshots)
        .def("__len__", &Trajectory::size);

    m.def(
        "solve_chi",
        [](const Nonlinearity& g, double eps, double alpha, double p, int n, double horizon,
           double dt, int sample_every, bool snapshots) {
            const ModelParams params = make_params(eps, alpha, p);
            const PeriodicGrid grid(n);
            ChiRunOptions opts;
            opts.horizon = horizon > 0.0 ? horizon : default_horizon_chi(params, g);
            opts.dt = dt;
            opts.sample_every = sample_every;
            opts.store_snapshots = snapshots;
            return solve_chi(params, g, grid, opts);
        },
        py::arg("g"), py::arg("eps"), py::arg("alpha") = 0.0, py::arg("p") = 1.0,
        py::arg("n") = 256, py::arg("horizon") = 0.0, py::arg("dt") = 0.0,
        py::arg("sample_every") = 0, py::arg("snapshots") = false,
        "Integrate the periodic profile equation from the zero state");

    m.def(
        "solve_ode",
        [](const Nonlinearity& g, double eps, double alpha, double horizon, double dt,
           int sample_every, double v0) {
            const ModelParams params = make_params(eps, alpha, 0.0);
            const double T = horizon > 0.0 ? horizon : default_horizon_ode(params, g);
            const double step = dt > 0.0 ? dt : default_dt_ode(params, g);
            return solve_ode_p0(params, g, T, step, sample_every, v0);
        },
        py::arg("g"), py::arg("eps"), py::arg("alpha") = 0.0, py::arg("horizon") = 0.0,
        py::arg("dt") = 0.0, py::arg("sample_every") = 1, py::arg("v0") = 0.0,
        "Zero-slope vertical dynamics by RK4");

    m.def(
        "time_of_value",
        [](const Nonlinearity& g, double eps, double v, double alpha, int n_panels) {
            return time_of_value_p0(make_params(eps, alpha, 0.0), g, v, n_panels);
        },
        py::arg("g"), py::arg("eps"), py::arg("v"), py::arg("alpha") = 0.0,
        py::arg("n_panels") = 512,
        "Closed-form time for the zero-slope solution to reach a value");

    m.def(
        "vertical_period",
        [](const Nonlinearity& g, double eps, double alpha) {
            return vertical_period_p0(make_params(eps, alpha, 0.0), g);
        },
        py::arg("g"), py::arg("eps"), py::arg("alpha") = 0.0);

    m.def(
        "extract_speed",
        [](const Trajectory& traj, double eps, double alpha, double p, double window_fraction) {
            const SpeedEstimate est =
                extract_speed(traj, make_params(eps, alpha, p), window_fraction);
            return json_to_py(est.to_json());
        },
        py::arg("traj"), py::arg("eps"), py::arg("alpha") = 0.0, py::arg("p") = 1.0,
        py::arg("window_fraction") = 0.5,
        "Least-squares drift rate over the trailing fit window");

    py::class_<Bump>(m, "Bump", "Smooth compactly supported profile")
        .def(py::init([](double height, double center, double half_width) {
                 return Bump{height, center, half_width};
             }),
             py::arg("height"), py::arg("center") = 0.0, py::arg("half_width") = 1.0)
        .def("__call__", &Bump::operator(), py::arg("x"));

    py::class_<Plateau>(m, "Plateau", "Mollified step profile")
        .def(py::init([](double height, double center, double core_half_width, double edge_width) {
                 return Plateau{height, center, core_half_width, edge_width};
             }),
             py::arg("height"), py::arg("center") = 0.0, py::arg("core_half_width") = 1.0,
             py::arg("edge_width") = 0.5)
        .def("__call__", &Plateau::operator(), py::arg("x"));

    py::class_<Perturbation>(m, "Perturbation", "Offset plus compactly supported features")
        .def(py::init<>())
        .def(py::init<double>(), py::arg("offset"))
        .def("add", py::overload_cast<const Bump&>(&Perturbation::add), py::arg("bump"),
             py::return_value_policy::reference_internal)
        .def("add", py::overload_cast<const Plateau&>(&Perturbation::add), py::arg("plateau"),
             py::return_value_policy::reference_internal)
        .def("__call__", &Perturbation::operator(), py::arg("x"))
        .def_property_readonly("offset", &Perturbation::offset)
        .def_property_readonly("inf_value", &Perturbation::inf_value)
        .def_property_readonly("sup_value", &Perturbation::sup_value)
        .def_property_readonly("feature_radius", &Perturbation::feature_radius);

    py::class_<InitialDatum>(m, "InitialDatum",
                             "slope * x + v0(x) + eps * period_shift at time zero")
        .def(py::init([](double slope, const Perturbation& v0, long period_shift) {
                 InitialDatum d;
                 d.slope = slope;
                 d.v0 = v0;
                 d.period_shift = period_shift;
                 return d;
             }),
             py::arg("slope") = 1.0, py::arg("v0") = Perturbation(), py::arg("period_shift") = 0)
        .def_readwrite("slope", &InitialDatum::slope)
        .def_readwrite("v0", &InitialDatum::v0)
        .def_readwrite("period_shift", &InitialDatum::period_shift);

    py::class_<FieldTrajectory>(m, "FieldTrajectory", "Sampled fields of a direct run")
        .def_readonly("x", &FieldTrajectory::x)
        .def_readonly("t", &FieldTrajectory::t)
        .def_readonly("u", &FieldTrajectory::u)
        .def_readonly("eps", &FieldTrajectory::eps)
        .def_readonly("slope", &FieldTrajectory::slope)
        .def_readonly("period_shift", &FieldTrajectory::period_shift)
        .def("__len__", &FieldTrajectory::size);

    m.def(
        "solve_direct",
        [](const InitialDatum& datum, const Nonlinearity& g, double eps, double horizon,
           double alpha, double p, double half_width, int nodes, double dt, int sample_every,
           int reference_nodes) {
            const ModelParams params = make_params(eps, alpha, p);
            const LineDomain domain(half_width, nodes);
            DirectRunOptions opts;
            opts.horizon = horizon;
            opts.dt = dt;
            opts.sample_every = sample_every;
            opts.reference_nodes = reference_nodes;
            return solve_direct(datum, params, g, domain, opts);
        },
        py::arg("datum"), py::arg("g"), py::arg("eps"), py::arg("horizon"), py::arg("alpha") = 0.0,
        py::arg("p") = 1.0, py::arg("half_width") = 3.0, py::arg("nodes") = 385,
        py::arg("dt") = 0.0, py::arg("sample_every") = 0, py::arg("reference_nodes") = 256,
        "Integrate the truncated-line problem with planar Dirichlet pinning");

    m.def(
        "run_config",
        [](const py::dict& doc, const std::string& out_dir, int jobs) {
            const ExperimentConfig cfg = ExperimentConfig::from_json(py_to_json(doc));
            return json_to_py(run_config(cfg, out_dir, jobs).to_json());
        },
        py::arg("config"), py::arg("out_dir") = std::string("out"), py::arg("jobs") = 1,
        "Run one experiment document and write its CSVs and summary");

    m.def("config_hash", [](const py::dict& doc) { return config_hash(py_to_json(doc)); },
          py::arg("config"));
}
