#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>

#include "rydcav/correlators.hpp"
#include "rydcav/effective.hpp"
#include "rydcav/errors.hpp"
#include "rydcav/lindblad.hpp"
#include "rydcav/model.hpp"
#include "rydcav/perturbative.hpp"
#include "rydcav/scan.hpp"

namespace py = pybind11;
using namespace rydcav;

namespace {

const ErrorKind kKinds[] = {
    ErrorKind::Config,           ErrorKind::SingularDenominator, ErrorKind::DegenerateKernel,
    ErrorKind::BlockadeSaturation, ErrorKind::QuadratureFailure, ErrorKind::IllConditioned,
    ErrorKind::ZeroDenominator,  ErrorKind::DegenerateSpectrum,  ErrorKind::TruncationTooSmall,
    ErrorKind::NonConvergence,   ErrorKind::NoInteriorMaximum,
};

std::map<ErrorKind, py::object>& error_classes() {
  static auto* m = new std::map<ErrorKind, py::object>();
  return *m;
}

ModelConfig config_from(const py::kwargs& kw) {
  ConfigMap m;
  for (auto item : kw) {
    m[py::str(item.first)] = py::str(item.second);
  }
  return model_from_config(m);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Photon statistics of a Rydberg-EIT cavity: perturbative moments, effective model and master-equation reference";

  // exceptions: RydcavError plus one subclass per kind, with a `kind` attribute
  py::object base = py::reinterpret_borrow<py::object>(
      PyErr_NewException("rydcav._core.RydcavError", PyExc_RuntimeError, nullptr));
  m.attr("RydcavError") = base;
  for (ErrorKind k : kKinds) {
    const std::string name(to_string(k));
    py::object cls = py::reinterpret_steal<py::object>(
        PyErr_NewException(("rydcav._core." + name).c_str(), base.ptr(), nullptr));
    cls.attr("kind") = name;
    cls.attr("exit_code") = exit_code(k);
    m.attr(name.c_str()) = cls;
    error_classes()[k] = cls;
  }
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error_classes().at(e.kind()).ptr(), e.what());
    }
  });

  py::enum_<DampingMode>(m, "DampingMode")
      .value("Radiative", DampingMode::Radiative)
      .value("Dephasing", DampingMode::Dephasing);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("delta_c", &SystemParams::delta_c)
      .def_readwrite("delta_e", &SystemParams::delta_e)
      .def_readwrite("delta_r", &SystemParams::delta_r)
      .def_readwrite("gamma_c_L", &SystemParams::gamma_c_L)
      .def_readwrite("gamma_c_R", &SystemParams::gamma_c_R)
      .def_readonly("gamma_e", &SystemParams::gamma_e)
      .def_readwrite("gamma_r", &SystemParams::gamma_r)
      .def_readwrite("gamma_d", &SystemParams::gamma_d)
      .def_readwrite("omega_cf", &SystemParams::omega_cf)
      .def_readwrite("g2N", &SystemParams::g2N)
      .def_readwrite("alpha", &SystemParams::alpha)
      .def_readwrite("c6", &SystemParams::c6)
      .def_readwrite("volume", &SystemParams::volume)
      .def_readwrite("n_atoms", &SystemParams::n_atoms)
      .def_property_readonly("gamma_c", &SystemParams::gamma_c)
      .def_property_readonly("cooperativity", [](const SystemParams& p) { return cooperativity(p); })
      .def("validate", &SystemParams::validate)
      .def("__repr__", [](const SystemParams& p) {
        std::ostringstream s;
        s << "SystemParams(delta_c=" << p.delta_c << ", delta_e=" << p.delta_e << ", delta_r=" << p.delta_r
          << ", omega_cf=" << p.omega_cf << ", g2N=" << p.g2N << ", c6=" << p.c6 << ", volume=" << p.volume
          << ", alpha=" << p.alpha << ")";
        return s.str();
      });

  py::class_<Detunings>(m, "Detunings")
      .def_readonly("d_c", &Detunings::d_c)
      .def_readonly("d_e", &Detunings::d_e)
      .def_readonly("d_r", &Detunings::d_r);

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init<>())
      .def_readwrite("params", &ModelConfig::params)
      .def_readwrite("mode", &ModelConfig::mode);

  m.def("load_config", [](const std::string& path, const std::vector<std::string>& overrides) {
    ConfigMap c = load_config_file(path);
    for (const auto& o : overrides) apply_override(c, o);
    return model_from_config(c);
  }, py::arg("path"), py::arg("overrides") = std::vector<std::string>{});
  m.def("config", &config_from, "Builds a ModelConfig from keyword values, e.g. config(mode='dephasing', g2N=18)");
  m.def("set_parameter", [](SystemParams& p, const std::string& name, double v) { set_parameter(p, name, v); });
  m.def("effective_detunings", [](const SystemParams& p, DampingMode mode) {
    return effective_detunings(p, mode);
  });

  py::class_<FirstOrderState>(m, "FirstOrderState")
      .def_readonly("a1", &FirstOrderState::a1)
      .def_readonly("b1", &FirstOrderState::b1)
      .def_readonly("c1", &FirstOrderState::c1);
  py::class_<InteractionKernel>(m, "InteractionKernel")
      .def_readonly("k", &InteractionKernel::k)
      .def_readonly("v_b", &InteractionKernel::v_b)
      .def_readonly("n_b", &InteractionKernel::n_b)
      .def_readonly("radius", &InteractionKernel::radius);
  py::class_<SecondOrderMoments>(m, "SecondOrderMoments")
      .def_readonly("aa", &SecondOrderMoments::aa)
      .def_readonly("ab", &SecondOrderMoments::ab)
      .def_readonly("ac", &SecondOrderMoments::ac)
      .def_readonly("bb", &SecondOrderMoments::bb)
      .def_readonly("bc", &SecondOrderMoments::bc)
      .def_readonly("cc", &SecondOrderMoments::cc)
      .def("as_list", [](const SecondOrderMoments& s) {
        const auto a = s.as_array();
        return std::vector<cplx>(a.begin(), a.end());
      });

  m.def("first_order", &first_order);
  m.def("bubble_volume", &bubble_volume);
  m.def("kernel_analytic", &kernel_analytic);
  m.def("kernel_quadrature", &kernel_quadrature, py::arg("p"), py::arg("d"), py::arg("r_max"));
  m.def("second_order", &second_order);

  py::class_<CorrelationReport>(m, "CorrelationReport")
      .def_readonly("g2_t_zero", &CorrelationReport::g2_t_zero)
      .def_readonly("g2_r_zero", &CorrelationReport::g2_r_zero)
      .def_readonly("i_trans", &CorrelationReport::i_trans)
      .def_readonly("i_refl", &CorrelationReport::i_refl)
      .def_readonly("pair_refl", &CorrelationReport::pair_refl);
  m.def("correlation_report", &correlation_report);
  m.def("transmitted_g2_zero", &transmitted_g2_zero);

  py::class_<TauTrace>(m, "TauTrace")
      .def_readonly("tau", &TauTrace::tau_grid)
      .def_readonly("g2_tau", &TauTrace::g2_tau)
      .def_readonly("raw", &TauTrace::raw)
      .def_readonly("g2_r_tau", &TauTrace::g2_r_tau)
      .def_property_readonly("method", [](const TauTrace& t) {
        return t.method == TauMethod::Eigen ? "eigen" : "stepper";
      });
  m.def("g2_tau", [](const SystemParams& p, const Detunings& d, const FirstOrderState& f,
                     const SecondOrderMoments& s, double tau_max, int n_pts, bool stepper) {
    TauOptions o;
    o.force_stepper = stepper;
    return g2_tau(p, d, f, s, tau_max, n_pts, o);
  }, py::arg("p"), py::arg("d"), py::arg("fo"), py::arg("so"), py::arg("tau_max"), py::arg("n_pts"),
     py::arg("stepper") = false);

  py::class_<EffectiveNonlinearity>(m, "EffectiveNonlinearity")
      .def_readonly("kappa", &EffectiveNonlinearity::kappa)
      .def_readonly("kappa_r", &EffectiveNonlinearity::kappa_r)
      .def_readonly("kappa_i", &EffectiveNonlinearity::kappa_i);
  m.def("effective_kappa", py::overload_cast<const SystemParams&, const Detunings&>(&effective_kappa));
  m.def("effective_second_order", &effective_second_order);

  py::class_<PointResult>(m, "PointResult")
      .def_readonly("params", &PointResult::params)
      .def_readonly("detunings", &PointResult::detunings)
      .def_readonly("first", &PointResult::first)
      .def_readonly("kernel", &PointResult::kernel)
      .def_readonly("second", &PointResult::second)
      .def_readonly("condition", &PointResult::condition)
      .def_readonly("correlations", &PointResult::correlations)
      .def_readonly("effective", &PointResult::effective)
      .def_property_readonly("warnings", [](const PointResult& r) { return r.diagnostics.warnings; })
      .def("__str__", &format_point);
  m.def("run_point", &run_point);

  m.def("scan", [](const ModelConfig& c, const std::string& parameter, double start, double stop, int n_points,
                   const std::vector<std::string>& observables, int threads) {
    ScanSpec s{parameter, start, stop, n_points, observables};
    std::vector<ScanRow> rows;
    {
      py::gil_scoped_release release;
      rows = compute_scan(c, s, threads);
    }
    py::list out;
    for (const auto& r : rows) out.append(py::make_tuple(r.value, r.observables, r.error));
    return out;
  }, py::arg("config"), py::arg("parameter"), py::arg("start"), py::arg("stop"), py::arg("n_points"),
     py::arg("observables"), py::arg("threads") = 0,
     "Returns [(value, [observables...], error)] in scan order; failed points carry NaN and a message.");
  m.def("find_linear_optimum", [](const ModelConfig& c) { return find_linear_optimum(c).delta_c0; });

  py::class_<OracleReport>(m, "OracleReport")
      .def_readonly("mean_a", &OracleReport::mean_a)
      .def_readonly("mean_aa", &OracleReport::mean_aa)
      .def_readonly("n_photon", &OracleReport::n_photon)
      .def_readonly("pair", &OracleReport::pair)
      .def_readonly("g2_zero", &OracleReport::g2_zero)
      .def_readonly("truncation_error", &OracleReport::truncation_error)
      .def_readonly("reliable", &OracleReport::reliable)
      .def_readonly("dims", &OracleReport::dims)
      .def_property_readonly("rho", [](const OracleReport& r) { return r.state.rho; });
  m.def("three_boson_oracle", [](const SystemParams& p, const Detunings& d, cplx kappa, std::array<int, 3> dims,
                                 int max_dim) {
    OracleOptions o;
    o.max_dim = max_dim;
    py::gil_scoped_release release;
    return three_boson_oracle(p, d, kappa, dims, o);
  }, py::arg("p"), py::arg("d"), py::arg("kappa"), py::arg("dims") = std::array<int, 3>{4, 4, 4},
     py::arg("max_dim") = 8);

  py::class_<FactorizationReport>(m, "FactorizationReport")
      .def_readonly("intensity_slope", &FactorizationReport::intensity_slope)
      .def_readonly("pair_slope", &FactorizationReport::pair_slope)
      .def_property_readonly("warnings", [](const FactorizationReport& r) { return r.diagnostics.warnings; });
  m.def("factorization_check", [](const SystemParams& p, int n_atoms, double pair_shift) {
    FactorizationOptions o;
    o.n_atoms = n_atoms;
    o.pair_shift = pair_shift;
    py::gil_scoped_release release;
    return factorization_check(p, o);
  }, py::arg("p"), py::arg("n_atoms") = 1, py::arg("pair_shift") = 0.0);
}
