#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rtspec/cli_commands.hpp"
#include "rtspec/geometry.hpp"
#include "rtspec/growth.hpp"
#include "rtspec/modes.hpp"

namespace py = pybind11;
using namespace rtspec;

namespace {

FluidConfig config_from_dict(const py::dict& d) {
  std::string json = "{";
  bool first = true;
  for (auto item : d) {
    if (!first) json += ",";
    first = false;
    json += "\"" + py::cast<std::string>(item.first) + "\":" +
            py::cast<std::string>(py::str(item.second));
  }
  json += "}";
  return parse_config(json);
}

py::dict growth_to_dict(const GrowthResult& r) {
  py::dict d;
  d["unstable"] = r.unstable;
  if (r.unstable) {
    d["lambda"] = r.lambda;
    d["s_star"] = r.s_star;
    d["alpha_at_star"] = r.alpha_at_star;
    d["psi"] = std::vector<double>(r.psi.data(), r.psi.data() + r.psi.size());
  } else {
    d["alpha_floor"] = r.alpha_floor;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "growth-rate spectrum of two superposed viscous fluid layers";

  static py::exception<Error> exc(m, "RtspecError");
  py::register_exception<ConfigError>(m, "RtspecConfigError", exc.ptr());
  py::register_exception<NotUnstableError>(m, "NotUnstableError", exc.ptr());

  py::class_<FluidConfig>(m, "FluidConfig")
      .def(py::init(&config_from_dict))
      .def_readwrite("rho_plus", &FluidConfig::rho_plus)
      .def_readwrite("rho_minus", &FluidConfig::rho_minus)
      .def_readwrite("mu_plus", &FluidConfig::mu_plus)
      .def_readwrite("mu_minus", &FluidConfig::mu_minus)
      .def_readwrite("g", &FluidConfig::g)
      .def_readwrite("sigma_plus", &FluidConfig::sigma_plus)
      .def_readwrite("sigma_minus", &FluidConfig::sigma_minus)
      .def_readwrite("b", &FluidConfig::b)
      .def_readwrite("L1", &FluidConfig::L1)
      .def_readwrite("L2", &FluidConfig::L2)
      .def("validate", &FluidConfig::validate);

  m.def("jump_density", &jump_density);
  m.def("sigma_critical", &sigma_critical);
  m.def("xi_critical", &xi_critical);
  m.def("lambda_ceiling", &lambda_ceiling);
  m.def("lambda_proof_bound", &lambda_proof_bound);

  m.def("classify_regime", [](const FluidConfig& cfg) {
    const Regime r = classify_regime(cfg);
    py::dict d;
    d["label"] = to_string(r.label);
    d["jump_sign"] = r.jump_sign;
    d["sigma_case"] = to_string(r.st_case);
    return d;
  });

  m.def(
      "lattice_frequencies",
      [](const FluidConfig& cfg, double xi_max) {
        py::list out;
        for (const auto& f : lattice_frequencies(cfg, xi_max)) {
          out.append(py::make_tuple(f.n1, f.n2, f.xi1, f.xi2, f.magnitude()));
        }
        return out;
      },
      py::arg("config"), py::arg("xi_max"));

  m.def(
      "solve_alpha",
      [](const FluidConfig& cfg, double xi_abs, double s, int mesh_n) {
        const Mesh mesh = build_mesh(cfg.b, mesh_n, mesh_n);
        const AlphaResult r = solve_alpha(mesh, cfg, xi_abs, s);
        py::dict d;
        d["alpha"] = r.alpha;
        d["residual"] = r.residual;
        d["degenerate"] = r.degenerate;
        return d;
      },
      py::arg("config"), py::arg("xi_abs"), py::arg("s"),
      py::arg("mesh") = 64);

  m.def(
      "growth_rate",
      [](const FluidConfig& cfg, double xi_abs, int mesh_n, double tol) {
        const Mesh mesh = build_mesh(cfg.b, mesh_n, mesh_n);
        GrowthOptions opt;
        opt.tol_rel = tol;
        return growth_to_dict(growth_rate(mesh, cfg, xi_abs, opt));
      },
      py::arg("config"), py::arg("xi_abs"), py::arg("mesh") = 64,
      py::arg("tol") = 1e-10);

  m.def(
      "dispersion",
      [](const FluidConfig& cfg, double xi_max, int mesh_n, int threads) {
        const Mesh mesh = build_mesh(cfg.b, mesh_n, mesh_n);
        const auto freqs = lattice_frequencies(cfg, xi_max);
        py::list out;
        if (freqs.empty()) return out;
        for (const auto& p :
             dispersion_curve(mesh, cfg, freqs, {}, threads)) {
          py::dict d;
          d["n1"] = p.xi.n1;
          d["n2"] = p.xi.n2;
          d["xi_abs"] = p.xi.magnitude();
          if (p.result) {
            d["result"] = growth_to_dict(*p.result);
          } else {
            d["error"] = p.error;
          }
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("config"), py::arg("xi_max"), py::arg("mesh") = 64,
      py::arg("threads") = 1);

  m.def(
      "sharp_rate",
      [](const FluidConfig& cfg, int mesh_n, int threads) {
        const Mesh mesh = build_mesh(cfg.b, mesh_n, mesh_n);
        SharpRateOptions opt;
        opt.n_threads = threads;
        const SharpRate sr = sharp_rate(mesh, cfg, opt);
        py::dict d;
        d["lattice_max"] = sr.lattice_max;
        d["continuous_envelope"] = sr.continuous_envelope;
        d["envelope_xi"] = sr.envelope_xi;
        d["ceiling"] = sr.ceiling;
        if (sr.achieved_at) {
          d["achieved_at"] = py::make_tuple(sr.achieved_at->n1,
                                            sr.achieved_at->n2);
        }
        d["truncated"] = sr.truncation.applied;
        return d;
      },
      py::arg("config"), py::arg("mesh") = 64, py::arg("threads") = 1);

  m.def(
      "mode_fields",
      [](const FluidConfig& cfg, int n1, int n2, double t, int g1, int g2,
         int g3, int mesh_n) {
        const Mesh mesh = build_mesh(cfg.b, mesh_n, mesh_n);
        const Frequency xi(n1, n2, cfg);
        DispersionPoint point;
        point.xi = xi;
        point.result = growth_rate(mesh, cfg, xi.magnitude(), {});
        const NormalMode mode = build_mode(point, mesh, cfg);
        const FieldSample fs = sample_fields(mode, cfg, t, {g1, g2, g3});
        py::dict d;
        d["lambda"] = mode.lambda;
        d["eta_plus_amp"] = mode.eta_plus;
        d["eta_minus_amp"] = mode.eta_minus;
        d["x3"] = fs.x3;
        d["u1"] = fs.u1;
        d["u2"] = fs.u2;
        d["u3"] = fs.u3;
        d["p"] = fs.p;
        d["eta_plus"] = fs.eta_plus;
        d["eta_minus"] = fs.eta_minus;
        return d;
      },
      py::arg("config"), py::arg("n1"), py::arg("n2"), py::arg("t") = 0.0,
      py::arg("g1") = 4, py::arg("g2") = 4, py::arg("g3") = 9,
      py::arg("mesh") = 32);
}
