#include "rtspec/cli_commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rtspec/errors.hpp"

namespace rtspec {

namespace {

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NotApplicableError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRegime;
  } catch (const NotUnstableError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRegime;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

void write_text(const CliOptions& opt, std::ostream& fallback,
                const std::string& text) {
  if (opt.out.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(opt.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + opt.out);
  f << text;
}

GrowthOptions growth_options(const CliOptions& opt) {
  GrowthOptions g;
  g.tol_rel = opt.tol;
  return g;
}

// JSON value for possibly-undefined numbers (NaN/inf are not valid JSON).
nlohmann::json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

int cmd_classify(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const FluidConfig cfg = load_config(opt.config_path);
    const Regime regime = classify_regime(cfg);
    const RunManifest manifest =
        RunManifest::make("classify", cfg, opt.mesh, opt.tol, "");

    nlohmann::json j;
    j["regime"] = to_string(regime.label);
    j["jump_sign"] = regime.jump_sign;
    j["sigma_case"] = to_string(regime.st_case);
    j["jump_density"] = jump_density(cfg);
    if (regime.jump_sign > 0) {
      j["sigma_critical"] = sigma_critical(cfg);
      const double kc = xi_critical(cfg);
      j["xi_critical"] = json_number(kc);
      if (std::isinf(kc)) {
        j["subcritical_count"] = "inf";
      } else {
        int count = 0;
        for (const auto& f : lattice_frequencies(cfg, kc)) {
          if (f.magnitude() < kc * (1 - 1e-12)) ++count;
        }
        j["subcritical_count"] = count;
      }
    } else {
      j["sigma_critical"] = nullptr;
      j["xi_critical"] = nullptr;
      j["subcritical_count"] = 0;
    }
    j["manifest"] = nlohmann::json::parse(manifest.output_json());
    write_text(opt, out, j.dump(2) + "\n");
  });
}

namespace {

struct DispersionRow {
  const DispersionPoint& p;
  double ceiling;
  double proof;
};

std::string csv_field(double v) {
  return std::isnan(v) ? std::string() : format_double(v);
}

std::string dispersion_csv(const std::vector<DispersionPoint>& points,
                           const FluidConfig& cfg) {
  std::ostringstream os;
  os << "n1,n2,xi1,xi2,xi_abs,verdict,lambda,s_star,alpha_at_star,"
        "ceiling_bound,proof_bound,error\n";
  const double ceiling = lambda_ceiling(cfg);
  for (const auto& p : points) {
    const double k = p.xi.magnitude();
    os << p.xi.n1 << ',' << p.xi.n2 << ',' << format_double(p.xi.xi1) << ','
       << format_double(p.xi.xi2) << ',' << format_double(k) << ',';
    if (!p.result) {
      os << "error,,,,";
    } else if (p.result->unstable) {
      os << "unstable," << format_double(p.result->lambda) << ','
         << format_double(p.result->s_star) << ','
         << format_double(p.result->alpha_at_star) << ',';
    } else {
      os << "stable,,,,";
    }
    os << csv_field(ceiling) << ',' << csv_field(lambda_proof_bound(cfg, k))
       << ',' << p.error << '\n';
  }
  return os.str();
}

nlohmann::json dispersion_json_rows(const std::vector<DispersionPoint>& points,
                                    const FluidConfig& cfg) {
  nlohmann::json rows = nlohmann::json::array();
  const double ceiling = lambda_ceiling(cfg);
  for (const auto& p : points) {
    nlohmann::json r;
    r["n1"] = p.xi.n1;
    r["n2"] = p.xi.n2;
    r["xi1"] = p.xi.xi1;
    r["xi2"] = p.xi.xi2;
    r["xi_abs"] = p.xi.magnitude();
    r["ceiling_bound"] = json_number(ceiling);
    r["proof_bound"] = json_number(lambda_proof_bound(cfg, p.xi.magnitude()));
    if (!p.result) {
      r["verdict"] = "error";
      r["error"] = p.error;
    } else if (p.result->unstable) {
      r["verdict"] = "unstable";
      r["lambda"] = p.result->lambda;
      r["s_star"] = p.result->s_star;
      r["alpha_at_star"] = p.result->alpha_at_star;
    } else {
      r["verdict"] = "stable";
      r["alpha_floor"] = p.result->alpha_floor;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

int cmd_dispersion(const CliOptions& opt, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    if (!(opt.xi_max > 0)) throw ConfigError("dispersion requires --xi-max > 0");
    const FluidConfig cfg = load_config(opt.config_path);
    const Mesh mesh = build_mesh(cfg.b, opt.mesh, opt.mesh);
    const auto freqs = lattice_frequencies(cfg, opt.xi_max);
    std::vector<DispersionPoint> points;
    if (!freqs.empty()) {
      points =
          dispersion_curve(mesh, cfg, freqs, growth_options(opt), opt.threads);
    }
    std::ostringstream extra;
    extra << "xi_max=" << format_double(opt.xi_max)
          << ",format=" << opt.format;
    const RunManifest manifest =
        RunManifest::make("dispersion", cfg, opt.mesh, opt.tol, extra.str());
    if (opt.format == "csv") {
      write_text(opt, out, dispersion_csv(points, cfg));
    } else if (opt.format == "json") {
      nlohmann::json j;
      j["manifest"] = nlohmann::json::parse(manifest.output_json());
      j["rows"] = dispersion_json_rows(points, cfg);
      write_text(opt, out, j.dump(2) + "\n");
    } else {
      throw ConfigError("unknown format: " + opt.format);
    }
  });
}

int cmd_sharp_rate(const CliOptions& opt, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    const FluidConfig cfg = load_config(opt.config_path);
    const Mesh mesh = build_mesh(cfg.b, opt.mesh, opt.mesh);
    SharpRateOptions sopt;
    sopt.growth = growth_options(opt);
    sopt.n_threads = opt.threads;
    const SharpRate sr = sharp_rate(mesh, cfg, sopt);
    const RunManifest manifest =
        RunManifest::make("sharp-rate", cfg, opt.mesh, opt.tol, "");

    nlohmann::json j;
    j["lattice_max"] = sr.lattice_max;
    if (sr.achieved_at) {
      j["achieved_at"] = {{"n1", sr.achieved_at->n1},
                          {"n2", sr.achieved_at->n2},
                          {"xi_abs", sr.achieved_at->magnitude()}};
    } else {
      j["achieved_at"] = nullptr;
    }
    j["continuous_envelope"] = sr.continuous_envelope;
    j["envelope_xi"] = sr.envelope_xi;
    j["ceiling_bound"] = sr.ceiling;
    j["rate_kind"] = sr.sigma_minus_zero ? "Lambda_star" : "Lambda";
    if (sr.sigma_minus_zero) {
      j["truncation"] = {{"applied", sr.truncation.applied},
                         {"hit_cap", sr.truncation.hit_cap},
                         {"xi_cap", sr.truncation.xi_cap},
                         {"shells_scanned", sr.truncation.shells_scanned},
                         {"consecutive_rule", sr.truncation.consecutive_rule},
                         {"fraction_rule", sr.truncation.fraction_rule}};
    } else {
      j["truncation"] = nullptr;
    }
    j["manifest"] = nlohmann::json::parse(manifest.output_json());
    write_text(opt, out, j.dump(2) + "\n");
  });
}

namespace {

void write_doubles(std::ofstream& f, const std::vector<double>& v) {
  f.write(reinterpret_cast<const char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace

int cmd_mode(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.out.empty()) throw ConfigError("mode requires --out");
    if (opt.n1 == 0 && opt.n2 == 0) {
      throw ConfigError("mode requires a nonzero lattice index --xi n1 n2");
    }
    const FluidConfig cfg = load_config(opt.config_path);
    const Mesh mesh = build_mesh(cfg.b, opt.mesh, opt.mesh);
    const Frequency xi(opt.n1, opt.n2, cfg);

    DispersionPoint point;
    point.xi = xi;
    point.result = growth_rate(mesh, cfg, xi.magnitude(), growth_options(opt));
    if (!point.result->unstable) {
      throw NotUnstableError("frequency (" + std::to_string(opt.n1) + ", " +
                             std::to_string(opt.n2) +
                             ") is not unstable for this config");
    }
    NormalMode mode = build_mode(point, mesh, cfg);
    // Amplitude convention: the linear mode is scale-free, so exports pick
    // one. L2 rescales to a unit combined L2 norm of (u, eta); J keeps the
    // variational normalization J(psi) = 1.
    double scale = opt.amplitude;
    if (opt.normalize == "L2") {
      scale /= mode_l2_norm(mode, cfg);
    } else if (opt.normalize != "J") {
      throw ConfigError("unknown --normalize (want L2 or J): " +
                        opt.normalize);
    }
    if (scale != 1.0) mode = scale_mode(mode, scale);
    const FieldSample fs = sample_fields(mode, cfg, opt.time, opt.grid);

    PhysicalFieldSample phys;
    if (opt.physical) {
      const double scale = std::exp(mode.lambda * opt.time);
      const SurfaceFunction ep =
          SurfaceFunction::single_mode(xi, mode.eta_plus, cfg.L1, cfg.L2)
              .scaled(scale);
      const SurfaceFunction em =
          SurfaceFunction::single_mode(xi, mode.eta_minus, cfg.L1, cfg.L2)
              .scaled(scale);
      phys = push_mode_to_physical(mode, fs, ep, em,
                                   default_extension_coeffs(), cfg);
    }

    std::ostringstream extra;
    extra << "xi=(" << opt.n1 << "," << opt.n2 << "),t="
          << format_double(opt.time) << ",grid=" << opt.grid.n1 << "x"
          << opt.grid.n2 << "x" << opt.grid.n3
          << ",physical=" << (opt.physical ? 1 : 0)
          << ",normalize=" << opt.normalize
          << ",amplitude=" << format_double(opt.amplitude)
          << ",format=" << opt.format;
    const RunManifest manifest =
        RunManifest::make("mode", cfg, opt.mesh, opt.tol, extra.str());

    if (opt.format == "csv") {
      std::ostringstream os;
      os << "x1,x2,x3,u1,u2,u3,p";
      if (opt.physical) os << ",y3,jacobian";
      os << '\n';
      for (int i1 = 0; i1 < fs.grid.n1; ++i1) {
        for (int i2 = 0; i2 < fs.grid.n2; ++i2) {
          for (int i3 = 0; i3 < fs.grid.n3; ++i3) {
            const size_t idx =
                (static_cast<size_t>(i1) * fs.grid.n2 + i2) * fs.grid.n3 + i3;
            os << format_double(fs.x1[i1]) << ',' << format_double(fs.x2[i2])
               << ',' << format_double(fs.x3[i3]) << ','
               << format_double(fs.u1[idx]) << ',' << format_double(fs.u2[idx])
               << ',' << format_double(fs.u3[idx]) << ','
               << format_double(fs.p[idx]);
            if (opt.physical) {
              os << ',' << format_double(phys.y3[idx]) << ','
                 << format_double(phys.jacobian[idx]);
            }
            os << '\n';
          }
        }
      }
      std::ofstream f(opt.out, std::ios::binary);
      if (!f) throw ConfigError("cannot open output file: " + opt.out);
      f << os.str();
      // Surface samples in a sidecar CSV.
      std::ofstream fe(opt.out + ".eta.csv", std::ios::binary);
      if (!fe) throw ConfigError("cannot open output file: " + opt.out +
                                 ".eta.csv");
      fe << "x1,x2,eta_plus,eta_minus\n";
      for (int i1 = 0; i1 < fs.grid.n1; ++i1) {
        for (int i2 = 0; i2 < fs.grid.n2; ++i2) {
          const size_t idx = static_cast<size_t>(i1) * fs.grid.n2 + i2;
          fe << format_double(fs.x1[i1]) << ',' << format_double(fs.x2[i2])
             << ',' << format_double(fs.eta_plus[idx]) << ','
             << format_double(fs.eta_minus[idx]) << '\n';
        }
      }
      return;
    }

    // Binary format: JSON header <out>.json plus raw little-endian float64
    // arrays concatenated in <out>.bin.
    nlohmann::json header;
    header["grid"] = {{"n1", fs.grid.n1}, {"n2", fs.grid.n2},
                      {"n3", fs.grid.n3}};
    header["spacing"] = {{"dx1", fs.x1.size() > 1 ? fs.x1[1] - fs.x1[0] : 0.0},
                         {"dx2", fs.x2.size() > 1 ? fs.x2[1] - fs.x2[0] : 0.0},
                         {"dx3", fs.x3.size() > 1 ? fs.x3[1] - fs.x3[0] : 0.0}};
    header["time"] = fs.time;
    header["lambda"] = fs.lambda;
    header["xi"] = {{"n1", xi.n1}, {"n2", xi.n2},
                    {"xi1", xi.xi1}, {"xi2", xi.xi2}};
    header["dtype"] = "float64";
    header["byte_order"] = "little";
    header["index_order"] = "(i1 * n2 + i2) * n3 + i3";
    header["physical"] = opt.physical;
    header["manifest"] = nlohmann::json::parse(manifest.output_json());

    std::vector<std::pair<std::string, const std::vector<double>*>> arrays = {
        {"x1", &fs.x1},       {"x2", &fs.x2},
        {"x3", &fs.x3},       {"u1", &fs.u1},
        {"u2", &fs.u2},       {"u3", &fs.u3},
        {"p", &fs.p},         {"eta_plus", &fs.eta_plus},
        {"eta_minus", &fs.eta_minus}};
    if (opt.physical) {
      arrays.emplace_back("y3", &phys.y3);
      arrays.emplace_back("jacobian", &phys.jacobian);
    }
    nlohmann::json desc = nlohmann::json::array();
    size_t offset = 0;
    for (const auto& [name, vec] : arrays) {
      desc.push_back({{"name", name},
                      {"offset_doubles", offset},
                      {"count", vec->size()}});
      offset += vec->size();
    }
    header["arrays"] = desc;

    std::ofstream hj(opt.out + ".json", std::ios::binary);
    if (!hj) throw ConfigError("cannot open output file: " + opt.out +
                               ".json");
    hj << header.dump(2) << "\n";
    std::ofstream bin(opt.out + ".bin", std::ios::binary);
    if (!bin) throw ConfigError("cannot open output file: " + opt.out +
                                ".bin");
    for (const auto& [name, vec] : arrays) write_doubles(bin, *vec);
    (void)out;
  });
}

int cmd_convergence(const CliOptions& opt, std::ostream& out,
                    std::ostream& err) {
  return guarded(err, [&] {
    if (opt.meshes.size() < 3) {
      throw ConfigError("convergence requires at least 3 mesh sizes");
    }
    if (opt.n1 == 0 && opt.n2 == 0) {
      throw ConfigError("convergence requires --xi n1 n2");
    }
    const FluidConfig cfg = load_config(opt.config_path);
    const Frequency xi(opt.n1, opt.n2, cfg);

    std::vector<double> lambdas;
    for (int m : opt.meshes) {
      const Mesh mesh = build_mesh(cfg.b, m, m);
      const GrowthResult r =
          growth_rate(mesh, cfg, xi.magnitude(), growth_options(opt));
      lambdas.push_back(r.unstable ? r.lambda : 0.0);
    }

    // Richardson order from the last three entries (assumes a fixed mesh
    // ratio between consecutive entries).
    const size_t n = lambdas.size();
    const double d1 = lambdas[n - 2] - lambdas[n - 3];
    const double d2 = lambdas[n - 1] - lambdas[n - 2];
    const double ratio =
        static_cast<double>(opt.meshes[n - 1]) / opt.meshes[n - 2];
    double order = std::numeric_limits<double>::quiet_NaN();
    double extrap = lambdas[n - 1];
    if (d1 != 0 && d2 != 0 && ratio > 1) {
      order = std::log(std::abs(d1 / d2)) / std::log(ratio);
      const double denom = std::pow(ratio, order) - 1;
      if (denom > 0) extrap = lambdas[n - 1] + d2 / denom;
    }

    std::ostringstream extra;
    extra << "xi=(" << opt.n1 << "," << opt.n2 << "),meshes=";
    for (size_t i = 0; i < opt.meshes.size(); ++i) {
      if (i) extra << ';';
      extra << opt.meshes[i];
    }
    extra << ",format=" << opt.format;
    const RunManifest manifest =
        RunManifest::make("convergence", cfg, opt.mesh, opt.tol, extra.str());

    if (opt.format == "csv") {
      std::ostringstream os;
      os << "mesh,lambda,delta\n";
      for (size_t i = 0; i < n; ++i) {
        os << opt.meshes[i] << ',' << format_double(lambdas[i]) << ',';
        if (i > 0) os << format_double(lambdas[i] - lambdas[i - 1]);
        os << '\n';
      }
      os << "# order," << csv_field(order) << '\n';
      os << "# extrapolated," << format_double(extrap) << '\n';
      write_text(opt, out, os.str());
    } else {
      nlohmann::json j;
      nlohmann::json rows = nlohmann::json::array();
      for (size_t i = 0; i < n; ++i) {
        nlohmann::json r;
        r["mesh"] = opt.meshes[i];
        r["lambda"] = lambdas[i];
        if (i > 0) r["delta"] = lambdas[i] - lambdas[i - 1];
        rows.push_back(std::move(r));
      }
      j["rows"] = rows;
      j["order"] = json_number(order);
      j["extrapolated"] = extrap;
      j["manifest"] = nlohmann::json::parse(manifest.output_json());
      write_text(opt, out, j.dump(2) + "\n");
    }
  });
}

}  // namespace rtspec
