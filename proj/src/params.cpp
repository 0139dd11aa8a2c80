#include "rtspec/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace rtspec {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

// Sign of the density jump with a 1e-12 relative dead band around zero.
int jump_sign_of(const FluidConfig& cfg) {
  const double jump = cfg.rho_plus - cfg.rho_minus;
  const double scale = std::max(cfg.rho_plus, cfg.rho_minus);
  if (jump > kRegimeTol * scale) return 1;
  if (jump < -kRegimeTol * scale) return -1;
  return 0;
}

}  // namespace

void FluidConfig::validate() const {
  require(rho_plus > 0, "rho_plus must be > 0");
  require(rho_minus > 0, "rho_minus must be > 0");
  require(mu_plus > 0, "mu_plus must be > 0");
  require(mu_minus > 0, "mu_minus must be > 0");
  require(g > 0, "g must be > 0");
  require(sigma_plus >= 0, "sigma_plus must be >= 0");
  require(sigma_minus >= 0, "sigma_minus must be >= 0");
  require(b > 0, "b must be > 0");
  require(L1 > 0, "L1 must be > 0");
  require(L2 > 0, "L2 must be > 0");
  // Pairing rule: tension acts on both surfaces or on neither.
  require(sigma_plus > 0 || sigma_minus == 0,
          "surface-tension pairing: sigma_minus > 0 requires sigma_plus > 0");
  for (double v : {rho_plus, rho_minus, mu_plus, mu_minus, g, sigma_plus,
                   sigma_minus, b, L1, L2}) {
    require(std::isfinite(v), "config fields must be finite");
  }
}

std::string to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::UnstableNoST: return "UnstableNoST";
    case RegimeLabel::UnstableST: return "UnstableST";
    case RegimeLabel::StableAlmostExp: return "StableAlmostExp";
    case RegimeLabel::StableExp: return "StableExp";
    case RegimeLabel::CriticalLWP: return "CriticalLWP";
  }
  return "?";
}

std::string to_string(SigmaCase c) {
  switch (c) {
    case SigmaCase::NotApplicable: return "NotApplicable";
    case SigmaCase::NoST: return "NoST";
    case SigmaCase::BelowCritical: return "BelowCritical";
    case SigmaCase::AtCritical: return "AtCritical";
    case SigmaCase::AboveCritical: return "AboveCritical";
  }
  return "?";
}

double jump_density(const FluidConfig& cfg) {
  return cfg.rho_plus - cfg.rho_minus;
}

double sigma_critical(const FluidConfig& cfg) {
  if (jump_sign_of(cfg) <= 0) {
    throw NotApplicableError(
        "sigma_critical requires a positive density jump");
  }
  return cfg.g * jump_density(cfg) * std::max(cfg.L1 * cfg.L1, cfg.L2 * cfg.L2);
}

double xi_critical(const FluidConfig& cfg) {
  if (jump_sign_of(cfg) <= 0) {
    throw NotApplicableError("xi_critical requires a positive density jump");
  }
  if (cfg.sigma_minus == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(cfg.g * jump_density(cfg) / cfg.sigma_minus);
}

Regime classify_regime(const FluidConfig& cfg) {
  cfg.validate();
  const int sign = jump_sign_of(cfg);

  if (cfg.sigma_plus == 0) {
    // No surface tension on either surface.
    Regime r{RegimeLabel::UnstableNoST, sign, SigmaCase::NoST};
    if (sign < 0) r.label = RegimeLabel::StableAlmostExp;
    else if (sign == 0) r.label = RegimeLabel::CriticalLWP;
    return r;
  }

  if (sign <= 0) {
    return Regime{RegimeLabel::StableExp, sign, SigmaCase::NotApplicable};
  }

  const double sc = sigma_critical(cfg);
  const double band = kRegimeTol * std::max(sc, cfg.sigma_minus);
  if (cfg.sigma_minus < sc - band) {
    return Regime{RegimeLabel::UnstableST, sign, SigmaCase::BelowCritical};
  }
  if (cfg.sigma_minus > sc + band) {
    return Regime{RegimeLabel::StableExp, sign, SigmaCase::AboveCritical};
  }
  return Regime{RegimeLabel::CriticalLWP, sign, SigmaCase::AtCritical};
}

std::vector<Frequency> lattice_frequencies(const FluidConfig& cfg,
                                           double xi_max) {
  if (!(xi_max > 0)) throw ConfigError("xi_max must be > 0");
  std::vector<Frequency> out;
  const int N1 = static_cast<int>(std::floor(xi_max * cfg.L1));
  const int N2 = static_cast<int>(std::floor(xi_max * cfg.L2));
  const double max2 = xi_max * xi_max;
  for (int n1 = -N1; n1 <= N1; ++n1) {
    for (int n2 = -N2; n2 <= N2; ++n2) {
      if (n1 == 0 && n2 == 0) continue;
      Frequency f(n1, n2, cfg);
      const double m2 = f.xi1 * f.xi1 + f.xi2 * f.xi2;
      if (m2 <= max2) out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end(),
            [&cfg](const Frequency& a, const Frequency& b) {
              const double ka = a.magnitude_key(cfg);
              const double kb = b.magnitude_key(cfg);
              if (ka != kb) return ka < kb;
              if (a.n1 != b.n1) return a.n1 < b.n1;
              return a.n2 < b.n2;
            });
  return out;
}

namespace {

const char* const kConfigKeys[] = {"rho_plus", "rho_minus", "mu_plus",
                                   "mu_minus", "g",         "sigma_plus",
                                   "sigma_minus", "b",      "L1",
                                   "L2"};

double get_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw ConfigError(std::string("missing config key: ") + key);
  }
  const auto& v = j.at(key);
  if (!v.is_number()) {
    throw ConfigError(std::string("config key must be a number: ") + key);
  }
  return v.get<double>();
}

}  // namespace

FluidConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kConfigKeys) {
      if (it.key() == k) { known = true; break; }
    }
    if (!known) throw ConfigError("unknown config key: " + it.key());
  }
  FluidConfig cfg;
  cfg.rho_plus = get_number(j, "rho_plus");
  cfg.rho_minus = get_number(j, "rho_minus");
  cfg.mu_plus = get_number(j, "mu_plus");
  cfg.mu_minus = get_number(j, "mu_minus");
  cfg.g = get_number(j, "g");
  cfg.sigma_plus = get_number(j, "sigma_plus");
  cfg.sigma_minus = get_number(j, "sigma_minus");
  cfg.b = get_number(j, "b");
  cfg.L1 = get_number(j, "L1");
  cfg.L2 = get_number(j, "L2");
  cfg.validate();
  return cfg;
}

FluidConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const FluidConfig& cfg) {
  nlohmann::json j;
  j["rho_plus"] = cfg.rho_plus;
  j["rho_minus"] = cfg.rho_minus;
  j["mu_plus"] = cfg.mu_plus;
  j["mu_minus"] = cfg.mu_minus;
  j["g"] = cfg.g;
  j["sigma_plus"] = cfg.sigma_plus;
  j["sigma_minus"] = cfg.sigma_minus;
  j["b"] = cfg.b;
  j["L1"] = cfg.L1;
  j["L2"] = cfg.L2;
  return j.dump();
}

}  // namespace rtspec
