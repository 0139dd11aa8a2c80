#include "rtspec/manifest.hpp"

#include <cstdio>
#include <ctime>

#include <json.hpp>

namespace rtspec {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string RunManifest::canonical() const {
  std::string s = command;
  s += '|';
  s += dump_config(config);
  s += "|mesh=";
  s += std::to_string(mesh);
  s += "|tol=";
  s += format_double(tol);
  s += '|';
  s += extra;
  return s;
}

RunManifest RunManifest::make(const std::string& command,
                              const FluidConfig& cfg, int mesh, double tol,
                              const std::string& extra) {
  RunManifest m;
  m.command = command;
  m.config = cfg;
  m.mesh = mesh;
  m.tol = tol;
  m.extra = extra;
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(m.canonical())));
  m.input_hash = hex;
  std::time_t now = std::time(nullptr);
  char ts[64];
  std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  m.created_at = ts;
  return m;
}

std::string RunManifest::output_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = nlohmann::json::parse(dump_config(config));
  j["mesh"] = mesh;
  j["tol"] = tol;
  j["flags"] = extra;
  j["input_hash"] = input_hash;
  return j.dump();
}

}  // namespace rtspec
