#pragma once

// Run manifests: every CLI output directory or file gets a sidecar recording
// the subcommand, resolved flags, seed and input digests, enough to re-run
// the command and reproduce the outputs byte for byte. Digests are FNV-1a64
// fingerprints (change detection, not cryptographic).

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netcg/graph.hpp"
#include "netcg/rng.hpp"

namespace netcg {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string file_digest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open " + path + " for digest");
  std::ostringstream ss;
  ss << is.rdbuf();
  char buf[32];
  snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
           static_cast<unsigned long long>(fnv1a64(ss.str())));
  return buf;
}

struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> flags;  // resolved values, sorted by name
  uint64_t seed = 0;
  std::map<std::string, std::string> inputs;  // path -> digest
  std::vector<std::string> outputs;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "netcg";
    j["version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["seed"] = seed;
    nlohmann::ordered_json jf = nlohmann::ordered_json::object();
    for (const auto& [k, v] : flags) jf[k] = v;
    j["flags"] = jf;
    nlohmann::ordered_json ji = nlohmann::ordered_json::object();
    for (const auto& [k, v] : inputs) ji[k] = v;
    j["inputs"] = ji;
    j["outputs"] = outputs;
    return j;
  }

  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot open " + path + " for writing");
    os << to_json().dump(2) << "\n";
  }
};

}  // namespace netcg
