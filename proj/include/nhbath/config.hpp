// config.hpp — flat key=value experiment configuration with strict key
// checking, plus the physics sanity validator.
#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nhbath/core.hpp"
#include "nhbath/spectral.hpp"

namespace nhbath {

// Configuration problems exit with status 2; numeric failures with 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const std::set<std::string>& known_experiments() {
  static const std::set<std::string> s = {"spectrum", "gbz",  "bound", "dressed",
                                          "dynamics", "disorder", "fig2", "fig3",
                                          "fig4",     "fig5", "figS3"};
  return s;
}

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> s = {
      "experiment", "J1", "J2", "kappa", "gamma", "g", "delta0", "L",
      "boundary", "attach", "unit_cell", "attach1", "attach2", "j1", "j2",
      "excite", "nk", "n_realizations", "seed", "t_max", "n_times",
      "re_min", "re_max", "im_min", "im_max", "disorder_kind", "out",
      "threads", "save_vectors", "snapshots"};
  return s;
}

struct ExperimentConfig {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  const std::string& get(const std::string& key, const std::string& fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }

  double num(const std::string& key, double fallback) const {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError("key '" + key + "': cannot parse '" + it->second +
                        "' as a number");
    }
  }

  long integer(const std::string& key, long fallback) const {
    const double v = num(key, static_cast<double>(fallback));
    if (v != std::floor(v))
      throw ConfigError("key '" + key + "': expected an integer");
    return static_cast<long>(v);
  }

  std::string experiment() const {
    auto it = kv.find("experiment");
    if (it == kv.end())
      throw ConfigError("missing required key 'experiment' "
                        "(one of spectrum, gbz, bound, dressed, dynamics, "
                        "disorder, fig2, fig3, fig4, fig5, figS3)");
    if (!known_experiments().count(it->second))
      throw ConfigError("unknown experiment '" + it->second + "'");
    return it->second;
  }

  // --- resolved physics parameters -------------------------------------
  BathParams bath() const {
    BathParams p;
    p.J1 = num("J1", 1.6);
    p.J2 = num("J2", 1.0);
    p.kappa = num("kappa", 1.2);
    p.L = static_cast<int>(integer("L", 20));
    const std::string b = get("boundary", "obc");
    if (b == "obc") p.boundary = Boundary::OBC;
    else if (b == "pbc") p.boundary = Boundary::PBC;
    else throw ConfigError("key 'boundary': expected obc or pbc, got '" + b + "'");
    return p;
  }

  double gamma_or_kappa() const { return num("gamma", num("kappa", 1.2)); }

  Sublattice sublattice(const std::string& key, Sublattice fallback) const {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    if (it->second == "a" || it->second == "A") return Sublattice::A;
    if (it->second == "b" || it->second == "B") return Sublattice::B;
    throw ConfigError("key '" + key + "': expected a or b, got '" + it->second + "'");
  }

  EmitterAttachment attachment() const {
    EmitterAttachment e;
    e.unit_cell = static_cast<int>(integer("unit_cell", bath().L / 2));
    e.sublattice = sublattice("attach", Sublattice::A);
    e.g = num("g", 0.5);
    e.delta0 = num("delta0", 0.0);
    e.gamma = gamma_or_kappa();
    return e;
  }

  std::uint64_t seed() const {
    return static_cast<std::uint64_t>(integer("seed", 12345));
  }

  int threads() const {
    if (has("threads")) return static_cast<int>(integer("threads", 1));
    if (const char* env = std::getenv("NHBATH_THREADS")) {
      try { return std::max(1, std::stoi(env)); } catch (...) {}
    }
    return 1;
  }

  std::string out_prefix() const {
    return get("out", std::string("nhbath_out/") + experiment() + "/");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline void set_key(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value, const std::string& where) {
  if (!known_keys().count(key))
    throw ConfigError(where + ": unknown key '" + key + "'");
  cfg.kv[key] = value;
}

}  // namespace detail

/// Parse `key = value` lines; '#' starts a comment; unknown keys are a hard
/// error with the offending line number.
inline ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key=value, got '" + line + "'");
    detail::set_key(cfg, detail::trim(line.substr(0, eq)),
                    detail::trim(line.substr(eq + 1)), where);
  }
  return cfg;
}

/// Apply a --key=value command-line override.
inline void apply_override(ExperimentConfig& cfg, const std::string& arg) {
  std::string body = arg;
  if (body.rfind("--", 0) == 0) body = body.substr(2);
  const size_t eq = body.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + arg + "': expected --key=value");
  detail::set_key(cfg, detail::trim(body.substr(0, eq)),
                  detail::trim(body.substr(eq + 1)), "command line");
}

/// Physics sanity diagnostics (warnings, not failures). The gap-closing line
/// J2 = J1 - kappa/2 is the intended operating point of the dressed-state
/// and dynamics experiments, so the exceptional-point note fires only for
/// spectrum-type experiments.
inline std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> diags;
  std::string exp;
  try {
    exp = cfg.experiment();
  } catch (const ConfigError& e) {
    diags.push_back(e.what());
    return diags;
  }
  const BathParams p = cfg.bath();
  const double scale = std::abs(p.J1) + std::abs(p.J2) + p.kappa + 1.0;

  const bool wants_analytic = exp == "dressed" || exp == "fig3" || exp == "fig4" ||
                              exp == "fig5" || exp == "figS3" || exp == "dynamics" ||
                              exp == "disorder";
  if (wants_analytic && p.J1 <= p.kappa / 2.0)
    diags.push_back("analytic path unavailable: J1 <= kappa/2 "
                    "(similarity transform degenerate; numeric path only)");

  // fig2 picks its two J1 values internally, so the user-facing J1 is moot
  const bool spectrum_like = exp == "spectrum" || exp == "gbz" || exp == "bound";
  if (spectrum_like &&
      std::abs(p.J2 - (p.J1 - p.kappa / 2.0)) < 1e-9 * scale)
    diags.push_back("on transition line (exceptional point in PBC bath)");

  const auto [tp, tm] = transition_points(p);
  if (std::abs(std::abs(p.J1) - tp) < 1e-3)
    diags.push_back("within 1e-3 of the non-Bloch phase boundary "
                    "|J1| = sqrt(J2^2 + kappa^2/4); winding is undefined there");

  if (cfg.has("gamma") && (exp == "dynamics" || exp == "fig5") &&
      std::abs(cfg.num("gamma", p.kappa) - p.kappa) > 1e-12 * scale)
    diags.push_back("resolvent path requires gamma = kappa; "
                    "only direct propagation will be produced");
  return diags;
}

}  // namespace nhbath
