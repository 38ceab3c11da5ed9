#include "csov/config.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

namespace csov {

namespace {

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

const char* command_sections[] = {"coeffs", "overlap", "figure", "packet", "verify", "regcmp"};

}  // namespace

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& item : obj.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                [&](const char* a) { return item.key() == a; });
    if (!ok) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

json potential_to_json(const PotentialSpec& spec) {
  json j;
  j["kind"] = kind_name(spec.kind());
  switch (spec.kind()) {
    case PotentialKind::free: break;
    case PotentialKind::delta: j["g"] = spec.g(); break;
    case PotentialKind::square_well:
      j["V0"] = spec.V0();
      j["a"] = spec.a();
      break;
    case PotentialKind::poschl_teller:
      j["V0"] = spec.V0();
      j["mu"] = spec.mu();
      break;
    case PotentialKind::linear: j["g_accel"] = spec.g_accel(); break;
  }
  j["mass"] = spec.mass();
  return j;
}

PotentialSpec potential_from_json(const json& j) {
  const std::string where = "potential";
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError(where + ": missing string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  const double m = number_or(j, "mass", 1.0, where);
  if (kind == "free") {
    reject_unknown_keys(j, {"kind", "mass"}, where);
    return PotentialSpec::free_particle(m);
  }
  if (kind == "delta") {
    reject_unknown_keys(j, {"kind", "mass", "g"}, where);
    return PotentialSpec::delta(number(j, "g", where), m);
  }
  if (kind == "square_well") {
    reject_unknown_keys(j, {"kind", "mass", "V0", "a"}, where);
    return PotentialSpec::square_well(number(j, "V0", where), number(j, "a", where), m);
  }
  if (kind == "poschl_teller") {
    reject_unknown_keys(j, {"kind", "mass", "V0", "nu", "mu"}, where);
    if (j.contains("nu") == j.contains("V0")) throw ConfigError(where + ": give exactly one of 'V0' or 'nu'");
    if (j.contains("nu")) return PotentialSpec::poschl_teller_nu(number(j, "nu", where), number(j, "mu", where), m);
    return PotentialSpec::poschl_teller(number(j, "V0", where), number(j, "mu", where), m);
  }
  if (kind == "linear") {
    reject_unknown_keys(j, {"kind", "mass", "g_accel"}, where);
    return PotentialSpec::linear(m, number(j, "g_accel", where));
  }
  throw ConfigError(where + ": unknown kind '" + kind + "'");
}

json packet_to_json(const PacketSpec& p) {
  return {{"P0", p.P0},
          {"X0", p.X0},
          {"sigma", p.sigma},
          {"k_min", p.k_grid.k_min},
          {"k_max", p.k_grid.k_max},
          {"n_points", p.k_grid.n_points}};
}

PacketSpec packet_from_json(const json& j) {
  const std::string where = "packet";
  reject_unknown_keys(j, {"P0", "X0", "sigma", "k_min", "k_max", "n_points"}, where);
  const double P0 = number(j, "P0", where), X0 = number_or(j, "X0", 0.0, where);
  const double sigma = number(j, "sigma", where);
  const int n = static_cast<int>(number_or(j, "n_points", 801, where));
  PacketSpec p = PacketSpec::gaussian(P0, X0, sigma, n);
  p.k_grid.k_min = number_or(j, "k_min", p.k_grid.k_min, where);
  p.k_grid.k_max = number_or(j, "k_max", p.k_grid.k_max, where);
  return p;
}

json quadrature_to_json(const QuadratureConfig& cfg) {
  return {{"abs_tol", cfg.abs_tol}, {"rel_tol", cfg.rel_tol}, {"max_subdivisions", cfg.max_subdivisions}};
}

QuadratureConfig quadrature_from_json(const json& j) {
  const std::string where = "quadrature";
  reject_unknown_keys(j, {"abs_tol", "rel_tol", "max_subdivisions"}, where);
  QuadratureConfig cfg;
  cfg.abs_tol = number_or(j, "abs_tol", cfg.abs_tol, where);
  cfg.rel_tol = number_or(j, "rel_tol", cfg.rel_tol, where);
  cfg.max_subdivisions = static_cast<int>(number_or(j, "max_subdivisions", cfg.max_subdivisions, where));
  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  quadrature.validate();
  if (format != "csv" && format != "json") throw ConfigError("format must be 'csv' or 'json'");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

RunConfig config_from_json(const json& j) {
  reject_unknown_keys(j, {"potential", "quadrature", "output", "format", "threads", "coeffs", "overlap",
                          "figure", "packet", "verify", "regcmp"},
                      "config");
  RunConfig rc;
  if (j.contains("potential")) rc.potential = potential_from_json(j.at("potential"));
  if (j.contains("quadrature")) rc.quadrature = quadrature_from_json(j.at("quadrature"));
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("config: 'output' must be a string");
    rc.output_path = j.at("output").get<std::string>();
  }
  if (j.contains("format")) {
    if (!j.at("format").is_string()) throw ConfigError("config: 'format' must be a string");
    rc.format = j.at("format").get<std::string>();
  }
  if (j.contains("threads")) {
    if (!j.at("threads").is_number_integer()) throw ConfigError("config: 'threads' must be an integer");
    rc.threads = j.at("threads").get<int>();
  }
  for (const char* name : command_sections)
    if (j.contains(name)) {
      if (!j.at(name).is_object()) throw ConfigError(std::string("config: '") + name + "' must be an object");
      rc.sections[name] = j.at(name);
    }
  rc.validate();
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const std::size_t line = 1 + std::count(text.begin(), text.begin() + end, '\n');
    const std::size_t nl = text.rfind('\n', end == 0 ? 0 : end - 1);
    const std::size_t col = nl == std::string::npos ? end + 1 : end - nl;
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace csov
