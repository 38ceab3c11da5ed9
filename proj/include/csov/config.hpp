#pragma once

#include <initializer_list>
#include <optional>
#include <string>

#include <json.hpp>

#include "csov/wavepacket.hpp"

namespace csov {

using json = nlohmann::json;

json potential_to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const json& j);

json packet_to_json(const PacketSpec& packet);
PacketSpec packet_from_json(const json& j);

json quadrature_to_json(const QuadratureConfig& cfg);
QuadratureConfig quadrature_from_json(const json& j);

// Throws ConfigError naming the first key of `obj` not in `allowed`.
void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where);

// Loaded config file. Command sections stay as JSON and are validated by
// the command that reads them.
struct RunConfig {
  std::optional<PotentialSpec> potential;
  QuadratureConfig quadrature;
  std::string output_path;
  std::string format = "csv";
  int threads = 1;
  json sections = json::object();

  void validate() const;
};

// Parse errors report "path:line:column".
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const json& j);

}  // namespace csov
