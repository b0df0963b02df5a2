#pragma once

// JSON run configuration.
//
//   {
//     "field": "real" | "complex",          optional
//     "powers": [P1, ..., Pm],
//     "channels": [H1, ..., Hm],            Hj: t_j rows x m columns,
//                                           column i is h_ji
//     "Q": [Q1, Q2]                         optional, two-user caps
//   }
//
// Entries are plain reals or [re, im] pairs. A standalone constrained
// problem can be given instead of (or next to) a network:
//
//   "problem": {"target": [...], "P": 1, "field": "real",
//               "caps": [{"h": [...], "bound": 0.3, "kind": "equality"}]}

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "misosud/network.hpp"
#include "misosud/oracle.hpp"

namespace misosud {

struct RunConfig {
  std::optional<MisoNetwork> network;
  std::optional<ConstrainedMaxProblem> problem;
  std::optional<std::pair<double, double>> Q;
};

// The field is real iff `force_real` or "field": "real"; a real field with a
// complex entry is a ConfigError. Every malformed document throws
// ConfigError.
RunConfig parse_config(const nlohmann::json& doc, bool force_real = false);
RunConfig load_config(const std::filesystem::path& path, bool force_real = false);

// Serializes with 17 significant digits so that parsing the output restores
// every double bit for bit.
std::string dump_config(const RunConfig& cfg);

}  // namespace misosud
