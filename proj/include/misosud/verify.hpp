#pragma once

// Self-checks runnable from the command line. Each suite returns a JSON
// report carrying a boolean "pass".

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "misosud/network.hpp"
#include "misosud/oracle.hpp"

namespace misosud {

// The four-antenna, three-user real problem with equality caps 0.3 / 0.6 at
// P = 1 whose rank-1 optimum is strictly below the general-rank optimum.
ConstrainedMaxProblem example1_problem();

// Three users with five real antennas each, P = (1, 1.5, 2).
MisoNetwork reference_network(Field field = Field::real);

struct VerifyOptions {
  std::uint64_t seed = 1;
  int instances = 200;
  std::optional<ConstrainedMaxProblem> problem;  // example1 override
};

std::vector<std::string> verify_suites();  // "all" excluded

// Throws ConfigError for an unknown suite name.
nlohmann::json run_verify(const std::string& suite, const VerifyOptions& opt = {});

}  // namespace misosud
