#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tiertune/perfdb.hpp"
#include "tiertune/tiersim.hpp"

namespace tiertune::harness {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitInfeasible = 3, kExitIo = 4 };

/// Grid file (JSON object).  Each configuration dimension is a list of values
/// or {"min", "max", "count"}; absent dimensions take the ConfigVector default.
/// Optional "fm_fractions" (list) and "sample" (take N configs, seeded).
struct Grid {
  std::vector<perfdb::ConfigVector> configs;  // cartesian order, last dimension fastest
  std::vector<double> fm_fractions;
};

/// Throws Error{InvalidParams} on malformed grids.
Grid parse_grid(const std::string& json_text, std::uint64_t seed);

/// Reads TierParams fields from a JSON object; unknown keys are rejected.
sim::TierParams parse_params(const std::string& json_text);

int exit_code_for(const std::exception& e) noexcept;

/// Entry point shared by the tierctl binary and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tiertune::harness
