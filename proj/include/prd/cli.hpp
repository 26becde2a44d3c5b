// Command implementations behind the executable: run a configured
// simulation and write its outputs, or execute the verification suite.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "prd/config.hpp"
#include "prd/verify.hpp"

namespace prd {

/// Runs the configured simulation, writing the scalar series, snapshots,
/// and (when requested) the report into the configured output directory.
/// Returns 0 on success, 2 on an invariant breach in strict mode, 1 on
/// configuration or I/O failures; diagnostics go to `err`.
int cmd_simulate(const RunConfig& cfg, std::ostream& err);

/// Runs the verification suite at the given level, printing one line per
/// criterion. Returns 0 iff every non-advisory criterion passed.
int cmd_verify(VerifyLevel level, std::uint64_t seed, std::ostream& out);

}  // namespace prd
