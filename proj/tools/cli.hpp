#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperslice::cli {

/// Process exit codes. Stable: scripts depend on them.
enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailed = 1,
    kInvalidInput = 2,
    kDegenerateGeometry = 3,
    kSamplingFailure = 4,
};

/// Version of the JSON payloads; matches the schemas under schemas/.
inline constexpr const char* kSchemaVersion = "1";

/// Runs one CLI invocation. `args` excludes the program name. JSON goes to
/// `out`, diagnostics and human-readable tables to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperslice::cli
