#pragma once

#include <string>
#include <vector>

namespace lcc::cli {

/// Runs one subcommand. Returns 0 on success, 2 on validation errors
/// (unknown flags, malformed files), 3 when a declared acceptance
/// threshold fails. Identical arguments produce identical output bytes.
int run(const std::vector<std::string>& args);

} // namespace lcc::cli
