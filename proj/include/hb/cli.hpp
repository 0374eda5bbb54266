#pragma once

#include <string>
#include <vector>

namespace hb {

/// Entry point of the hb tool, callable in-process for tests.
/// args excludes the program name.
/// Exit codes: 0 success, 1 invalid parameters, 2 parse/usage error,
/// 3 solver non-convergence, 4 statistical verification failure.
int run_cli(const std::vector<std::string>& args);

} // namespace hb
