#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <vector>

#include "hb/stochint.hpp"
#include "hb/types.hpp"

namespace hb::testsupport {

inline std::vector<StepFunction> step_function_battery(const GridSpec& g) {
    return isometry_battery(g);
}

} // namespace hb::testsupport
