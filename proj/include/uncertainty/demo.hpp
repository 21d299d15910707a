#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace unc {

const std::vector<std::string>& demo_names();

/// Worked qubit example as labeled text. Throws Error(InvalidArgument) with
/// the available names for an unknown demo.
std::string run_demo(std::string_view name);

}  // namespace unc
