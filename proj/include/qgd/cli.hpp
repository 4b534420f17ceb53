#pragma once

#include <string>
#include <vector>

namespace qgd {

/// Entry point of the qgd tool. Exit status: 0 success, 1 run/verification
/// failure, 2 usage error.
int cli_main(const std::vector<std::string>& args);

}  // namespace qgd
