#pragma once

#include <string>
#include <vector>

namespace caplab {

// Runs one capture-lab command; argv excludes the program name.
// Exit status: 0 all checks passed, 1 some check failed, 2 usage error.
int dispatch(const std::vector<std::string>& argv);

}  // namespace caplab
