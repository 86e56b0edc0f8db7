#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace inqkit::cli {

// Exit codes: 0 the property holds or the construction succeeded, 1 it
// fails (the payload carries a witness), 2 input, usage or cap error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace inqkit::cli
