#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rment {

// Runs the command-line front-end on the given argument list (no program
// name). Exit codes: 0 success, 1 I/O or input-parse failure, 2 usage or
// validation error, 3 fit finished without convergence (model still written).
int cli_main(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace rment
