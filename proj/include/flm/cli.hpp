#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flm {

/// Runs the `flm` command line. `args` excludes the program name. Returns 0
/// on success, 1 when the model or the run produced errors, 2 on usage
/// errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flm
