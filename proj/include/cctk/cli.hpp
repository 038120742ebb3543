#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cctk::cli {

enum ExitCode : int { Ok = 0, InputError = 2, PrecisionRefusal = 3 };

/// Runs the command line (without the program name). Reports go to out
/// unless --out is given; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace cctk::cli
