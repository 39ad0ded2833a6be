#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "zsiglab/error.hpp"

namespace zsig {

// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitResource = 3, kExitPrecondition = 4 };

int exit_code_for(ErrorKind kind);

// zsiglab <orbit|zsigmondy|family-scan|abc|galois> [flags]. The report goes
// to `out` unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zsig
