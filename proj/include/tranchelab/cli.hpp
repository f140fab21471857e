#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tranchelab {

/// Entry point behind the `tranchelab` executable. Returns 0 on success, 1 on
/// a computational error and 2 on a usage error; failures print a single
/// `error: ` line to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tranchelab
