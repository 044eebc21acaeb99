#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsarm::cli {

/// Entry point of the `tsarm` tool. Returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Same, with arguments given without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsarm::cli
