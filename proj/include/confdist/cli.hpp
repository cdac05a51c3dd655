#pragma once

// Command-line front end. run() holds all logic so tests can drive it
// in-process; the executable is a thin wrapper around it.

#include <iosfwd>
#include <string>
#include <vector>

namespace confdist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

// args excludes the program name. CSV goes to out (or --out), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "start:stop:step" into an inclusive grid; throws InvalidParameter.
std::vector<double> parse_grid(const std::string& text);
// "0.1,0.5,0.9"; throws InvalidParameter.
std::vector<double> parse_list(const std::string& text);

}  // namespace confdist::cli
