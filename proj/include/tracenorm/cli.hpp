#pragma once

#include <string>
#include <vector>

namespace tracenorm::cli {

// Process exit codes: 0 success and certified, 2 finished but uncertified
// (or inconclusive), 3 input or parameter error, 4 numerical failure.
inline constexpr int exit_ok = 0;
inline constexpr int exit_uncertified = 2;
inline constexpr int exit_input = 3;
inline constexpr int exit_numerical = 4;

// Runs the command line given the arguments after the program name.
int run(std::vector<std::string> args);
int run(int argc, char** argv);

}  // namespace tracenorm::cli
