#pragma once

#include <string>
#include <vector>

namespace advrecon {

// Entry point behind the command-line binary, callable in-process by tests.
// args excludes the program name. Progress goes to stdout, errors to stderr.
// Returns 0 on success, 1 on usage or configuration errors, 2 on numerical
// or I/O failures.
int run_cli(const std::vector<std::string>& args);

// Relative output paths are placed under $ADVRECON_OUTPUT_ROOT when that
// variable is set and non-empty; absolute paths and unset roots pass through.
// Input paths are never rerouted.
std::string resolve_output_path(const std::string& path);

} // namespace advrecon
