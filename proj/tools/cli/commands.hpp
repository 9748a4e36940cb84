// commands.hpp: Subcommands of the sln tool

#pragma once

#include "config.hpp"

#include <ostream>

namespace sln::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

// Parses argv, dispatches, and maps failures to exit codes. CSV goes to the
// configured output path or `out`; diagnostics go to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

void cmd_kernels(const Settings& s, bool analytic, std::ostream& out);
void cmd_gen_noise(const Settings& s, std::ostream& out);
void cmd_validate(const Settings& s, std::ostream& out);
void cmd_simulate(const Settings& s, std::ostream& out);
void cmd_qnd_verify(const Settings& s, std::ostream& out);
void cmd_scan_lambda(const Settings& s, std::ostream& out, std::ostream& err);

} // namespace sln::cli
