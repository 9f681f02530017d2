#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corrfilt {

enum exit_code : int { exit_ok = 0, exit_config_error = 1, exit_runtime_error = 2 };

/// Entry point behind the `corrfilt` executable. `args` excludes the
/// program name. Subcommands: run, scenarios, validate.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace corrfilt
