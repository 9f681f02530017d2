#pragma once

#include "corrfilt/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace corrfilt {

std::string_view tool_version() noexcept;

/// "# corrfilt <version>; generator=...; seed=...; config_hash=...; scenario=..."
std::string header_line(const ScenarioResult& result);

/**
 * Writes `<scenario>.csv` (iteration,<curve labels...>) and `summary.csv`
 * (steady-state MSD per stage or sweep point) into `directory`, creating it
 * if needed. Values use 6 significant digits. Returns the written paths.
 * Throws run_error for empty results or an unwritable directory.
 */
std::vector<std::filesystem::path> emit_csv(const ScenarioResult& result, const std::filesystem::path& directory);

/// Self-contained SVG 1.1 plot: MSD curves with stage-boundary markers, or
/// steady-state MSD against the sweep value. Throws run_error for empty
/// results (no file is created) or an unwritable path.
void emit_plot(const ScenarioResult& result, const std::filesystem::path& path);

/// Plain-text steady-state table.
void print_summary(const ScenarioResult& result, std::ostream& out);

} // namespace corrfilt
