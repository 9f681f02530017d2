#pragma once

#include "corrfilt/experiment.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace corrfilt {

/// Parses and validates a JSON experiment config. Unknown keys, malformed
/// documents, missing required fields and invariant violations all throw
/// config_error with a message naming the offending key path.
///
/// A missing "seed" is accepted here (validated later) so the
/// CORRFILT_SEED fallback and --seed can fill it.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of everything that affects results. Output directory, plot
/// toggle and worker count are left out so they never change the hash.
std::string canonical_json(const ExperimentConfig& config);
/// FNV-1a 64 of canonical_json().
std::uint64_t config_hash(const ExperimentConfig& config);

/// Levenshtein distance, used for "did you mean" suggestions.
std::size_t edit_distance(std::string_view a, std::string_view b);

} // namespace corrfilt
