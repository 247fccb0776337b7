#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "epiq/model.hpp"

namespace epiq {

/**
 * Reads a model file (JSON, format_version 1). Group elements give their
 * action as an index array, an array of point ids, or cycle notation such as
 * "(p1 p2)(p3 p4 p5)". Without an explicit "cayley" table the listed
 * permutations are closed into the group they generate, which must act
 * faithfully. Points, group, experiments and references are read in that
 * order; every problem in the first failing stage is reported through
 * ModelLoadError, each diagnostic carrying a JSON pointer.
 */
ExperimentModel load_model(const std::filesystem::path& path);
ExperimentModel load_model_from_string(std::string_view text);

/// Canonical text: sorted keys, index-array permutations and the full Cayley
/// table. load_model_from_string(save_model(m)) == m.
std::string save_model(const ExperimentModel& model);
void save_model(const ExperimentModel& model, const std::filesystem::path& path);

/// Hex SHA-256 of the canonical text.
std::string model_hash(const ExperimentModel& model);

std::vector<std::string> bundled_model_names();
/// Throws std::invalid_argument for an unknown name.
std::string_view bundled_model_text(std::string_view name);
ExperimentModel load_bundled_model(std::string_view name);

} // namespace epiq
