#pragma once

#include <filesystem>
#include <string>

#include "absa/model/model_state.hpp"

namespace absa::model {

/// JSON checkpoint: hyperparameters, vocabulary and every parameter tensor
/// with its shape. Doubles are written in shortest round-trip form, so
/// save -> load reproduces the model bit for bit.
std::string checkpoint_json(const ModelState& state);
ModelState checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const ModelState& state);
/// Throws CheckpointError on unreadable, malformed or inconsistent files.
ModelState load_checkpoint(const std::filesystem::path& path);

}  // namespace absa::model
