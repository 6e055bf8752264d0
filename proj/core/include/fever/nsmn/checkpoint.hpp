#pragma once

#include <filesystem>
#include <iosfwd>

#include <nlohmann/json.hpp>

#include "fever/nsmn/model.hpp"

namespace fever::nsmn {

/// A model plus whatever the trainer recorded next to it.
struct Checkpoint {
  Model model;
  nlohmann::json meta;
};

/// JSON container holding the model configuration, vocabularies, static
/// vectors, every named tensor and the Adam state. Doubles are written with
/// round-trip precision, so save followed by load reproduces the model bit
/// for bit.
void save_checkpoint(std::ostream& out, const Model& model, const nlohmann::json& meta = {});
void save_checkpoint(const std::filesystem::path& path, const Model& model,
                     const nlohmann::json& meta = {});
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace fever::nsmn
