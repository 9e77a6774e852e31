#pragma once

#include <filesystem>
#include <stdexcept>

#include "modelswitch/classifier.hpp"

namespace modelswitch {

inline constexpr int kModelFormatVersion = 1;

// Unreadable or unsupported model document (bad schema, future version).
class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed document written by a newer (or nonsensical) format version.
class ModelVersionError : public ModelFormatError {
 public:
  using ModelFormatError::ModelFormatError;
};

// {format_version, model_kind, params, learned_state}
nlohmann::json model_to_json(const Classifier& model);
ClassifierPtr model_from_json(const nlohmann::json& doc);

void save_model(const Classifier& model, const std::filesystem::path& path);
ClassifierPtr load_model(const std::filesystem::path& path);

}  // namespace modelswitch
