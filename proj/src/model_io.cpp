#include "modelswitch/model_io.hpp"

#include <fstream>
#include <string>

#include "modelswitch/boosted.hpp"
#include "modelswitch/csv.hpp"
#include "modelswitch/forest.hpp"
#include "modelswitch/linear_svm.hpp"

namespace modelswitch {

nlohmann::json model_to_json(const Classifier& model) {
  const auto desc = model.describe();
  return {{"format_version", kModelFormatVersion},
          {"model_kind", model.kind()},
          {"params", desc.at("params")},
          {"learned_state", model.learned_state()}};
}

namespace {

std::vector<Tree> trees_from(const nlohmann::json& state, std::size_t n_features) {
  std::vector<Tree> trees;
  for (const auto& t : state.at("trees")) trees.push_back(Tree::from_json(t, n_features));
  return trees;
}

}  // namespace

ClassifierPtr model_from_json(const nlohmann::json& doc) {
  try {
    const int version = doc.at("format_version").get<int>();
    if (version > kModelFormatVersion || version < 1) {
      throw ModelVersionError("unsupported model format_version " + std::to_string(version) +
                             " (this build reads " + std::to_string(kModelFormatVersion) + ")");
    }
    const auto kind = doc.at("model_kind").get<std::string>();
    const auto& params = doc.at("params");
    const auto& state = doc.at("learned_state");
    const auto n_features = state.at("n_features").get<std::size_t>();
    if (kind == "random_forest") {
      return std::make_shared<RandomForest>(ForestParams::from_json(params), n_features,
                                            trees_from(state, n_features));
    }
    if (kind == "boosted_trees") {
      return std::make_shared<BoostedTrees>(BoostParams::from_json(params), n_features,
                                            trees_from(state, n_features));
    }
    if (kind == "linear_svm") {
      auto w = state.at("weights").get<std::vector<double>>();
      if (w.size() != n_features + 1) {
        throw ModelFormatError("linear_svm: weight vector length mismatch");
      }
      return std::make_shared<LinearSvm>(LinearSvmParams::from_json(params), std::move(w));
    }
    throw ModelFormatError("unknown model_kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("malformed model document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const Classifier& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << model_to_json(model).dump() << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

ClassifierPtr load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

}  // namespace modelswitch
