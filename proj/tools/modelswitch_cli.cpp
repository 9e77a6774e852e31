// modelswitch: dataset generation, training, evaluation, switching rounds and
// experiment reproduction from the command line.
//
// Exit codes: 0 success, 2 usage or validation error, 3 I/O error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modelswitch/boosted.hpp"
#include "modelswitch/csv.hpp"
#include "modelswitch/experiments.hpp"
#include "modelswitch/forest.hpp"
#include "modelswitch/linear_svm.hpp"
#include "modelswitch/metrics.hpp"
#include "modelswitch/model_io.hpp"
#include "modelswitch/parallel.hpp"
#include "modelswitch/switching.hpp"

namespace fs = std::filesystem;
using namespace modelswitch;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Globals {
  std::uint64_t seed = 42;
  std::size_t threads = 0;
  bool quiet = false;
};

// Exceptions carrying an explicit exit code.
struct ExitError : std::runtime_error {
  ExitError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

void say(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// Hyperparameter flags shared by train and switch.
struct LearnerFlags {
  std::string model = "gbt";
  std::optional<std::size_t> n_estimators;
  std::optional<std::size_t> max_depth;
  std::optional<double> learning_rate;
  std::optional<double> subsample;
  std::optional<double> colsample;
  std::optional<double> reg_lambda;
  std::optional<double> gamma;
  std::optional<std::size_t> min_samples_leaf;
  std::optional<std::size_t> min_samples_split;
  std::optional<std::size_t> features_per_split;
  bool no_bootstrap = false;
  std::optional<std::size_t> epochs;
  std::optional<double> svm_lambda;

  void add_to(CLI::App& cmd, const std::string& kind_flag) {
    cmd.add_option(kind_flag, model, "Model kind: rf, gbt or svm")
        ->check(CLI::IsMember({"rf", "gbt", "svm"}));
    cmd.add_option("--n-estimators", n_estimators, "Trees (rf, gbt)");
    cmd.add_option("--max-depth", max_depth, "Depth bound (rf: unbounded by default, gbt: 10)");
    cmd.add_option("--learning-rate", learning_rate, "Shrinkage (gbt)");
    cmd.add_option("--subsample", subsample, "Row fraction per round (gbt)");
    cmd.add_option("--colsample", colsample, "Column fraction per tree (gbt)");
    cmd.add_option("--reg-lambda", reg_lambda, "L2 leaf regularization (gbt)");
    cmd.add_option("--gamma", gamma, "Minimum split gain (gbt)");
    cmd.add_option("--min-samples-leaf", min_samples_leaf, "Minimum rows per leaf (rf)");
    cmd.add_option("--min-samples-split", min_samples_split, "Minimum rows to split (rf)");
    cmd.add_option("--features-per-split", features_per_split, "Candidate features per node (rf)");
    cmd.add_flag("--no-bootstrap", no_bootstrap, "Train every tree on all rows (rf)");
    cmd.add_option("--epochs", epochs, "Passes over the data (svm)");
    cmd.add_option("--svm-lambda", svm_lambda, "Regularization strength (svm)");
  }

  ClassifierPtr fit(const Dataset& train, std::uint64_t seed) const {
    if (model == "rf") {
      ForestParams p;
      p.seed = seed;
      if (n_estimators) p.n_estimators = *n_estimators;
      p.max_depth = max_depth;
      if (min_samples_leaf) p.min_samples_leaf = *min_samples_leaf;
      if (min_samples_split) p.min_samples_split = *min_samples_split;
      if (features_per_split) p.features_per_split = *features_per_split;
      p.bootstrap = !no_bootstrap;
      return fit_forest(train, p);
    }
    if (model == "gbt") {
      BoostParams p;
      p.seed = seed;
      if (n_estimators) p.n_estimators = *n_estimators;
      if (max_depth) p.max_depth = *max_depth;
      if (learning_rate) p.learning_rate = *learning_rate;
      if (subsample) p.subsample = *subsample;
      if (colsample) p.colsample_bytree = *colsample;
      if (reg_lambda) p.reg_lambda = *reg_lambda;
      if (gamma) p.gamma = *gamma;
      return fit_boosted(train, p);
    }
    if (model == "svm") {
      LinearSvmParams p;
      p.seed = seed;
      if (epochs) p.epochs = *epochs;
      if (svm_lambda) p.reg_lambda = *svm_lambda;
      return fit_linear_svm(train, p);
    }
    throw std::invalid_argument("unknown model kind '" + model + "'");
  }
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      sizes.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw std::invalid_argument("--sizes: '" + item + "' is not a count");
    }
  }
  return sizes;
}

fs::path seeded_path(const fs::path& base, std::uint64_t seed, bool suffix) {
  if (!suffix) return base;
  fs::path p = base;
  p.replace_filename(base.stem().string() + "-seed" + std::to_string(seed) +
                     base.extension().string());
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Validation-accuracy-driven model switching"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random stream")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)");
  app.add_flag("--quiet", g.quiet, "Suppress stdout summaries");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  DatasetSpec spec;
  spec.n_samples = 5000;
  spec.n_features = 20;
  spec.n_informative = 10;
  std::string gen_out;
  gen->add_option("--samples", spec.n_samples)->capture_default_str();
  gen->add_option("--features", spec.n_features)->capture_default_str();
  gen->add_option("--informative", spec.n_informative)->capture_default_str();
  gen->add_option("--redundant", spec.n_redundant)->capture_default_str();
  gen->add_option("--clusters-per-class", spec.n_clusters_per_class)->capture_default_str();
  gen->add_option("--class-sep", spec.class_sep)->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV path")->required();

  // train
  auto* train = app.add_subcommand("train", "Fit a model on a CSV dataset");
  LearnerFlags train_flags;
  std::string train_data, train_out;
  train_flags.add_to(*train, "--model");
  train->add_option("--data", train_data, "Training CSV")->required();
  train->add_option("--out", train_out, "Output model JSON")->required();

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Score a model file on a CSV dataset");
  std::string eval_model, eval_data, eval_out, eval_format = "json";
  eval->add_option("--model-file", eval_model)->required();
  eval->add_option("--data", eval_data)->required();
  eval->add_option("--out", eval_out, "Write the full-precision result here");
  eval->add_option("--format", eval_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // switch
  auto* sw = app.add_subcommand("switch", "Run one switching round");
  std::string sw_current, sw_train, sw_val, sw_report, sw_out;
  SwitchPolicy policy;
  bool no_gate = false;
  std::optional<double> noise_level;
  LearnerFlags cand_flags;
  sw->add_option("--current", sw_current, "Incumbent model JSON")->required();
  sw->add_option("--train", sw_train, "Candidate training CSV")->required();
  sw->add_option("--val", sw_val, "Validation CSV")->required();
  sw->add_option("--threshold", policy.accuracy_threshold)->capture_default_str();
  sw->add_flag("--no-threshold-gate", no_gate, "Ignore the threshold when deciding");
  sw->add_option("--margin", policy.margin, "Minimum improvement")->capture_default_str();
  cand_flags.add_to(*sw, "--candidate");
  sw->add_option("--noise", noise_level, "Train the candidate on a noisy copy at this level");
  sw->add_option("--report", sw_report, "SwitchReport JSON path");
  sw->add_option("--out", sw_out, "Retained model JSON path");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Reproduce a scripted experiment");
  std::string exp_name, exp_sizes, exp_report, exp_simple = "rf";
  std::size_t repeat = 1;
  bool timings = false;
  exp->add_option("--name", exp_name, "exp1, exp2 or sweep")->required();
  exp->add_option("--sizes", exp_sizes, "Comma-separated sizes for sweep");
  exp->add_option("--repeat", repeat, "Run seeds seed..seed+k-1")->capture_default_str();
  exp->add_option("--report", exp_report, "Report JSON path");
  exp->add_option("--simple", exp_simple, "Incumbent kind: rf or svm")
      ->check(CLI::IsMember({"rf", "svm"}));
  exp->add_flag("--timings", timings, "Include wall-clock timings in reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  set_worker_count(g.threads);
  bool file_errors_are_io = false;
  try {
    if (*gen) {
      spec.seed = g.seed;
      const Dataset d = generate(spec);
      write_csv(d, fs::path(gen_out));
      say(g, "wrote " + std::to_string(d.size()) + " rows x " +
                 std::to_string(d.n_features()) + " features to " + gen_out);
    } else if (*train) {
      const Dataset d = read_csv(fs::path(train_data));
      if (d.size() == 0) throw std::invalid_argument("training file has no rows");
      const ClassifierPtr model = train_flags.fit(d, g.seed);
      save_model(*model, fs::path(train_out));
      say(g, "training accuracy: " + format_accuracy(evaluate(*model, d).accuracy));
    } else if (*eval) {
      const ClassifierPtr model = load_model(fs::path(eval_model));
      const Dataset d = read_csv(fs::path(eval_data));
      const EvalResult r = evaluate(*model, d);
      say(g, "accuracy: " + format_accuracy(r.accuracy));
      if (!eval_out.empty()) {
        if (eval_format == "json") {
          write_text(eval_out, r.to_json().dump(2) + "\n");
        } else {
          char acc[32];
          std::snprintf(acc, sizeof acc, "%.17g", r.accuracy);
          write_text(eval_out, "accuracy,n,tn,fp,fn,tp\n" + std::string(acc) + "," +
                                   std::to_string(r.n) + "," + std::to_string(r.confusion.tn) +
                                   "," + std::to_string(r.confusion.fp) + "," +
                                   std::to_string(r.confusion.fn) + "," +
                                   std::to_string(r.confusion.tp) + "\n");
        }
      }
    } else if (*sw) {
      file_errors_are_io = true;
      policy.require_threshold = !no_gate;
      const ClassifierPtr current = load_model(fs::path(sw_current));
      const Dataset train_d = read_csv(fs::path(sw_train));
      const Dataset val_d = read_csv(fs::path(sw_val));
      file_errors_are_io = false;
      std::optional<NoiseSpec> noise;
      if (noise_level) noise = NoiseSpec{*noise_level, true, true};
      CandidateTrainer trainer = [&](const Dataset& d) { return cand_flags.fit(d, g.seed); };
      const SwitchResult result = switch_models(current, train_d, val_d, policy, trainer, noise,
                                                rng_from_seed(g.seed).split("switch"));
      for (const auto& line : result.report.log_lines()) say(g, line);
      file_errors_are_io = true;
      if (!sw_report.empty()) write_text(sw_report, result.report.to_json().dump(2) + "\n");
      if (!sw_out.empty()) save_model(*result.model, fs::path(sw_out));
    } else if (*exp) {
      if (repeat < 1) throw std::invalid_argument("--repeat must be >= 1");
      if (exp_name != "exp1" && exp_name != "exp2" && exp_name != "sweep") {
        throw ExitError(kExitUsage, "unknown experiment '" + exp_name +
                                        "' (expected exp1, exp2 or sweep)");
      }
      for (std::size_t k = 0; k < repeat; ++k) {
        const std::uint64_t seed = g.seed + k;
        nlohmann::json doc;
        std::vector<std::string> lines;
        if (exp_name == "sweep") {
          if (exp_sizes.empty()) throw std::invalid_argument("sweep requires --sizes");
          const auto reports = run_size_sweep(parse_sizes(exp_sizes), seed);
          doc = nlohmann::json::array();
          for (const auto& r : reports) {
            doc.push_back(r.to_json(timings));
            for (auto& l : r.log_lines()) lines.push_back(l);
          }
        } else {
          ExperimentConfig cfg =
              exp_name == "exp1" ? experiment_1_config(seed) : experiment_2_config(seed);
          if (exp_simple == "svm") cfg.simple_model.kind = SimpleModelKind::LinearSvm;
          const ExperimentReport r = run_experiment(cfg);
          doc = r.to_json(timings);
          lines = r.log_lines();
        }
        for (const auto& l : lines) say(g, l);
        if (!exp_report.empty()) {
          write_text(seeded_path(exp_report, seed, repeat > 1), doc.dump(2) + "\n");
        }
      }
    }
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return file_errors_are_io ? kExitIo : kExitUsage;
  } catch (const ModelVersionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ModelFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return file_errors_are_io ? kExitIo : kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
