#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "modelswitch/boosted.hpp"
#include "modelswitch/csv.hpp"
#include "modelswitch/experiments.hpp"
#include "modelswitch/forest.hpp"
#include "modelswitch/linear_svm.hpp"
#include "modelswitch/model_io.hpp"
#include "modelswitch/parallel.hpp"

namespace py = pybind11;
namespace ms = modelswitch;
using nlohmann::json;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

ms::Matrix to_matrix(const Array& x) {
  if (x.ndim() != 2) throw std::invalid_argument("x must be a 2-d array");
  const auto rows = static_cast<std::size_t>(x.shape(0));
  const auto cols = static_cast<std::size_t>(x.shape(1));
  return ms::Matrix(rows, cols, std::vector<double>(x.data(), x.data() + rows * cols));
}

Array to_array(const ms::Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

json parse_params(const std::string& text) { return text.empty() ? json::object() : json::parse(text); }

// Shared-pointer holder so models can come back from switch_models unchanged.
struct Model {
  ms::ClassifierPtr ptr;
};

// Overlays user-supplied fields on the defaults of P.
template <class P>
P with_overrides(const json& overrides) {
  json base = P{}.to_json();
  for (const auto& [key, value] : overrides.items()) {
    if (!base.contains(key)) throw std::invalid_argument("unknown parameter: " + key);
    base[key] = value;
  }
  return P::from_json(base);
}

ms::CandidateTrainer make_trainer(const std::string& kind, const json& params) {
  if (kind == "gbt") {
    const auto p = with_overrides<ms::BoostParams>(params);
    return [p](const ms::Dataset& d) -> ms::ClassifierPtr { return ms::fit_boosted(d, p); };
  }
  if (kind == "rf") {
    const auto p = with_overrides<ms::ForestParams>(params);
    return [p](const ms::Dataset& d) -> ms::ClassifierPtr { return ms::fit_forest(d, p); };
  }
  if (kind == "svm") {
    const auto p = with_overrides<ms::LinearSvmParams>(params);
    return [p](const ms::Dataset& d) -> ms::ClassifierPtr { return ms::fit_linear_svm(d, p); };
  }
  throw std::invalid_argument("unknown model kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the modelswitch package";

  py::class_<ms::Dataset>(m, "Dataset")
      .def(py::init([](const Array& x, const ms::Labels& y) {
             ms::Dataset d{to_matrix(x), y, std::nullopt};
             d.validate();
             return d;
           }),
           py::arg("x"), py::arg("y"))
      .def_property_readonly("x", [](const ms::Dataset& d) { return to_array(d.x); })
      .def_property_readonly("y", [](const ms::Dataset& d) { return d.y; })
      .def_property_readonly("n_samples", [](const ms::Dataset& d) { return d.size(); })
      .def_property_readonly("n_features", [](const ms::Dataset& d) { return d.x.cols(); })
      .def("class_counts", &ms::Dataset::class_counts)
      .def("__len__", [](const ms::Dataset& d) { return d.size(); });

  m.def(
      "generate",
      [](std::size_t n_samples, std::size_t n_features, std::size_t n_informative,
         std::size_t n_redundant, std::size_t n_clusters_per_class, double class_sep,
         std::uint64_t seed) {
        ms::DatasetSpec s;
        s.n_samples = n_samples;
        s.n_features = n_features;
        s.n_informative = n_informative;
        s.n_redundant = n_redundant;
        s.n_clusters_per_class = n_clusters_per_class;
        s.class_sep = class_sep;
        s.seed = seed;
        return ms::generate(s);
      },
      py::arg("n_samples"), py::arg("n_features"), py::arg("n_informative"),
      py::arg("n_redundant") = 0, py::arg("n_clusters_per_class") = 1, py::arg("class_sep") = 1.0,
      py::arg("seed") = 42);

  m.def(
      "add_noise",
      [](const ms::Dataset& d, double level, bool flip_labels, bool jitter_features,
         std::uint64_t seed) {
        return ms::add_noise(d, ms::NoiseSpec{level, flip_labels, jitter_features},
                             ms::rng_from_seed(seed));
      },
      py::arg("data"), py::arg("level") = 0.2, py::arg("flip_labels") = true,
      py::arg("jitter_features") = true, py::arg("seed") = 0);

  m.def(
      "train_val_split",
      [](const ms::Dataset& d, double val_fraction, std::uint64_t seed) {
        auto s = ms::train_val_split(d, val_fraction, ms::rng_from_seed(seed));
        return py::make_tuple(std::move(s.train), std::move(s.val));
      },
      py::arg("data"), py::arg("val_fraction") = 0.2, py::arg("seed") = 0);

  m.def("read_csv", [](const std::filesystem::path& p) { return ms::read_csv(p); });
  m.def("write_csv",
        [](const ms::Dataset& d, const std::filesystem::path& p) { ms::write_csv(d, p); });

  py::class_<Model>(m, "Model")
      .def_property_readonly("kind", [](const Model& x) { return x.ptr->kind(); })
      .def_property_readonly("n_features", [](const Model& x) { return x.ptr->n_features(); })
      .def("predict", [](const Model& x, const Array& a) { return x.ptr->predict(to_matrix(a)); })
      .def("predict_score",
           [](const Model& x, const Array& a) { return x.ptr->predict_score(to_matrix(a)); })
      .def("describe", [](const Model& x) { return x.ptr->describe(); })
      .def("to_json", [](const Model& x) { return ms::model_to_json(*x.ptr).dump(); })
      .def("save", [](const Model& x, const std::filesystem::path& p) { ms::save_model(*x.ptr, p); });

  m.def("load_model", [](const std::filesystem::path& p) { return Model{ms::load_model(p)}; });
  m.def("model_from_json",
        [](const std::string& text) { return Model{ms::model_from_json(json::parse(text))}; });

  m.def(
      "fit",
      [](const std::string& kind, const ms::Dataset& d, const std::string& params) {
        const auto trainer = make_trainer(kind, parse_params(params));
        py::gil_scoped_release release;
        return Model{trainer(d)};
      },
      py::arg("kind"), py::arg("data"), py::arg("params_json") = "");

  m.def("accuracy", &ms::accuracy, py::arg("y_true"), py::arg("y_pred"));
  m.def(
      "evaluate",
      [](const Model& x, const ms::Dataset& d) { return ms::evaluate(*x.ptr, d).to_json().dump(); },
      py::arg("model"), py::arg("data"));
  m.def("format_accuracy", &ms::format_accuracy);

  m.def(
      "decide",
      [](double current, double candidate, double threshold, bool require_threshold,
         double margin) {
        ms::SwitchPolicy p{threshold, require_threshold, margin};
        p.validate();
        const auto d = ms::decide(current, candidate, p);
        return py::make_tuple(ms::to_string(d.action), ms::to_string(d.reason));
      },
      py::arg("current"), py::arg("candidate"), py::arg("threshold") = 0.8,
      py::arg("require_threshold") = true, py::arg("margin") = 0.0);

  m.def(
      "switch_models",
      [](const Model& current, const ms::Dataset& train, const ms::Dataset& val,
         const std::string& candidate, const std::string& params, double threshold,
         bool require_threshold, double margin, std::optional<double> noise, std::uint64_t seed) {
        ms::SwitchPolicy p{threshold, require_threshold, margin};
        const auto trainer = make_trainer(candidate, parse_params(params));
        std::optional<ms::NoiseSpec> ns;
        if (noise) ns = ms::NoiseSpec{*noise, true, true};
        ms::SwitchResult r;
        {
          py::gil_scoped_release release;
          r = ms::switch_models(current.ptr, train, val, p, trainer, ns, ms::rng_from_seed(seed));
        }
        return py::make_tuple(Model{r.model}, r.report.to_json().dump(), r.report.log_lines());
      },
      py::arg("current"), py::arg("train"), py::arg("val"), py::arg("candidate") = "gbt",
      py::arg("params_json") = "", py::arg("threshold") = 0.8, py::arg("require_threshold") = true,
      py::arg("margin") = 0.0, py::arg("noise") = std::nullopt, py::arg("seed") = 42);

  m.def(
      "run_experiment",
      [](int which, std::uint64_t seed) {
        ms::ExperimentReport r;
        {
          py::gil_scoped_release release;
          r = which == 1 ? ms::run_experiment_1(seed) : ms::run_experiment_2(seed);
        }
        return r.to_json().dump();
      },
      py::arg("which"), py::arg("seed") = 42);

  m.def(
      "run_size_sweep",
      [](const std::vector<std::size_t>& sizes, std::uint64_t seed) {
        std::vector<ms::ExperimentReport> rs;
        {
          py::gil_scoped_release release;
          rs = ms::run_size_sweep(sizes, seed);
        }
        std::vector<std::string> out;
        for (const auto& r : rs) out.push_back(r.to_json().dump());
        return out;
      },
      py::arg("sizes"), py::arg("seed") = 42);

  m.def("set_worker_count", &ms::set_worker_count);
  m.def("worker_count", &ms::worker_count);
}
