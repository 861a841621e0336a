#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>

#include "cclick/config.hpp"
#include "cclick/data_io.hpp"
#include "cclick/experiment.hpp"
#include "cclick/likelihood.hpp"
#include "cclick/models.hpp"
#include "cclick/optimize.hpp"
#include "cclick/simulate.hpp"

namespace py = pybind11;
using namespace cclick;

namespace {

Dataset dataset_from_rows(const CarouselLayout& layout,
                          const std::vector<std::tuple<std::string, std::string, int, int, int,
                                                       int, int>>& rows) {
    std::vector<RawRow> raw;
    raw.reserve(rows.size());
    for (const auto& [session, item, row, col, click, examined, impressed] : rows) {
        raw.push_back({session, item, row, col, click, examined, impressed});
    }
    return make_dataset(layout, raw);
}

py::dict report_dict(const LikelihoodReport& report) {
    py::dict out;
    out["total"] = report.total;
    out["per_session"] = report.per_session_normalized;
    out["records"] = report.record_count;
    out["sessions"] = report.session_count;
    out["kind"] = report.kind == LikelihoodKind::ClickLL ? "click_ll" : "oell";
    out["clamped"] = report.clamped;
    return out;
}

py::object optional_report(const std::optional<LikelihoodReport>& report) {
    if (!report) return py::none();
    return report_dict(*report);
}

ExaminationParams exam_from_object(ModelKind kind, const CarouselLayout& layout,
                                   const py::object& exam) {
    switch (kind) {
        case ModelKind::CM: return std::monostate{};
        case ModelKind::TCM:
        case ModelKind::CCM: return Termination{exam.cast<double>()};
        case ModelKind::RCPBM: {
            auto [rows, cols] =
                exam.cast<std::pair<std::vector<double>, std::vector<double>>>();
            return RowColFactors{std::move(rows), std::move(cols)};
        }
        default: {
            PositionGrid grid;
            grid.rows = layout.rows;
            grid.cols = layout.cols;
            grid.w = exam.cast<std::vector<double>>();
            return grid;
        }
    }
}

py::object exam_to_object(const ExaminationParams& exam) {
    if (const auto* grid = std::get_if<PositionGrid>(&exam)) return py::cast(grid->w);
    if (const auto* rc = std::get_if<RowColFactors>(&exam)) {
        return py::make_tuple(rc->row_w, rc->col_w);
    }
    if (const auto* term = std::get_if<Termination>(&exam)) return py::cast(term->t);
    return py::none();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Click models for carousel interfaces";

    py::class_<CarouselLayout>(m, "CarouselLayout")
        .def(py::init(&CarouselLayout::make), py::arg("rows"), py::arg("cols"),
             py::arg("visible_set_size"))
        .def_static("reference", &CarouselLayout::reference)
        .def_readonly("rows", &CarouselLayout::rows)
        .def_readonly("cols", &CarouselLayout::cols)
        .def_readonly("visible_set_size", &CarouselLayout::visible_set_size)
        .def_readonly("swipe_sets", &CarouselLayout::swipe_sets)
        .def("positions", &CarouselLayout::positions)
        .def("__repr__", [](const CarouselLayout& layout) {
            std::ostringstream out;
            out << "CarouselLayout(rows=" << layout.rows << ", cols=" << layout.cols
                << ", visible_set_size=" << layout.visible_set_size << ")";
            return out.str();
        });

    py::class_<Dataset>(m, "Dataset")
        .def("__len__", &Dataset::size)
        .def_property_readonly("layout", &Dataset::layout)
        .def_property_readonly("sessions", &Dataset::session_count)
        .def_property_readonly("items", &Dataset::item_count)
        .def_property_readonly("item_names",
                               [](const Dataset& d) { return d.vocab()->items; })
        .def("clicks",
             [](const Dataset& d) {
                 long clicks = 0;
                 for (const auto& r : d.records()) clicks += r.click ? 1 : 0;
                 return clicks;
             })
        .def("index_by_item",
             [](const Dataset& d, const std::string& item) { return index_by_item(d, item); })
        .def("index_by_position", [](const Dataset& d, int row, int col) {
            return index_by_position(d, row, col);
        });

    py::class_<Model>(m, "Model")
        .def_property_readonly("kind", [](const Model& m_) { return to_string(m_.kind); })
        .def_property_readonly("theta", [](const Model& m_) { return m_.attraction.theta; })
        .def_property_readonly("exam", [](const Model& m_) { return exam_to_object(m_.exam); });

    m.def("make_model",
          [](const std::string& kind, const CarouselLayout& layout, std::vector<double> theta,
             const py::object& exam) {
              Model model;
              model.kind = model_kind_from_string(kind);
              model.attraction.theta = std::move(theta);
              model.exam = exam_from_object(model.kind, layout, exam);
              validate_model(model, layout, model.attraction.theta.size());
              return model;
          },
          py::arg("kind"), py::arg("layout"), py::arg("theta"), py::arg("exam") = py::none(),
          "Builds a model from raw parameters (a flat grid, (row, col) factor "
          "vectors, a termination scalar or None depending on the kind).");

    m.def("clip", &clip_prob, py::arg("p"));
    m.def("make_dataset", &dataset_from_rows, py::arg("layout"), py::arg("rows"),
          "Rows are (session, item, row, col, click, examined, impressed) tuples.");
    m.def("load_interactions",
          [](const std::filesystem::path& path, const CarouselLayout& layout) {
              return load_interactions(path, layout);
          },
          py::arg("path"), py::arg("layout"));
    m.def("write_interactions", &write_interactions, py::arg("path"), py::arg("dataset"),
          py::arg("split_label") = "");
    m.def("filter_impressions",
          [](const Dataset& d) { return filter_impressions(d, nullptr); });
    m.def("filter_sessions", [](const Dataset& d) { return filter_sessions(d, nullptr); });

    py::class_<SplitSpec>(m, "SplitSpec")
        .def(py::init<>())
        .def_readwrite("test_click_threshold", &SplitSpec::test_click_threshold)
        .def_readwrite("validation_click_threshold", &SplitSpec::validation_click_threshold)
        .def_readwrite("fraction", &SplitSpec::fraction)
        .def_readwrite("seed", &SplitSpec::seed);
    m.def("train_test_split", &train_test_split, py::arg("dataset"), py::arg("spec"));
    m.def("train_validation_split", &train_validation_split, py::arg("train"), py::arg("spec"));

    m.def("mle_attraction", [](const Dataset& d) { return mle_attraction(d).theta; });
    m.def("mle_examination", [](const Dataset& d) { return mle_examination(d).w; });
    m.def("carousel_prior",
          [](const CarouselLayout& layout) { return carousel_prior(layout).w; });

    m.def("click_log_likelihood",
          [](const Dataset& d, const Model& model) {
              return report_dict(click_log_likelihood(d, model));
          },
          py::arg("dataset"), py::arg("model"));
    m.def("observed_examination_log_likelihood",
          [](const Dataset& d, const Model& model) {
              return report_dict(observed_examination_log_likelihood(d, model));
          },
          py::arg("dataset"), py::arg("model"));
    m.def("dummy_baseline", [](const Dataset& d) {
        const auto [click, joint] = dummy_baseline(d);
        return py::make_tuple(report_dict(click), report_dict(joint));
    });

    py::class_<FitConfig>(m, "FitConfig")
        .def(py::init([](const std::string& model, const std::string& algorithm, double lr,
                         int iterations, std::vector<int> checkpoints, const std::string& att,
                         const std::string& exam, bool fixed_attraction, std::uint64_t seed) {
                 FitConfig config;
                 config.model_kind = model_kind_from_string(model);
                 config.algorithm = algorithm_from_string(algorithm);
                 config.learning_rate = lr;
                 config.iterations = iterations;
                 config.eval_checkpoints = std::move(checkpoints);
                 config.attraction_init = attraction_init_from_string(att);
                 config.examination_init = examination_init_from_string(exam);
                 config.fixed_attraction = fixed_attraction;
                 config.seed = seed;
                 return config;
             }),
             py::arg("model"), py::arg("algorithm"), py::arg("learning_rate") = 0.01,
             py::arg("iterations") = 100,
             py::arg("checkpoints") = std::vector<int>{0, 50, 100},
             py::arg("attraction_init") = "ctr", py::arg("examination_init") = "gaze",
             py::arg("fixed_attraction") = false, py::arg("seed") = 0);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("model", &FitResult::model)
        .def_readonly("best_checkpoint", &FitResult::best_checkpoint)
        .def_readonly("validation_best_checkpoint", &FitResult::validation_best_checkpoint)
        .def_readonly("selected_termination", &FitResult::selected_termination)
        .def_property_readonly("trace", [](const FitResult& result) {
            py::list trace;
            for (const CheckpointReport& cp : result.trace) {
                py::dict entry;
                entry["iteration"] = cp.iteration;
                entry["train_click"] = optional_report(cp.train_click);
                entry["train_oell"] = optional_report(cp.train_oell);
                entry["validation_click"] = optional_report(cp.validation_click);
                entry["validation_oell"] = optional_report(cp.validation_oell);
                entry["test_click"] = optional_report(cp.test_click);
                entry["test_oell"] = optional_report(cp.test_oell);
                trace.append(entry);
            }
            return trace;
        });

    m.def("fit", &fit, py::arg("config"), py::arg("train"), py::arg("validation"),
          py::arg("test"));

    m.def("simulate",
          [](const std::string& kind, const CarouselLayout& layout, int items, int sessions,
             std::uint64_t seed, std::pair<double, double> theta_range,
             std::pair<double, double> exam_range, double termination, bool first_click_only) {
              GroundTruth gt =
                  random_ground_truth(model_kind_from_string(kind), layout, items, sessions,
                                      seed, theta_range, exam_range, termination);
              gt.first_click_only = first_click_only;
              Model truth{gt.kind, ItemAttraction{gt.theta}, gt.exam};
              return py::make_tuple(simulate(gt), truth);
          },
          py::arg("kind"), py::arg("layout"), py::arg("items"), py::arg("sessions"),
          py::arg("seed") = 0, py::arg("theta_range") = std::pair<double, double>{0.05, 0.95},
          py::arg("exam_range") = std::pair<double, double>{0.1, 0.9},
          py::arg("termination") = 0.1, py::arg("first_click_only") = false,
          "Draws a random ground truth and returns (dataset, generating_model).");

    m.def("run_split_pipeline",
          [](const std::filesystem::path& raw, const CarouselLayout& layout,
             const SplitSpec& spec, const std::filesystem::path& out_dir) {
              const SplitFiles files = run_split_pipeline(raw, layout, spec, out_dir);
              py::dict out;
              out["train_full"] = files.train_full;
              out["train"] = files.train;
              out["validation"] = files.validation;
              out["test"] = files.test;
              out["manifest"] = files.manifest;
              return out;
          },
          py::arg("raw"), py::arg("layout"), py::arg("spec"), py::arg("out_dir"));

    m.def("run_experiment_config",
          [](const std::string& config_text) {
              const ExperimentSpec spec = parse_experiment_config(config_text);
              const ExperimentResults results = run_experiment(spec);
              py::list rows;
              for (const ResultRow& row : results.rows) {
                  py::dict entry;
                  entry["model"] = row.model;
                  entry["alg"] = row.alg;
                  entry["lr"] = row.lr ? py::cast(*row.lr) : py::none();
                  entry["att_init"] = row.att_init ? py::cast(to_string(*row.att_init))
                                                   : py::none();
                  entry["exam_init"] = row.exam_init ? py::cast(to_string(*row.exam_init))
                                                     : py::none();
                  entry["iter"] = row.best_iteration ? py::cast(*row.best_iteration) : py::none();
                  entry["test_ll"] =
                      row.test_click_ll ? py::cast(*row.test_click_ll) : py::none();
                  entry["test_oell"] = row.test_oell ? py::cast(*row.test_oell) : py::none();
                  entry["oell_undefined"] = row.oell_undefined;
                  entry["error"] = row.error;
                  rows.append(entry);
              }
              return rows;
          },
          py::arg("config_text"),
          "Runs a full experiment from configuration text and returns result rows.");

    m.attr("__version__") = "0.1.0";
}
