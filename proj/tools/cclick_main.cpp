#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cclick/config.hpp"
#include "cclick/data_io.hpp"
#include "cclick/experiment.hpp"
#include "cclick/likelihood.hpp"
#include "cclick/optimize.hpp"
#include "cclick/simulate.hpp"

namespace fs = std::filesystem;
using namespace cclick;

namespace {

struct LayoutFlags {
    int rows = 10;
    int cols = 15;
    int visible = 5;

    CarouselLayout layout() const { return CarouselLayout::make(rows, cols, visible); }

    void attach(CLI::App* cmd) {
        cmd->add_option("--rows", rows, "carousel rows");
        cmd->add_option("--cols", cols, "item columns per carousel");
        cmd->add_option("--visible", visible, "items shown per swipe state");
    }
};

void write_trace_csv(const fs::path& path, const FitResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "iteration,split,metric,total,per_session,records,sessions,clamped\n";
    auto emit = [&](int iteration, const char* split, const char* metric,
                    const std::optional<LikelihoodReport>& report) {
        if (!report) return;
        char line[160];
        std::snprintf(line, sizeof(line), "%d,%s,%s,%.6f,%.6f,%ld,%ld,%d\n", iteration, split,
                      metric, report->total, report->per_session_normalized, report->record_count,
                      report->session_count, report->clamped ? 1 : 0);
        out << line;
    };
    for (const CheckpointReport& cp : result.trace) {
        emit(cp.iteration, "train", "click_ll", cp.train_click);
        emit(cp.iteration, "train", "oell", cp.train_oell);
        emit(cp.iteration, "validation", "click_ll", cp.validation_click);
        emit(cp.iteration, "validation", "oell", cp.validation_oell);
        emit(cp.iteration, "test", "click_ll", cp.test_click);
        emit(cp.iteration, "test", "oell", cp.test_oell);
    }
}

void print_report(const char* label, const LikelihoodReport& report) {
    std::printf("%-9s total=%.4f per_session=%.4f records=%ld sessions=%ld%s\n", label,
                report.total, report.per_session_normalized, report.record_count,
                report.session_count, report.clamped ? " (clamped)" : "");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"click models for carousel interfaces"};
    app.require_subcommand(1);

    // split
    auto* split_cmd = app.add_subcommand("split", "filter a raw log and write train/val/test");
    std::string split_input, split_out = "splits";
    SplitSpec split_spec;
    LayoutFlags split_layout;
    split_cmd->add_option("--input", split_input, "raw interaction log")->required();
    split_cmd->add_option("--out", split_out, "output directory");
    split_cmd->add_option("--seed", split_spec.seed, "split seed");
    split_cmd->add_option("--test-threshold", split_spec.test_click_threshold,
                          "minimum clicks for test items");
    split_cmd->add_option("--validation-threshold", split_spec.validation_click_threshold,
                          "minimum clicks for validation items");
    split_cmd->add_option("--fraction", split_spec.fraction, "share of click sessions moved");
    split_layout.attach(split_cmd);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a single model configuration");
    std::string fit_config_path, fit_train, fit_validation, fit_test, fit_out = "fit";
    std::optional<std::uint64_t> fit_seed;
    LayoutFlags fit_layout;
    fit_cmd->add_option("--config", fit_config_path, "fit configuration file")->required();
    fit_cmd->add_option("--train", fit_train, "train split")->required();
    fit_cmd->add_option("--validation", fit_validation, "validation split")->required();
    fit_cmd->add_option("--test", fit_test, "test split")->required();
    fit_cmd->add_option("--out", fit_out, "output directory");
    fit_cmd->add_option("--seed", fit_seed, "seed override");
    fit_layout.attach(fit_cmd);

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "run a configuration matrix");
    std::string exp_config_path;
    std::optional<std::uint64_t> exp_seed;
    std::optional<std::string> exp_out, exp_scenario;
    exp_cmd->add_option("--config", exp_config_path, "experiment configuration file")->required();
    exp_cmd->add_option("--seed", exp_seed, "seed override");
    exp_cmd->add_option("--out", exp_out, "output directory override");
    exp_cmd->add_option("--scenario", exp_scenario, "standard|fixed");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic interaction log");
    std::string sim_config_path, sim_out = "simulated";
    std::optional<std::uint64_t> sim_seed;
    sim_cmd->add_option("--config", sim_config_path, "simulation configuration file")->required();
    sim_cmd->add_option("--out", sim_out, "output directory");
    sim_cmd->add_option("--seed", sim_seed, "seed override");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "likelihoods of a fitted model on a dataset");
    std::string eval_model, eval_data;
    LayoutFlags eval_layout;
    eval_cmd->add_option("--model", eval_model, "model.json from fit")->required();
    eval_cmd->add_option("--data", eval_data, "dataset file")->required();
    eval_layout.attach(eval_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (split_cmd->parsed()) {
            const SplitFiles files =
                run_split_pipeline(split_input, split_layout.layout(), split_spec, split_out);
            std::printf("wrote %s\n", files.train_full.string().c_str());
            std::printf("wrote %s\n", files.train.string().c_str());
            std::printf("wrote %s\n", files.validation.string().c_str());
            std::printf("wrote %s\n", files.test.string().c_str());
            std::printf("wrote %s\n", files.manifest.string().c_str());
            return 0;
        }
        if (fit_cmd->parsed()) {
            FitConfig config = load_fit_config(fit_config_path);
            if (fit_seed) config.seed = *fit_seed;
            const SplitDatasets splits =
                load_split_datasets(fit_train, fit_validation, fit_test, fit_layout.layout());
            const FitResult result = fit(config, splits.train, splits.validation, splits.test);
            fs::create_directories(fit_out);
            const fs::path model_path = fs::path(fit_out) / "model.json";
            write_model_json(model_path, result.model, splits.train.vocab(), &result.config);
            write_trace_csv(fs::path(fit_out) / "trace.csv", result);
            std::printf("best checkpoint: %d (validation best: %d)\n", result.best_checkpoint,
                        result.validation_best_checkpoint);
            for (const CheckpointReport& cp : result.trace) {
                if (cp.iteration != result.best_checkpoint) continue;
                if (cp.test_click) print_report("click_ll", *cp.test_click);
                if (cp.test_oell) print_report("oell", *cp.test_oell);
            }
            std::printf("wrote %s\n", model_path.string().c_str());
            return 0;
        }
        if (exp_cmd->parsed()) {
            ExperimentSpec spec = load_experiment_config(exp_config_path);
            if (exp_seed) {
                spec.seed = *exp_seed;
                spec.split.seed = *exp_seed;
            }
            if (exp_out) spec.out_dir = *exp_out;
            if (exp_scenario) spec.scenario = scenario_from_string(*exp_scenario);
            const ExperimentResults results = run_experiment(spec);
            const ReportFiles files = emit_report(results, spec.out_dir);
            std::printf("%s", format_results_text(results).c_str());
            std::printf("wrote %s\n", files.csv.string().c_str());
            std::printf("wrote %s\n", files.text.string().c_str());
            if (results.failed_configs > 0) {
                std::fprintf(stderr, "%ld configuration(s) aborted\n", results.failed_configs);
                return 2;
            }
            return 0;
        }
        if (sim_cmd->parsed()) {
            SimulateSpec spec = load_simulate_config(sim_config_path);
            if (sim_seed) spec.seed = *sim_seed;
            const GroundTruth gt =
                random_ground_truth(spec.kind, spec.layout, spec.items, spec.sessions, spec.seed,
                                    spec.theta_range, spec.exam_range, spec.termination);
            GroundTruth gt_run = gt;
            gt_run.first_click_only = spec.first_click_only;
            const Dataset data = simulate(gt_run);
            fs::create_directories(sim_out);
            const fs::path data_path = fs::path(sim_out) / "data.csv";
            write_interactions(data_path, data);
            Model truth{gt.kind, ItemAttraction{gt.theta}, gt.exam};
            write_model_json(fs::path(sim_out) / "truth.json", truth, data.vocab());
            std::printf("wrote %s (%zu records, %ld sessions)\n", data_path.string().c_str(),
                        data.size(), data.session_count());
            return 0;
        }
        if (eval_cmd->parsed()) {
            const Dataset data = load_interactions(eval_data, eval_layout.layout());
            const Model model = load_model_json(eval_model, data);
            print_report("click_ll", click_log_likelihood(data, model));
            if (!is_cascade(model.kind)) {
                print_report("oell", observed_examination_log_likelihood(data, model));
            } else {
                std::printf("oell      undefined for %s\n", to_string(model.kind));
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
