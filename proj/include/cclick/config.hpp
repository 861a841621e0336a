#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "cclick/experiment.hpp"
#include "cclick/optimize.hpp"
#include "cclick/simulate.hpp"

namespace cclick {

// Key = value configuration files ('#' starts a comment). Keys mirror the
// spec struct fields; unknown keys are an error.

ExperimentSpec parse_experiment_config(const std::string& text);
ExperimentSpec load_experiment_config(const std::filesystem::path& path);
std::string format_experiment_config(const ExperimentSpec& spec);

FitConfig parse_fit_config(const std::string& text);
FitConfig load_fit_config(const std::filesystem::path& path);
std::string format_fit_config(const FitConfig& config);

struct SimulateSpec {
    ModelKind kind = ModelKind::CPBM;
    CarouselLayout layout = CarouselLayout::reference();
    int items = 200;
    int sessions = 1000;
    std::uint64_t seed = 0;
    std::pair<double, double> theta_range = {0.05, 0.95};
    std::pair<double, double> exam_range = {0.1, 0.9};
    double termination = 0.1;
    bool first_click_only = false;
};

SimulateSpec parse_simulate_config(const std::string& text);
SimulateSpec load_simulate_config(const std::filesystem::path& path);

// Model parameter (de)serialization for the fit/evaluate verbs: JSON with the
// kind, per-item attraction keyed by item name, the examination parameters
// and the originating fit configuration.
void write_model_json(const std::filesystem::path& path, const Model& model,
                      const VocabPtr& vocab, const FitConfig* config = nullptr);
Model load_model_json(const std::filesystem::path& path, const Dataset& target);

}  // namespace cclick
