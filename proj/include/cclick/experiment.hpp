#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cclick/data_io.hpp"
#include "cclick/optimize.hpp"
#include "cclick/types.hpp"

namespace cclick {

enum class Scenario { Standard, FixedAttraction };

const char* to_string(Scenario);
Scenario scenario_from_string(const std::string&);

// One entry of the configuration matrix. GA entries without a learning rate
// get it selected on the validation set from the spec's grid.
struct ConfigRequest {
    ModelKind model = ModelKind::CPBM;
    Algorithm algorithm = Algorithm::GA;
    std::optional<AttractionInit> att_init;
    std::optional<ExaminationInit> exam_init;
    std::optional<double> learning_rate;

    friend bool operator==(const ConfigRequest&, const ConfigRequest&) = default;
};

struct ExperimentSpec {
    Scenario scenario = Scenario::Standard;

    // Either a raw interaction log (split pipeline runs first) ...
    std::string raw_path;
    // ... or pre-split files: train = the 82% subtrain, validation = 8%,
    // test = 10%. Final fits use train + validation.
    std::string train_path;
    std::string validation_path;
    std::string test_path;

    CarouselLayout layout = CarouselLayout::reference();
    SplitSpec split;

    std::vector<ConfigRequest> matrix;
    // When the matrix is empty and this is set, the scenario's default matrix
    // runs; clearing it allows a dummy-baseline-only report.
    bool use_default_matrix = true;
    std::vector<double> lr_grid = {0.001, 0.01, 0.1};
    int iterations = 100;
    std::vector<int> eval_checkpoints = {0, 50, 100};

    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool include_dummy = true;
};

// The full configuration matrix of the scenario: cascade baselines, CPBM by
// EM and GA, RCPBM by GA, OEPBM by MLE and GA; the fixed-attraction scenario
// restricts attraction initialization to CTR.
std::vector<ConfigRequest> default_matrix(Scenario scenario);

struct ResultRow {
    std::string model;
    std::string alg;
    std::optional<double> lr;
    std::optional<AttractionInit> att_init;
    std::optional<ExaminationInit> exam_init;
    std::optional<int> best_iteration;
    std::optional<double> test_click_ll;  // per-session
    std::optional<double> test_oell;      // per-session
    bool oell_undefined = false;          // cascade kinds
    std::string error;                    // non-empty -> aborted configuration
    bool best_click = false;
    bool best_oell = false;
};

struct ExperimentResults {
    std::vector<ResultRow> rows;
    long failed_configs = 0;
};

ExperimentResults run_experiment(const ExperimentSpec& spec);

struct ReportFiles {
    std::filesystem::path csv;
    std::filesystem::path text;
};

// results.csv in the data-file delimiter format plus an aligned text table;
// the best click-likelihood and best joint-likelihood rows are flagged.
ReportFiles emit_report(const ExperimentResults& results, const std::filesystem::path& out_dir);

std::string format_results_csv(const ExperimentResults& results);
std::string format_results_text(const ExperimentResults& results);

}  // namespace cclick
