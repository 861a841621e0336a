#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cclick/dataset.hpp"
#include "cclick/likelihood.hpp"
#include "cclick/types.hpp"

namespace cclick {

enum class Algorithm { MLE, EM, GA };
enum class AttractionInit { Uniform, CTR };
enum class ExaminationInit { Gaze, Carousel };

const char* to_string(Algorithm);
const char* to_string(AttractionInit);
const char* to_string(ExaminationInit);
Algorithm algorithm_from_string(const std::string&);
AttractionInit attraction_init_from_string(const std::string&);
ExaminationInit examination_init_from_string(const std::string&);

// The objective each model family is fitted and ranked by: OELL for the
// OEPBM, the click likelihood for everything else.
LikelihoodKind objective_kind(ModelKind kind);

struct FitConfig {
    ModelKind model_kind = ModelKind::CPBM;
    Algorithm algorithm = Algorithm::GA;
    double learning_rate = 0.01;  // GA only
    int iterations = 100;
    std::vector<int> eval_checkpoints = {0, 50, 100};
    AttractionInit attraction_init = AttractionInit::CTR;
    ExaminationInit examination_init = ExaminationInit::Gaze;
    bool fixed_attraction = false;
    std::uint64_t seed = 0;

    friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

// Rejects invalid (model, algorithm) pairs and malformed checkpoint lists.
void validate_fit_config(const FitConfig& config);

struct CheckpointReport {
    int iteration = 0;
    std::optional<LikelihoodReport> train_click, train_oell;
    std::optional<LikelihoodReport> validation_click, validation_oell;
    std::optional<LikelihoodReport> test_click, test_oell;
};

struct FitResult {
    Model model;  // parameters at the best checkpoint
    std::vector<CheckpointReport> trace;
    FitConfig config;
    int best_checkpoint = 0;             // by test objective, ties -> lower iteration
    int validation_best_checkpoint = 0;  // by validation objective
    double selected_termination = 0.0;   // cascade fits only
};

// theta_u = (sum of clicks over the item's records) / record count, clipped.
// Every vocabulary item must have at least one record.
ItemAttraction mle_attraction(const Dataset& dataset);

// w_ij = (sum of examination labels at the position) / record count, clipped.
// Every grid cell must have at least one record; the error names the cell.
PositionGrid mle_examination(const Dataset& dataset);

// Attraction by MLE plus a termination probability chosen from the grid
// {0.01, ..., 1.00} by validation click likelihood (ties -> smaller t).
// kind CM is the degenerate t = 0 case and skips the search.
FitResult fit_cascade_mle(const Dataset& train, ModelKind kind, const Dataset& validation);

std::vector<double> termination_grid();

// One synchronous EM update of the position-based model; right-hand sides use
// the pre-step values, results are clipped.
std::pair<ItemAttraction, PositionGrid> em_step_cpbm(const Dataset& dataset,
                                                     const ItemAttraction& theta,
                                                     const PositionGrid& w);

// Full-batch gradient-ascent steps; the per-parameter update is the mean
// gradient over that parameter's index set, scaled by lr and clipped.
std::pair<ItemAttraction, PositionGrid> ga_step_cpbm(const Dataset& dataset,
                                                     const ItemAttraction& theta,
                                                     const PositionGrid& w, double lr);

std::pair<ItemAttraction, RowColFactors> ga_step_rcpbm(const Dataset& dataset,
                                                       const ItemAttraction& theta,
                                                       const RowColFactors& factors, double lr);

std::pair<ItemAttraction, PositionGrid> ga_step_oepbm(const Dataset& dataset,
                                                      const ItemAttraction& theta,
                                                      const PositionGrid& w, double lr);

// Mean analytic gradients (the bracketed sums of the update rules), exposed
// so tests can compare them against finite differences of the likelihoods.
struct GridGradient {
    std::vector<double> theta;  // per item; 0 for items without records
    std::vector<double> exam;   // flat row-major grid
};
struct RowColGradient {
    std::vector<double> theta;
    std::vector<double> row_w;
    std::vector<double> col_w;
};

GridGradient cpbm_mean_gradient(const Dataset& dataset, const ItemAttraction& theta,
                                const PositionGrid& w);
RowColGradient rcpbm_mean_gradient(const Dataset& dataset, const ItemAttraction& theta,
                                   const RowColFactors& factors);
GridGradient oepbm_mean_gradient(const Dataset& dataset, const ItemAttraction& theta,
                                 const PositionGrid& w);

// Runs the configured algorithm, evaluating train/validation/test likelihoods
// at each checkpoint. In fixed-attraction mode theta is pinned to the train
// CTR. The returned model carries the best-checkpoint parameters.
FitResult fit(const FitConfig& config, const Dataset& train, const Dataset& validation,
              const Dataset& test);

}  // namespace cclick
