#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cclick/dataset.hpp"
#include "cclick/types.hpp"

namespace cclick {

// Generating parameters for synthetic interaction logs. Items are placed on
// the grid uniformly at random each session (catalog size >= grid size), so
// every cell is covered every session.
struct GroundTruth {
    CarouselLayout layout;
    ModelKind kind = ModelKind::CPBM;
    std::vector<double> theta;  // catalog attraction, item k is named "item_<k>"
    ExaminationParams exam;
    int sessions = 0;
    std::uint64_t seed = 0;
    // Censors position-based sessions to their first click in browsing order,
    // mimicking single-selection logs; cascade kinds stop at the click anyway.
    bool first_click_only = false;
};

GroundTruth random_ground_truth(ModelKind kind, const CarouselLayout& layout, int items,
                                int sessions, std::uint64_t seed,
                                std::pair<double, double> theta_range,
                                std::pair<double, double> exam_range, double termination);

// Draws examination and click labels per the generating model. Cascade kinds
// realize the sequential browsing story (examine, click-or-continue, maybe
// terminate), so examination labels are well defined for them too; clicks
// always imply examination and impression by construction.
Dataset simulate(const GroundTruth& gt);

// Closed-form P(click | position, item) for one fixed screen (cell -> catalog
// item). The analytic oracle that empirical simulation frequencies converge
// to. Returned row-major.
std::vector<double> exact_click_distribution(const GroundTruth& gt,
                                             const std::vector<int>& screen_items);

// Per-cell click frequency over gt.sessions simulated sessions of one fixed
// screen, streamed without materializing a dataset.
std::vector<double> empirical_click_frequency(const GroundTruth& gt,
                                              const std::vector<int>& screen_items);

struct ParamErrorSummary {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    long compared = 0;
    long skipped_low_support = 0;
};

struct RecoveryReport {
    ParamErrorSummary attraction;
    ParamErrorSummary examination;
};

// Absolute parameter errors of a fitted model against the ground truth,
// restricted to parameters with at least `min_support` records in `fit_data`.
// Examination errors are computed when the fitted variant matches the ground
// truth's shape (kind may differ, e.g. an OEPBM fit of CPBM-generated data).
RecoveryReport recovery_report(const GroundTruth& gt, const Model& fitted,
                               const Dataset& fit_data, long min_support = 0);

}  // namespace cclick
