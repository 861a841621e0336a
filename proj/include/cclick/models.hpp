#pragma once

#include <span>

#include "cclick/types.hpp"

namespace cclick {

// Attraction values of every item shown at an earlier cascade position than
// the target: all columns of the rows above, then the columns to the left in
// the target row, in browsing order. For a target (i, j) on an I x J grid the
// context holds exactly (i-1)*J + (j-1) values.
struct SessionContext {
    std::vector<double> prior_attractions;
};

// Probability that the cascade reaches the target position: product of
// (1 - theta) over all prior items. Computed in log space; deep positions may
// underflow to exactly 0.
double exam_prob_cm(std::span<const double> prior_attractions);

// Cascade with a termination test after each of the (i-1)*J + j - 1 prior
// unattractive items.
double exam_prob_tcm(std::span<const double> prior_attractions, double t, int row, int col,
                     const CarouselLayout& layout);

// Row-level cascade: one termination test per skipped row plus one per prior
// item in the target row, i + j - 2 in total.
double exam_prob_ccm(std::span<const double> prior_attractions, double t, int row, int col);

double exam_prob_position(const PositionGrid& grid, int row, int col);

double exam_prob_rowcol(const RowColFactors& factors, int row, int col);

// Examination probability of `kind` at (row, col); `ctx` is required for the
// cascade kinds and must not be supplied for the position-based kinds.
double exam_prob(ModelKind kind, const ExaminationParams& params, int row, int col,
                 const CarouselLayout& layout, const SessionContext* ctx = nullptr);

// P(click | position, item) = examination * attraction.
double click_prob(ModelKind kind, const ExaminationParams& params, double theta_u, int row,
                  int col, const CarouselLayout& layout, const SessionContext* ctx = nullptr);

}  // namespace cclick
