#pragma once

#include <utility>
#include <vector>

#include "cclick/dataset.hpp"
#include "cclick/types.hpp"

namespace cclick {

enum class LikelihoodKind { ClickLL, OELL };

struct LikelihoodReport {
    double total = 0.0;
    double per_session_normalized = 0.0;  // total / session_count
    long record_count = 0;
    long session_count = 0;
    LikelihoodKind kind = LikelihoodKind::ClickLL;
    // True when any log argument hit the kLogFloor clamp (e.g. a cascade
    // examination product underflowed to zero under a click).
    bool clamped = false;
};

// Sum over records of c*log(w*theta) + (1-c)*log(1 - w*theta), where w is the
// model's examination probability at the record's position (cascade kinds use
// the per-session prior-attraction products).
LikelihoodReport click_log_likelihood(const Dataset& dataset, const Model& model);

// Joint click/examination likelihood over the three realizable cases
// (clicked, examined-not-clicked, not-examined). Defined only for models
// exposing per-position examination; cascade kinds throw.
LikelihoodReport observed_examination_log_likelihood(const Dataset& dataset, const Model& model);

// "1% Click" baseline: click likelihood with P(click) = 0.01, and the joint
// likelihood with case weights (0.01, 0.01, 0.98).
std::pair<LikelihoodReport, LikelihoodReport> dummy_baseline(const Dataset& dataset);

// Per-record examination probability under the model, in record order.
std::vector<double> examination_per_record(const Dataset& dataset, const Model& model);

}  // namespace cclick
