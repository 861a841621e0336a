#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cclick/dataset.hpp"
#include "cclick/likelihood.hpp"
#include "cclick/models.hpp"
#include "cclick/rng.hpp"
#include "cclick/types.hpp"

namespace cclick::testing {

// Shorthand dataset builder: {session, item, row, col, click, examined, impressed}.
inline Dataset dataset_from(const CarouselLayout& layout,
                            const std::vector<std::array<int, 5>>& rows_cek) {
    // row format: {row, col, click, examined, impressed}; one synthetic item
    // and session per record index for quick kernel tests.
    std::vector<RawRow> rows;
    int k = 0;
    for (const auto& r : rows_cek) {
        RawRow raw;
        raw.session = "s" + std::to_string(k);
        raw.item = "u" + std::to_string(k);
        raw.row = r[0];
        raw.col = r[1];
        raw.click = r[2];
        raw.examined = r[3];
        raw.impressed = r[4];
        rows.push_back(raw);
        ++k;
    }
    return make_dataset(layout, rows);
}

// Random dataset with valid labels (click implies examined and impressed).
inline Dataset random_dataset(const CarouselLayout& layout, int n_sessions, int n_items,
                              int n_records, Rng& rng, double p_examined = 0.5,
                              double p_click_given_exam = 0.3) {
    std::vector<RawRow> rows;
    rows.reserve(static_cast<std::size_t>(n_records));
    for (int k = 0; k < n_records; ++k) {
        RawRow raw;
        raw.session = "s" + std::to_string(rng.below(static_cast<std::uint64_t>(n_sessions)));
        raw.item = "u" + std::to_string(rng.below(static_cast<std::uint64_t>(n_items)));
        raw.row = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(layout.rows)));
        raw.col = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(layout.cols)));
        raw.examined = rng.bernoulli(p_examined) ? 1 : 0;
        raw.click = (raw.examined && rng.bernoulli(p_click_given_exam)) ? 1 : 0;
        raw.impressed = 1;
        rows.push_back(raw);
    }
    return make_dataset(layout, rows);
}

// Naive per-record recomputation of the model's examination probability,
// independent of the log-space implementation path.
inline double naive_examination(const Dataset& dataset, const Model& model, std::size_t t) {
    const InteractionRecord& r = dataset.records()[t];
    if (!is_cascade(model.kind)) {
        if (const auto* grid = std::get_if<PositionGrid>(&model.exam)) {
            return grid->at(r.row, r.col);
        }
        const auto& rc = std::get<RowColFactors>(model.exam);
        return rc.row_w[r.row - 1] * rc.col_w[r.col - 1];
    }
    const CarouselLayout& layout = dataset.layout();
    std::map<std::pair<int, int>, double> screen;
    for (std::size_t k = 0; k < dataset.size(); ++k) {
        const InteractionRecord& other = dataset.records()[k];
        if (other.session == r.session) {
            screen[{other.row, other.col}] = model.attraction.at(other.item);
        }
    }
    double product = 1.0;
    long skipped = 0;
    for (int i = 1; i <= layout.rows; ++i) {
        for (int j = 1; j <= layout.cols; ++j) {
            if (i > r.row || (i == r.row && j >= r.col)) continue;
            auto it = screen.find({i, j});
            const double theta = it == screen.end() ? kProbEps : it->second;
            product *= 1.0 - theta;
            ++skipped;
        }
    }
    double term = 1.0;
    if (model.kind == ModelKind::TCM) {
        const double t_prob = std::get<Termination>(model.exam).t;
        const long exponent = static_cast<long>(r.row - 1) * layout.cols + (r.col - 1);
        for (long k = 0; k < exponent; ++k) term *= 1.0 - t_prob;
    } else if (model.kind == ModelKind::CCM) {
        const double t_prob = std::get<Termination>(model.exam).t;
        const long exponent = r.row + r.col - 2;
        for (long k = 0; k < exponent; ++k) term *= 1.0 - t_prob;
    }
    (void)skipped;
    return product * term;
}

inline double naive_click_ll(const Dataset& dataset, const Model& model) {
    double total = 0.0;
    for (std::size_t t = 0; t < dataset.size(); ++t) {
        const InteractionRecord& r = dataset.records()[t];
        double p = naive_examination(dataset, model, t) * model.attraction.at(r.item);
        double arg = r.click ? p : 1.0 - p;
        if (arg < kLogFloor) arg = kLogFloor;
        total += std::log(arg);
    }
    return total;
}

inline double naive_oell(const Dataset& dataset, const Model& model) {
    double total = 0.0;
    for (std::size_t t = 0; t < dataset.size(); ++t) {
        const InteractionRecord& r = dataset.records()[t];
        const double w = naive_examination(dataset, model, t);
        const double theta = model.attraction.at(r.item);
        double arg;
        if (r.click) {
            arg = w * theta;
        } else if (r.examined) {
            arg = w * (1.0 - theta);
        } else {
            arg = 1.0 - w;
        }
        if (arg < kLogFloor) arg = kLogFloor;
        total += std::log(arg);
    }
    return total;
}

}  // namespace cclick::testing
