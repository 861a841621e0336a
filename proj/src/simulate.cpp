#include "cclick/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cclick/models.hpp"
#include "cclick/rng.hpp"

namespace cclick {

namespace {

void validate_ground_truth(const GroundTruth& gt) {
    if (gt.sessions < 1) throw std::invalid_argument("GroundTruth: sessions must be >= 1");
    if (static_cast<int>(gt.theta.size()) < gt.layout.positions()) {
        throw std::invalid_argument("GroundTruth: catalog smaller than the grid");
    }
    for (double th : gt.theta) {
        if (!(th >= 0.0 && th <= 1.0)) {
            throw std::invalid_argument("GroundTruth: attraction outside [0, 1]");
        }
    }
    Model probe{gt.kind, ItemAttraction{gt.theta}, gt.exam};
    validate_model(probe, gt.layout, gt.theta.size());
}

// Fills e/c labels for one session of `screen` (cell -> catalog item), walking
// cells in browsing order. One shared routine keeps dataset generation and the
// streamed frequency estimate on the identical process.
void draw_session(const GroundTruth& gt, const std::vector<int>& screen, Rng& rng,
                  std::vector<char>& examined, std::vector<char>& clicked) {
    const CarouselLayout& layout = gt.layout;
    const int cells = layout.positions();
    std::fill(examined.begin(), examined.end(), 0);
    std::fill(clicked.begin(), clicked.end(), 0);

    switch (gt.kind) {
        case ModelKind::CPBM:
        case ModelKind::OEPBM: {
            const auto& grid = std::get<PositionGrid>(gt.exam);
            bool clicked_any = false;
            for (int c = 0; c < cells; ++c) {
                const bool e = rng.bernoulli(grid.w[c]);
                examined[c] = e;
                if (e && rng.bernoulli(gt.theta[screen[c]])) {
                    if (!gt.first_click_only || !clicked_any) {
                        clicked[c] = 1;
                        clicked_any = true;
                    }
                }
            }
            return;
        }
        case ModelKind::RCPBM: {
            const auto& factors = std::get<RowColFactors>(gt.exam);
            bool clicked_any = false;
            for (int i = 1; i <= layout.rows; ++i) {
                for (int j = 1; j <= layout.cols; ++j) {
                    const int c = layout.cell(i, j);
                    const bool e = rng.bernoulli(factors.row_w[i - 1] * factors.col_w[j - 1]);
                    examined[c] = e;
                    if (e && rng.bernoulli(gt.theta[screen[c]])) {
                        if (!gt.first_click_only || !clicked_any) {
                            clicked[c] = 1;
                            clicked_any = true;
                        }
                    }
                }
            }
            return;
        }
        case ModelKind::CM:
        case ModelKind::TCM: {
            const double t = gt.kind == ModelKind::TCM ? std::get<Termination>(gt.exam).t : 0.0;
            for (int c = 0; c < cells; ++c) {
                examined[c] = 1;
                if (rng.bernoulli(gt.theta[screen[c]])) {
                    clicked[c] = 1;
                    return;
                }
                if (gt.kind == ModelKind::TCM && rng.bernoulli(t)) return;
            }
            return;
        }
        case ModelKind::CCM: {
            // Row topics are scanned from the top. An unattractive topic means
            // every item in the row is unattractive and costs one termination
            // test; an attractive topic is entered and scanned left to right
            // with a termination test after each unattractive item.
            const double t = std::get<Termination>(gt.exam).t;
            std::vector<char> attractive(static_cast<std::size_t>(layout.cols));
            for (int i = 1; i <= layout.rows; ++i) {
                bool any = false;
                for (int j = 1; j <= layout.cols; ++j) {
                    attractive[j - 1] = rng.bernoulli(gt.theta[screen[layout.cell(i, j)]]);
                    any = any || attractive[j - 1];
                }
                if (!any) {
                    if (rng.bernoulli(t)) return;
                    continue;
                }
                for (int j = 1; j <= layout.cols; ++j) {
                    const int c = layout.cell(i, j);
                    examined[c] = 1;
                    if (attractive[j - 1]) {
                        clicked[c] = 1;
                        return;
                    }
                    if (rng.bernoulli(t)) return;
                }
                return;  // unreachable: the row contains an attractive item
            }
            return;
        }
    }
}

std::vector<int> random_screen(int catalog_size, int cells, Rng& rng, std::vector<int>& perm) {
    for (int k = 0; k < catalog_size; ++k) perm[k] = k;
    for (int k = 0; k < cells; ++k) {
        const auto j = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(catalog_size - k)));
        std::swap(perm[k], perm[j]);
    }
    return std::vector<int>(perm.begin(), perm.begin() + cells);
}

}  // namespace

GroundTruth random_ground_truth(ModelKind kind, const CarouselLayout& layout, int items,
                                int sessions, std::uint64_t seed,
                                std::pair<double, double> theta_range,
                                std::pair<double, double> exam_range, double termination) {
    GroundTruth gt;
    gt.layout = layout;
    gt.kind = kind;
    gt.sessions = sessions;
    gt.seed = seed;
    // Parameter stream must not collide with the per-session streams 0..N-1.
    Rng rng = Rng(seed).fork(0x8000000000000000ULL);
    gt.theta.resize(static_cast<std::size_t>(items));
    for (double& th : gt.theta) th = rng.uniform(theta_range.first, theta_range.second);
    switch (kind) {
        case ModelKind::CPBM:
        case ModelKind::OEPBM: {
            PositionGrid grid = PositionGrid::filled(layout, 0.0);
            for (double& w : grid.w) w = rng.uniform(exam_range.first, exam_range.second);
            gt.exam = std::move(grid);
            break;
        }
        case ModelKind::RCPBM: {
            RowColFactors factors;
            factors.row_w.resize(static_cast<std::size_t>(layout.rows));
            factors.col_w.resize(static_cast<std::size_t>(layout.cols));
            for (double& w : factors.row_w) w = rng.uniform(exam_range.first, exam_range.second);
            for (double& w : factors.col_w) w = rng.uniform(exam_range.first, exam_range.second);
            gt.exam = std::move(factors);
            break;
        }
        case ModelKind::TCM:
        case ModelKind::CCM: gt.exam = Termination{termination}; break;
        case ModelKind::CM: gt.exam = std::monostate{}; break;
    }
    validate_ground_truth(gt);
    return gt;
}

Dataset simulate(const GroundTruth& gt) {
    validate_ground_truth(gt);
    const CarouselLayout& layout = gt.layout;
    const int cells = layout.positions();
    const int catalog = static_cast<int>(gt.theta.size());

    auto vocab = std::make_shared<Vocab>();
    for (int k = 0; k < catalog; ++k) vocab->intern_item("item_" + std::to_string(k));
    for (int s = 0; s < gt.sessions; ++s) vocab->intern_session("s_" + std::to_string(s));

    std::vector<InteractionRecord> records;
    records.reserve(static_cast<std::size_t>(gt.sessions) * cells);
    const Rng base(gt.seed);
    std::vector<int> perm(static_cast<std::size_t>(catalog));
    std::vector<char> examined(static_cast<std::size_t>(cells));
    std::vector<char> clicked(static_cast<std::size_t>(cells));
    for (int s = 0; s < gt.sessions; ++s) {
        Rng rng = base.fork(static_cast<std::uint64_t>(s));
        const std::vector<int> screen = random_screen(catalog, cells, rng, perm);
        draw_session(gt, screen, rng, examined, clicked);
        for (int i = 1; i <= layout.rows; ++i) {
            for (int j = 1; j <= layout.cols; ++j) {
                const int c = layout.cell(i, j);
                InteractionRecord r;
                r.session = s;
                r.item = screen[c];
                r.row = static_cast<std::int16_t>(i);
                r.col = static_cast<std::int16_t>(j);
                r.click = clicked[c] != 0;
                r.examined = examined[c] != 0;
                r.impressed = true;
                records.push_back(r);
            }
        }
    }
    return Dataset(layout, std::move(vocab), std::move(records));
}

std::vector<double> exact_click_distribution(const GroundTruth& gt,
                                             const std::vector<int>& screen_items) {
    validate_ground_truth(gt);
    const CarouselLayout& layout = gt.layout;
    const int cells = layout.positions();
    if (static_cast<int>(screen_items.size()) != cells) {
        throw std::invalid_argument("screen placement must cover every grid cell");
    }
    std::vector<double> out(static_cast<std::size_t>(cells), 0.0);
    SessionContext ctx;
    ctx.prior_attractions.reserve(static_cast<std::size_t>(cells));
    for (int i = 1; i <= layout.rows; ++i) {
        for (int j = 1; j <= layout.cols; ++j) {
            const int c = layout.cell(i, j);
            const double theta = gt.theta.at(static_cast<std::size_t>(screen_items[c]));
            const SessionContext* ctx_ptr = is_cascade(gt.kind) ? &ctx : nullptr;
            out[c] = click_prob(gt.kind, gt.exam, theta, i, j, layout, ctx_ptr);
            ctx.prior_attractions.push_back(theta);
        }
    }
    return out;
}

std::vector<double> empirical_click_frequency(const GroundTruth& gt,
                                              const std::vector<int>& screen_items) {
    validate_ground_truth(gt);
    const int cells = gt.layout.positions();
    if (static_cast<int>(screen_items.size()) != cells) {
        throw std::invalid_argument("screen placement must cover every grid cell");
    }
    std::vector<long> counts(static_cast<std::size_t>(cells), 0);
    std::vector<char> examined(static_cast<std::size_t>(cells));
    std::vector<char> clicked(static_cast<std::size_t>(cells));
    const Rng base(gt.seed);
    for (int s = 0; s < gt.sessions; ++s) {
        Rng rng = base.fork(static_cast<std::uint64_t>(s));
        draw_session(gt, screen_items, rng, examined, clicked);
        for (int c = 0; c < cells; ++c) counts[c] += clicked[c];
    }
    std::vector<double> out(static_cast<std::size_t>(cells));
    for (int c = 0; c < cells; ++c) {
        out[c] = static_cast<double>(counts[c]) / static_cast<double>(gt.sessions);
    }
    return out;
}

namespace {

void accumulate(ParamErrorSummary& summary, double truth, double fitted, long support,
                long min_support) {
    if (support < min_support) {
        ++summary.skipped_low_support;
        return;
    }
    const double err = std::abs(truth - fitted);
    summary.max_abs = std::max(summary.max_abs, err);
    summary.mean_abs += err;
    ++summary.compared;
}

}  // namespace

RecoveryReport recovery_report(const GroundTruth& gt, const Model& fitted,
                               const Dataset& fit_data, long min_support) {
    if (fitted.attraction.theta.size() != gt.theta.size()) {
        throw std::invalid_argument(
            "fitted attraction table does not match the ground-truth catalog");
    }
    RecoveryReport report;
    for (std::size_t u = 0; u < gt.theta.size(); ++u) {
        const long support = static_cast<long>(fit_data.by_item(static_cast<int>(u)).size());
        accumulate(report.attraction, gt.theta[u], fitted.attraction.theta[u], support,
                   min_support);
    }

    const auto* truth_grid = std::get_if<PositionGrid>(&gt.exam);
    const auto* fit_grid = std::get_if<PositionGrid>(&fitted.exam);
    const auto* truth_rc = std::get_if<RowColFactors>(&gt.exam);
    const auto* fit_rc = std::get_if<RowColFactors>(&fitted.exam);
    const auto* truth_term = std::get_if<Termination>(&gt.exam);
    const auto* fit_term = std::get_if<Termination>(&fitted.exam);
    if (truth_grid && fit_grid) {
        for (int i = 1; i <= truth_grid->rows; ++i) {
            for (int j = 1; j <= truth_grid->cols; ++j) {
                const long support = static_cast<long>(fit_data.by_position(i, j).size());
                accumulate(report.examination, truth_grid->at(i, j), fit_grid->at(i, j), support,
                           min_support);
            }
        }
    } else if (truth_rc && fit_rc) {
        for (std::size_t i = 0; i < truth_rc->row_w.size(); ++i) {
            const long support =
                static_cast<long>(fit_data.by_row(static_cast<int>(i) + 1).size());
            accumulate(report.examination, truth_rc->row_w[i], fit_rc->row_w[i], support,
                       min_support);
        }
        for (std::size_t j = 0; j < truth_rc->col_w.size(); ++j) {
            const long support =
                static_cast<long>(fit_data.by_col(static_cast<int>(j) + 1).size());
            accumulate(report.examination, truth_rc->col_w[j], fit_rc->col_w[j], support,
                       min_support);
        }
    } else if (truth_term && fit_term) {
        accumulate(report.examination, truth_term->t, fit_term->t,
                   static_cast<long>(fit_data.size()), min_support);
    }

    if (report.attraction.compared > 0) report.attraction.mean_abs /= report.attraction.compared;
    if (report.examination.compared > 0) {
        report.examination.mean_abs /= report.examination.compared;
    }
    return report;
}

}  // namespace cclick
