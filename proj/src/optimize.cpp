#include "cclick/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cclick/data_io.hpp"

namespace cclick {

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::MLE: return "MLE";
        case Algorithm::EM: return "EM";
        case Algorithm::GA: return "GA";
    }
    return "?";
}

const char* to_string(AttractionInit i) {
    return i == AttractionInit::Uniform ? "Uniform" : "CTR";
}

const char* to_string(ExaminationInit i) {
    return i == ExaminationInit::Gaze ? "Gaze" : "Carousel";
}

namespace {
std::string lower(const std::string& s) {
    std::string out;
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}
}  // namespace

Algorithm algorithm_from_string(const std::string& name) {
    const std::string s = lower(name);
    if (s == "mle") return Algorithm::MLE;
    if (s == "em") return Algorithm::EM;
    if (s == "ga") return Algorithm::GA;
    throw std::invalid_argument("unknown algorithm: " + name);
}

AttractionInit attraction_init_from_string(const std::string& name) {
    const std::string s = lower(name);
    if (s == "uniform") return AttractionInit::Uniform;
    if (s == "ctr") return AttractionInit::CTR;
    throw std::invalid_argument("unknown attraction init: " + name);
}

ExaminationInit examination_init_from_string(const std::string& name) {
    const std::string s = lower(name);
    if (s == "gaze") return ExaminationInit::Gaze;
    if (s == "carousel") return ExaminationInit::Carousel;
    throw std::invalid_argument("unknown examination init: " + name);
}

LikelihoodKind objective_kind(ModelKind kind) {
    return kind == ModelKind::OEPBM ? LikelihoodKind::OELL : LikelihoodKind::ClickLL;
}

void validate_fit_config(const FitConfig& config) {
    const ModelKind k = config.model_kind;
    const Algorithm a = config.algorithm;
    bool ok = false;
    switch (k) {
        case ModelKind::CM:
        case ModelKind::TCM:
        case ModelKind::CCM: ok = (a == Algorithm::MLE); break;
        case ModelKind::CPBM: ok = (a == Algorithm::EM || a == Algorithm::GA); break;
        case ModelKind::RCPBM: ok = (a == Algorithm::GA); break;
        case ModelKind::OEPBM: ok = (a == Algorithm::MLE || a == Algorithm::GA); break;
    }
    if (!ok) {
        throw std::invalid_argument(std::string("unsupported combination: ") + to_string(k) +
                                    " with " + to_string(a));
    }
    if (a == Algorithm::MLE) return;  // init/iteration fields are ignored
    if (config.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (a == Algorithm::GA && !(config.learning_rate > 0.0)) {
        throw std::invalid_argument("GA requires a positive learning rate");
    }
    if (config.eval_checkpoints.empty()) {
        throw std::invalid_argument("at least one evaluation checkpoint is required");
    }
    int prev = -1;
    for (int c : config.eval_checkpoints) {
        if (c < 0 || c > config.iterations) {
            throw std::invalid_argument("checkpoint " + std::to_string(c) +
                                        " outside [0, iterations]");
        }
        if (c <= prev) throw std::invalid_argument("checkpoints must be strictly increasing");
        prev = c;
    }
    if (config.fixed_attraction && config.attraction_init != AttractionInit::CTR) {
        throw std::invalid_argument("fixed-attraction fits pin attraction to the train CTR");
    }
}

ItemAttraction mle_attraction(const Dataset& dataset) {
    ItemAttraction attraction;
    attraction.theta.resize(static_cast<std::size_t>(dataset.n_items()));
    for (int u = 0; u < dataset.n_items(); ++u) {
        const auto& idx = dataset.by_item(u);
        if (idx.empty()) {
            throw std::runtime_error("item '" + dataset.vocab()->items[u] +
                                     "' has no records; cannot estimate attraction");
        }
        long clicks = 0;
        for (int t : idx) clicks += dataset.records()[t].click ? 1 : 0;
        attraction.theta[u] = clip_prob(static_cast<double>(clicks) / idx.size());
    }
    return attraction;
}

PositionGrid mle_examination(const Dataset& dataset) {
    const CarouselLayout& layout = dataset.layout();
    PositionGrid grid = PositionGrid::filled(layout, 0.0);
    for (int i = 1; i <= layout.rows; ++i) {
        for (int j = 1; j <= layout.cols; ++j) {
            const auto& idx = dataset.by_position(i, j);
            if (idx.empty()) {
                throw std::runtime_error("position (" + std::to_string(i) + "," +
                                         std::to_string(j) +
                                         ") has no records; cannot estimate examination");
            }
            long examined = 0;
            for (int t : idx) examined += dataset.records()[t].examined ? 1 : 0;
            grid.at(i, j) = clip_prob(static_cast<double>(examined) / idx.size());
        }
    }
    return grid;
}

std::vector<double> termination_grid() {
    std::vector<double> grid;
    grid.reserve(100);
    for (int k = 1; k <= 100; ++k) grid.push_back(static_cast<double>(k) / 100.0);
    return grid;
}

GridGradient cpbm_mean_gradient(const Dataset& dataset, const ItemAttraction& theta,
                                const PositionGrid& w) {
    GridGradient grad;
    grad.theta.assign(theta.theta.size(), 0.0);
    grad.exam.assign(w.w.size(), 0.0);
    const CarouselLayout& layout = dataset.layout();
    for (const InteractionRecord& r : dataset.records()) {
        const double th = theta.at(r.item);
        const double wt = w.at(r.row, r.col);
        const std::size_t cell = static_cast<std::size_t>(layout.cell(r.row, r.col));
        if (r.click) {
            grad.theta[r.item] += 1.0 / th;
            grad.exam[cell] += 1.0 / wt;
        } else {
            const double denom = 1.0 - wt * th;
            grad.theta[r.item] -= wt / denom;
            grad.exam[cell] -= th / denom;
        }
    }
    for (std::size_t u = 0; u < grad.theta.size(); ++u) {
        const auto n = dataset.by_item(static_cast<int>(u)).size();
        if (n > 0) grad.theta[u] /= static_cast<double>(n);
    }
    for (int i = 1; i <= layout.rows; ++i) {
        for (int j = 1; j <= layout.cols; ++j) {
            const auto n = dataset.by_position(i, j).size();
            if (n > 0) grad.exam[layout.cell(i, j)] /= static_cast<double>(n);
        }
    }
    return grad;
}

RowColGradient rcpbm_mean_gradient(const Dataset& dataset, const ItemAttraction& theta,
                                   const RowColFactors& factors) {
    RowColGradient grad;
    grad.theta.assign(theta.theta.size(), 0.0);
    grad.row_w.assign(factors.row_w.size(), 0.0);
    grad.col_w.assign(factors.col_w.size(), 0.0);
    for (const InteractionRecord& r : dataset.records()) {
        const double th = theta.at(r.item);
        const double row_t = factors.row_w[r.row - 1];
        const double col_t = factors.col_w[r.col - 1];
        if (r.click) {
            grad.theta[r.item] += 1.0 / th;
            grad.row_w[r.row - 1] += 1.0 / row_t;
            grad.col_w[r.col - 1] += 1.0 / col_t;
        } else {
            const double denom = 1.0 - row_t * col_t * th;
            grad.theta[r.item] -= row_t * col_t / denom;
            grad.row_w[r.row - 1] -= th * col_t / denom;
            grad.col_w[r.col - 1] -= th * row_t / denom;
        }
    }
    for (std::size_t u = 0; u < grad.theta.size(); ++u) {
        const auto n = dataset.by_item(static_cast<int>(u)).size();
        if (n > 0) grad.theta[u] /= static_cast<double>(n);
    }
    for (std::size_t i = 0; i < grad.row_w.size(); ++i) {
        const auto n = dataset.by_row(static_cast<int>(i) + 1).size();
        if (n > 0) grad.row_w[i] /= static_cast<double>(n);
    }
    for (std::size_t j = 0; j < grad.col_w.size(); ++j) {
        const auto n = dataset.by_col(static_cast<int>(j) + 1).size();
        if (n > 0) grad.col_w[j] /= static_cast<double>(n);
    }
    return grad;
}

GridGradient oepbm_mean_gradient(const Dataset& dataset, const ItemAttraction& theta,
                                 const PositionGrid& w) {
    GridGradient grad;
    grad.theta.assign(theta.theta.size(), 0.0);
    grad.exam.assign(w.w.size(), 0.0);
    const CarouselLayout& layout = dataset.layout();
    for (const InteractionRecord& r : dataset.records()) {
        const double th = theta.at(r.item);
        const double wt = w.at(r.row, r.col);
        const std::size_t cell = static_cast<std::size_t>(layout.cell(r.row, r.col));
        if (r.click) {
            grad.theta[r.item] += 1.0 / th;
            grad.exam[cell] += 1.0 / wt;
        } else if (r.examined) {
            grad.theta[r.item] -= 1.0 / (1.0 - th);
            grad.exam[cell] += 1.0 / wt;
        } else {
            grad.exam[cell] -= 1.0 / (1.0 - wt);
        }
    }
    for (std::size_t u = 0; u < grad.theta.size(); ++u) {
        const auto n = dataset.by_item(static_cast<int>(u)).size();
        if (n > 0) grad.theta[u] /= static_cast<double>(n);
    }
    for (int i = 1; i <= layout.rows; ++i) {
        for (int j = 1; j <= layout.cols; ++j) {
            const auto n = dataset.by_position(i, j).size();
            if (n > 0) grad.exam[layout.cell(i, j)] /= static_cast<double>(n);
        }
    }
    return grad;
}

std::pair<ItemAttraction, PositionGrid> em_step_cpbm(const Dataset& dataset,
                                                     const ItemAttraction& theta,
                                                     const PositionGrid& w) {
    std::vector<double> theta_sum(theta.theta.size(), 0.0);
    std::vector<double> w_sum(w.w.size(), 0.0);
    const CarouselLayout& layout = dataset.layout();
    for (const InteractionRecord& r : dataset.records()) {
        const double th = theta.at(r.item);
        const double wt = w.at(r.row, r.col);
        const std::size_t cell = static_cast<std::size_t>(layout.cell(r.row, r.col));
        if (r.click) {
            theta_sum[r.item] += 1.0;
            w_sum[cell] += 1.0;
        } else {
            const double denom = 1.0 - wt * th;
            theta_sum[r.item] += (1.0 - wt) * th / denom;
            w_sum[cell] += wt * (1.0 - th) / denom;
        }
    }
    ItemAttraction new_theta = theta;
    for (std::size_t u = 0; u < theta_sum.size(); ++u) {
        const auto n = dataset.by_item(static_cast<int>(u)).size();
        if (n > 0) new_theta.theta[u] = clip_prob(theta_sum[u] / static_cast<double>(n));
    }
    PositionGrid new_w = w;
    for (int i = 1; i <= layout.rows; ++i) {
        for (int j = 1; j <= layout.cols; ++j) {
            const auto n = dataset.by_position(i, j).size();
            if (n > 0) {
                new_w.at(i, j) = clip_prob(w_sum[layout.cell(i, j)] / static_cast<double>(n));
            }
        }
    }
    return {std::move(new_theta), std::move(new_w)};
}

std::pair<ItemAttraction, PositionGrid> ga_step_cpbm(const Dataset& dataset,
                                                     const ItemAttraction& theta,
                                                     const PositionGrid& w, double lr) {
    const GridGradient grad = cpbm_mean_gradient(dataset, theta, w);
    ItemAttraction new_theta = theta;
    for (std::size_t u = 0; u < new_theta.theta.size(); ++u) {
        new_theta.theta[u] = clip_prob(new_theta.theta[u] + lr * grad.theta[u]);
    }
    PositionGrid new_w = w;
    for (std::size_t c = 0; c < new_w.w.size(); ++c) {
        new_w.w[c] = clip_prob(new_w.w[c] + lr * grad.exam[c]);
    }
    return {std::move(new_theta), std::move(new_w)};
}

std::pair<ItemAttraction, RowColFactors> ga_step_rcpbm(const Dataset& dataset,
                                                       const ItemAttraction& theta,
                                                       const RowColFactors& factors, double lr) {
    const RowColGradient grad = rcpbm_mean_gradient(dataset, theta, factors);
    ItemAttraction new_theta = theta;
    for (std::size_t u = 0; u < new_theta.theta.size(); ++u) {
        new_theta.theta[u] = clip_prob(new_theta.theta[u] + lr * grad.theta[u]);
    }
    RowColFactors new_factors = factors;
    for (std::size_t i = 0; i < new_factors.row_w.size(); ++i) {
        new_factors.row_w[i] = clip_prob(new_factors.row_w[i] + lr * grad.row_w[i]);
    }
    for (std::size_t j = 0; j < new_factors.col_w.size(); ++j) {
        new_factors.col_w[j] = clip_prob(new_factors.col_w[j] + lr * grad.col_w[j]);
    }
    return {std::move(new_theta), std::move(new_factors)};
}

std::pair<ItemAttraction, PositionGrid> ga_step_oepbm(const Dataset& dataset,
                                                      const ItemAttraction& theta,
                                                      const PositionGrid& w, double lr) {
    const GridGradient grad = oepbm_mean_gradient(dataset, theta, w);
    ItemAttraction new_theta = theta;
    for (std::size_t u = 0; u < new_theta.theta.size(); ++u) {
        new_theta.theta[u] = clip_prob(new_theta.theta[u] + lr * grad.theta[u]);
    }
    PositionGrid new_w = w;
    for (std::size_t c = 0; c < new_w.w.size(); ++c) {
        new_w.w[c] = clip_prob(new_w.w[c] + lr * grad.exam[c]);
    }
    return {std::move(new_theta), std::move(new_w)};
}

FitResult fit_cascade_mle(const Dataset& train, ModelKind kind, const Dataset& validation) {
    if (!is_cascade(kind)) {
        throw std::invalid_argument(std::string(to_string(kind)) + " is not a cascade model");
    }
    if (train.vocab() != validation.vocab()) {
        throw std::invalid_argument("train and validation must share one vocabulary");
    }
    ItemAttraction theta = mle_attraction(train);

    double best_t = 0.0;
    double best_ll = -std::numeric_limits<double>::infinity();
    if (kind == ModelKind::CM) {
        best_t = 0.0;
    } else {
        for (double t : termination_grid()) {
            Model candidate{kind, theta, Termination{t}};
            const double ll = click_log_likelihood(validation, candidate).total;
            if (ll > best_ll) {
                best_ll = ll;
                best_t = t;
            }
        }
    }

    FitResult result;
    result.model.kind = kind;
    result.model.attraction = std::move(theta);
    if (kind == ModelKind::CM) {
        result.model.exam = std::monostate{};
    } else {
        result.model.exam = Termination{best_t};
    }
    result.selected_termination = best_t;
    result.config.model_kind = kind;
    result.config.algorithm = Algorithm::MLE;

    CheckpointReport checkpoint;
    checkpoint.iteration = 0;
    checkpoint.train_click = click_log_likelihood(train, result.model);
    checkpoint.validation_click = click_log_likelihood(validation, result.model);
    result.trace.push_back(std::move(checkpoint));
    return result;
}

namespace {

double report_value(const std::optional<LikelihoodReport>& report) {
    return report ? report->per_session_normalized : -std::numeric_limits<double>::infinity();
}

int best_checkpoint_by(const std::vector<CheckpointReport>& trace, LikelihoodKind objective,
                       bool use_validation) {
    double best = -std::numeric_limits<double>::infinity();
    int best_iter = trace.empty() ? 0 : trace.front().iteration;
    for (const CheckpointReport& cp : trace) {
        const auto& click = use_validation ? cp.validation_click : cp.test_click;
        const auto& oell = use_validation ? cp.validation_oell : cp.test_oell;
        const double value =
            objective == LikelihoodKind::OELL ? report_value(oell) : report_value(click);
        if (value > best) {  // ties keep the lower iteration
            best = value;
            best_iter = cp.iteration;
        }
    }
    return best_iter;
}

}  // namespace

FitResult fit(const FitConfig& config, const Dataset& train, const Dataset& validation,
              const Dataset& test) {
    validate_fit_config(config);
    if (train.vocab() != validation.vocab() || train.vocab() != test.vocab()) {
        throw std::invalid_argument("train/validation/test must share one vocabulary");
    }

    if (config.algorithm == Algorithm::MLE) {
        FitResult result;
        if (config.model_kind == ModelKind::OEPBM) {
            result.model.kind = ModelKind::OEPBM;
            result.model.attraction = mle_attraction(train);
            result.model.exam = mle_examination(train);
            CheckpointReport cp;
            cp.iteration = 0;
            cp.train_click = click_log_likelihood(train, result.model);
            cp.train_oell = observed_examination_log_likelihood(train, result.model);
            cp.validation_click = click_log_likelihood(validation, result.model);
            cp.validation_oell = observed_examination_log_likelihood(validation, result.model);
            result.trace.push_back(std::move(cp));
        } else {
            result = fit_cascade_mle(train, config.model_kind, validation);
        }
        result.config = config;
        CheckpointReport& cp = result.trace.front();
        cp.test_click = click_log_likelihood(test, result.model);
        if (!is_cascade(config.model_kind)) {
            cp.test_oell = observed_examination_log_likelihood(test, result.model);
        }
        result.best_checkpoint = 0;
        result.validation_best_checkpoint = 0;
        return result;
    }

    // EM / GA.
    const CarouselLayout& layout = train.layout();
    ItemAttraction theta = config.fixed_attraction
                               ? mle_attraction(train)
                               : init_attraction(train, config.attraction_init);
    const ItemAttraction ctr = config.fixed_attraction ? theta : ItemAttraction{};
    PositionGrid grid = init_examination(train, layout, config.examination_init);
    RowColFactors factors;
    if (config.model_kind == ModelKind::RCPBM) factors = reduce_to_rowcol(grid);

    struct Snapshot {
        ItemAttraction theta;
        ExaminationParams exam;
    };
    std::vector<Snapshot> snapshots;
    FitResult result;
    result.config = config;

    auto current_exam = [&]() -> ExaminationParams {
        if (config.model_kind == ModelKind::RCPBM) return factors;
        return grid;
    };
    auto evaluate = [&](int iteration) {
        Model current{config.model_kind, theta, current_exam()};
        CheckpointReport cp;
        cp.iteration = iteration;
        cp.train_click = click_log_likelihood(train, current);
        cp.train_oell = observed_examination_log_likelihood(train, current);
        cp.validation_click = click_log_likelihood(validation, current);
        cp.validation_oell = observed_examination_log_likelihood(validation, current);
        cp.test_click = click_log_likelihood(test, current);
        cp.test_oell = observed_examination_log_likelihood(test, current);
        result.trace.push_back(std::move(cp));
        snapshots.push_back({theta, current_exam()});
    };

    std::size_t next_checkpoint = 0;
    for (int m = 0; m <= config.iterations; ++m) {
        if (next_checkpoint < config.eval_checkpoints.size() &&
            config.eval_checkpoints[next_checkpoint] == m) {
            evaluate(m);
            ++next_checkpoint;
        }
        if (m == config.iterations) break;
        switch (config.model_kind) {
            case ModelKind::CPBM:
                if (config.algorithm == Algorithm::EM) {
                    std::tie(theta, grid) = em_step_cpbm(train, theta, grid);
                } else {
                    std::tie(theta, grid) = ga_step_cpbm(train, theta, grid, config.learning_rate);
                }
                break;
            case ModelKind::RCPBM:
                std::tie(theta, factors) = ga_step_rcpbm(train, theta, factors,
                                                         config.learning_rate);
                break;
            case ModelKind::OEPBM:
                std::tie(theta, grid) = ga_step_oepbm(train, theta, grid, config.learning_rate);
                break;
            default:
                throw std::logic_error("unexpected model kind in iterative fit");
        }
        if (config.fixed_attraction) theta = ctr;
    }

    const LikelihoodKind objective = objective_kind(config.model_kind);
    result.best_checkpoint = best_checkpoint_by(result.trace, objective, false);
    result.validation_best_checkpoint = best_checkpoint_by(result.trace, objective, true);
    for (std::size_t k = 0; k < result.trace.size(); ++k) {
        if (result.trace[k].iteration == result.best_checkpoint) {
            result.model = Model{config.model_kind, snapshots[k].theta, snapshots[k].exam};
            break;
        }
    }
    return result;
}

}  // namespace cclick
