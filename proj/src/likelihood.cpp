#include "cclick/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cclick/models.hpp"

namespace cclick {

namespace {

double log_clamped(double x, bool* clamped) {
    if (x < kLogFloor) {
        *clamped = true;
        x = kLogFloor;
    }
    return std::log(x);
}

void finalize(LikelihoodReport& report) {
    report.per_session_normalized =
        report.session_count > 0 ? report.total / static_cast<double>(report.session_count) : 0.0;
}

}  // namespace

std::vector<double> examination_per_record(const Dataset& dataset, const Model& model) {
    validate_model(model, dataset.layout(), static_cast<std::size_t>(dataset.n_items()));
    std::vector<double> out(dataset.size(), 0.0);

    if (!is_cascade(model.kind)) {
        const auto& records = dataset.records();
        for (std::size_t t = 0; t < records.size(); ++t) {
            out[t] = exam_prob(model.kind, model.exam, records[t].row, records[t].col,
                               dataset.layout());
        }
        return out;
    }

    // Cascade kinds need the attraction of every earlier position on the
    // session's screen. Cells the dataset has no record for (items filtered
    // out, positions never logged) fall back to the clipped lower bound.
    const CarouselLayout& layout = dataset.layout();
    const int cells = layout.positions();
    double termination = 0.0;
    if (const auto* term = std::get_if<Termination>(&model.exam)) termination = term->t;

    std::vector<double> theta_grid(static_cast<std::size_t>(cells));
    std::vector<double> prefix_log(static_cast<std::size_t>(cells));
    for (std::int32_t session : dataset.sessions_present()) {
        std::fill(theta_grid.begin(), theta_grid.end(), kProbEps);
        for (int t : dataset.by_session(session)) {
            const InteractionRecord& r = dataset.records()[t];
            theta_grid[layout.cell(r.row, r.col)] = model.attraction.at(r.item);
        }
        double run = 0.0;
        for (int c = 0; c < cells; ++c) {
            prefix_log[c] = run;
            run += theta_grid[c] >= 1.0 ? -std::numeric_limits<double>::infinity()
                                        : std::log1p(-theta_grid[c]);
        }
        for (int t : dataset.by_session(session)) {
            const InteractionRecord& r = dataset.records()[t];
            double w = std::exp(prefix_log[layout.cell(r.row, r.col)]);
            long exponent = 0;
            if (model.kind == ModelKind::TCM) {
                exponent = static_cast<long>(r.row - 1) * layout.cols + (r.col - 1);
            } else if (model.kind == ModelKind::CCM) {
                exponent = r.row + r.col - 2;
            }
            if (exponent > 0) w *= std::pow(1.0 - termination, static_cast<double>(exponent));
            out[t] = w;
        }
    }
    return out;
}

LikelihoodReport click_log_likelihood(const Dataset& dataset, const Model& model) {
    const std::vector<double> exam = examination_per_record(dataset, model);
    LikelihoodReport report;
    report.kind = LikelihoodKind::ClickLL;
    report.record_count = static_cast<long>(dataset.size());
    report.session_count = dataset.session_count();
    const auto& records = dataset.records();
    for (std::size_t t = 0; t < records.size(); ++t) {
        const double p = exam[t] * model.attraction.at(records[t].item);
        report.total += records[t].click ? log_clamped(p, &report.clamped)
                                         : log_clamped(1.0 - p, &report.clamped);
    }
    finalize(report);
    return report;
}

LikelihoodReport observed_examination_log_likelihood(const Dataset& dataset, const Model& model) {
    if (is_cascade(model.kind)) {
        throw std::invalid_argument(
            std::string("the observed-examination likelihood is undefined for ") +
            to_string(model.kind) +
            ": cascade examination probabilities collapse toward zero");
    }
    const std::vector<double> exam = examination_per_record(dataset, model);
    LikelihoodReport report;
    report.kind = LikelihoodKind::OELL;
    report.record_count = static_cast<long>(dataset.size());
    report.session_count = dataset.session_count();
    const auto& records = dataset.records();
    for (std::size_t t = 0; t < records.size(); ++t) {
        const double w = exam[t];
        const double theta = model.attraction.at(records[t].item);
        if (records[t].click) {
            report.total += log_clamped(w * theta, &report.clamped);
        } else if (records[t].examined) {
            report.total += log_clamped(w * (1.0 - theta), &report.clamped);
        } else {
            report.total += log_clamped(1.0 - w, &report.clamped);
        }
    }
    finalize(report);
    return report;
}

std::pair<LikelihoodReport, LikelihoodReport> dummy_baseline(const Dataset& dataset) {
    if (dataset.empty()) throw std::invalid_argument("dummy_baseline: empty dataset");
    LikelihoodReport click;
    click.kind = LikelihoodKind::ClickLL;
    LikelihoodReport joint;
    joint.kind = LikelihoodKind::OELL;
    click.record_count = joint.record_count = static_cast<long>(dataset.size());
    click.session_count = joint.session_count = dataset.session_count();

    const double log_click = std::log(0.01);
    const double log_no_click = std::log(0.99);
    const double log_exam_no_click = std::log(0.01);
    const double log_no_exam = std::log(0.98);
    for (const InteractionRecord& r : dataset.records()) {
        click.total += r.click ? log_click : log_no_click;
        if (r.click) {
            joint.total += log_click;
        } else if (r.examined) {
            joint.total += log_exam_no_click;
        } else {
            joint.total += log_no_exam;
        }
    }
    finalize(click);
    finalize(joint);
    return {click, joint};
}

}  // namespace cclick
