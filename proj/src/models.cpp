#include "cclick/models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cclick {

namespace {

void require_context_size(std::span<const double> prior, int row, int col, int layout_cols) {
    const std::size_t expected =
        static_cast<std::size_t>(row - 1) * layout_cols + static_cast<std::size_t>(col - 1);
    if (prior.size() != expected) {
        throw std::invalid_argument("cascade context for (" + std::to_string(row) + "," +
                                    std::to_string(col) + ") needs " + std::to_string(expected) +
                                    " prior attractions, got " + std::to_string(prior.size()));
    }
}

}  // namespace

double exam_prob_cm(std::span<const double> prior_attractions) {
    // Log-space sum; a long cascade may underflow to exactly 0, which callers
    // treat via the log-argument clamp.
    double log_prod = 0.0;
    for (double theta : prior_attractions) {
        if (theta >= 1.0) return 0.0;
        log_prod += std::log1p(-theta);
    }
    return std::exp(log_prod);
}

double exam_prob_tcm(std::span<const double> prior_attractions, double t, int row, int col,
                     const CarouselLayout& layout) {
    layout.require_in_range(row, col);
    require_context_size(prior_attractions, row, col, layout.cols);
    const long exponent = static_cast<long>(row - 1) * layout.cols + (col - 1);
    double p = exam_prob_cm(prior_attractions);
    if (exponent > 0) p *= std::pow(1.0 - t, static_cast<double>(exponent));
    return p;
}

double exam_prob_ccm(std::span<const double> prior_attractions, double t, int row, int col) {
    const long exponent = row + col - 2;
    double p = exam_prob_cm(prior_attractions);
    if (exponent > 0) p *= std::pow(1.0 - t, static_cast<double>(exponent));
    return p;
}

double exam_prob_position(const PositionGrid& grid, int row, int col) {
    if (row < 1 || row > grid.rows || col < 1 || col > grid.cols) {
        throw std::out_of_range("position (" + std::to_string(row) + "," + std::to_string(col) +
                                ") outside the examination grid");
    }
    return grid.at(row, col);
}

double exam_prob_rowcol(const RowColFactors& factors, int row, int col) {
    if (row < 1 || static_cast<std::size_t>(row) > factors.row_w.size() || col < 1 ||
        static_cast<std::size_t>(col) > factors.col_w.size()) {
        throw std::out_of_range("position (" + std::to_string(row) + "," + std::to_string(col) +
                                ") outside the row/col factors");
    }
    return factors.row_w[row - 1] * factors.col_w[col - 1];
}

double exam_prob(ModelKind kind, const ExaminationParams& params, int row, int col,
                 const CarouselLayout& layout, const SessionContext* ctx) {
    if (is_cascade(kind)) {
        if (!ctx) {
            throw std::invalid_argument(std::string(to_string(kind)) +
                                        " requires a session context");
        }
        switch (kind) {
            case ModelKind::CM:
                require_context_size(ctx->prior_attractions, row, col, layout.cols);
                return exam_prob_cm(ctx->prior_attractions);
            case ModelKind::TCM: {
                const auto* term = std::get_if<Termination>(&params);
                if (!term) throw std::invalid_argument("TCM requires a termination parameter");
                return exam_prob_tcm(ctx->prior_attractions, term->t, row, col, layout);
            }
            case ModelKind::CCM: {
                const auto* term = std::get_if<Termination>(&params);
                if (!term) throw std::invalid_argument("CCM requires a termination parameter");
                require_context_size(ctx->prior_attractions, row, col, layout.cols);
                return exam_prob_ccm(ctx->prior_attractions, term->t, row, col);
            }
            default: break;
        }
    }
    if (ctx) {
        throw std::invalid_argument(std::string(to_string(kind)) +
                                    " does not take a session context");
    }
    switch (kind) {
        case ModelKind::CPBM:
        case ModelKind::OEPBM: {
            const auto* grid = std::get_if<PositionGrid>(&params);
            if (!grid) {
                throw std::invalid_argument(std::string(to_string(kind)) +
                                            " requires a position grid");
            }
            return exam_prob_position(*grid, row, col);
        }
        case ModelKind::RCPBM: {
            const auto* rc = std::get_if<RowColFactors>(&params);
            if (!rc) throw std::invalid_argument("RCPBM requires row/col factors");
            return exam_prob_rowcol(*rc, row, col);
        }
        default: break;
    }
    throw std::invalid_argument("unsupported model kind");
}

double click_prob(ModelKind kind, const ExaminationParams& params, double theta_u, int row,
                  int col, const CarouselLayout& layout, const SessionContext* ctx) {
    return exam_prob(kind, params, row, col, layout, ctx) * theta_u;
}

}  // namespace cclick
