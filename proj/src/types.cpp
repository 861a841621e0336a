#include "cclick/types.hpp"

#include <cmath>
#include <stdexcept>

namespace cclick {

double clip_prob(double p) {
    if (!std::isfinite(p)) {
        throw std::domain_error("clip_prob: non-finite probability value");
    }
    if (p < kProbEps) return kProbEps;
    if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
    return p;
}

CarouselLayout CarouselLayout::make(int rows, int cols, int visible_set_size) {
    if (rows < 1 || cols < 1 || visible_set_size < 1) {
        throw std::invalid_argument("CarouselLayout: dimensions must be >= 1");
    }
    if (cols % visible_set_size != 0) {
        throw std::invalid_argument("CarouselLayout: cols must be a multiple of visible_set_size");
    }
    CarouselLayout layout;
    layout.rows = rows;
    layout.cols = cols;
    layout.visible_set_size = visible_set_size;
    layout.swipe_sets = cols / visible_set_size;
    return layout;
}

void CarouselLayout::require_in_range(int row, int col) const {
    if (!in_range(row, col)) {
        throw std::out_of_range("position (" + std::to_string(row) + "," + std::to_string(col) +
                                ") outside " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " grid");
    }
}

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::CM: return "CM";
        case ModelKind::TCM: return "TCM";
        case ModelKind::CCM: return "CCM";
        case ModelKind::CPBM: return "CPBM";
        case ModelKind::RCPBM: return "RCPBM";
        case ModelKind::OEPBM: return "OEPBM";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (s == "CM") return ModelKind::CM;
    if (s == "TCM") return ModelKind::TCM;
    if (s == "CCM") return ModelKind::CCM;
    if (s == "CPBM") return ModelKind::CPBM;
    if (s == "RCPBM") return ModelKind::RCPBM;
    if (s == "OEPBM") return ModelKind::OEPBM;
    throw std::invalid_argument("unknown model kind: " + name);
}

bool is_cascade(ModelKind kind) {
    return kind == ModelKind::CM || kind == ModelKind::TCM || kind == ModelKind::CCM;
}

PositionGrid PositionGrid::filled(const CarouselLayout& layout, double value) {
    PositionGrid grid;
    grid.rows = layout.rows;
    grid.cols = layout.cols;
    grid.w.assign(static_cast<std::size_t>(layout.rows) * layout.cols, value);
    return grid;
}

void validate_model(const Model& model, const CarouselLayout& layout, std::size_t n_items) {
    if (model.attraction.theta.size() != n_items) {
        throw std::invalid_argument("model attraction table has " +
                                    std::to_string(model.attraction.theta.size()) +
                                    " entries, dataset has " + std::to_string(n_items) + " items");
    }
    const char* expected = nullptr;
    switch (model.kind) {
        case ModelKind::CM:
            if (!std::holds_alternative<std::monostate>(model.exam)) expected = "no parameter";
            break;
        case ModelKind::TCM:
        case ModelKind::CCM:
            if (!std::holds_alternative<Termination>(model.exam)) expected = "a termination scalar";
            break;
        case ModelKind::CPBM:
        case ModelKind::OEPBM:
            if (!std::holds_alternative<PositionGrid>(model.exam)) expected = "a position grid";
            break;
        case ModelKind::RCPBM:
            if (!std::holds_alternative<RowColFactors>(model.exam)) expected = "row/col factors";
            break;
    }
    if (expected) {
        throw std::invalid_argument(std::string("model kind ") + to_string(model.kind) +
                                    " requires " + expected);
    }
    if (const auto* grid = std::get_if<PositionGrid>(&model.exam)) {
        if (grid->rows != layout.rows || grid->cols != layout.cols ||
            grid->w.size() != static_cast<std::size_t>(layout.positions())) {
            throw std::invalid_argument("position grid does not match the layout");
        }
    } else if (const auto* rc = std::get_if<RowColFactors>(&model.exam)) {
        if (rc->row_w.size() != static_cast<std::size_t>(layout.rows) ||
            rc->col_w.size() != static_cast<std::size_t>(layout.cols)) {
            throw std::invalid_argument("row/col factors do not match the layout");
        }
    }
}

}  // namespace cclick
