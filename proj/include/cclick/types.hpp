#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace cclick {

// Learned parameters are kept inside [kProbEps, 1 - kProbEps] after every
// optimizer step; raw probabilities produced by model composition may reach 0.
constexpr double kProbEps = 1e-6;

// Floor applied to log arguments when a composed probability collapses to 0.
constexpr double kLogFloor = 1e-12;

double clip_prob(double p);  // throws std::domain_error on non-finite input

struct CarouselLayout {
    int rows = 1;
    int cols = 1;
    int visible_set_size = 1;
    int swipe_sets = 1;

    // Derives swipe_sets from cols / visible_set_size; throws if the grid
    // does not divide evenly or any dimension is < 1.
    static CarouselLayout make(int rows, int cols, int visible_set_size);

    // 10 genre rows x 15 item columns, 5 visible per swipe state.
    static CarouselLayout reference() { return make(10, 15, 5); }

    int positions() const { return rows * cols; }
    int cell(int row, int col) const { return (row - 1) * cols + (col - 1); }
    bool in_range(int row, int col) const {
        return row >= 1 && row <= rows && col >= 1 && col <= cols;
    }
    void require_in_range(int row, int col) const;

    friend bool operator==(const CarouselLayout&, const CarouselLayout&) = default;
};

// One (session, item, position, click, examined, impressed) tuple; session and
// item are dense indices into the owning dataset's vocabulary.
struct InteractionRecord {
    std::int32_t session = 0;
    std::int32_t item = 0;
    std::int16_t row = 1;  // 1-based
    std::int16_t col = 1;  // 1-based
    bool click = false;
    bool examined = false;
    bool impressed = false;
};

enum class ModelKind { CM, TCM, CCM, CPBM, RCPBM, OEPBM };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);
bool is_cascade(ModelKind kind);

struct ItemAttraction {
    std::vector<double> theta;  // indexed by dense item id

    double at(int item) const { return theta.at(static_cast<std::size_t>(item)); }
};

struct PositionGrid {
    int rows = 0;
    int cols = 0;
    std::vector<double> w;  // row-major

    static PositionGrid filled(const CarouselLayout& layout, double value);

    double at(int row, int col) const { return w[idx(row, col)]; }
    double& at(int row, int col) { return w[idx(row, col)]; }
    std::size_t idx(int row, int col) const {
        return static_cast<std::size_t>(row - 1) * cols + (col - 1);
    }
};

struct RowColFactors {
    std::vector<double> row_w;
    std::vector<double> col_w;
};

struct Termination {
    double t = 0.0;
};

// Exactly one variant is active per fitted model; the CM carries no
// examination parameter at all.
using ExaminationParams = std::variant<std::monostate, PositionGrid, RowColFactors, Termination>;

struct Model {
    ModelKind kind = ModelKind::CPBM;
    ItemAttraction attraction;
    ExaminationParams exam;
};

// Checks the kind <-> parameter-variant binding, grid dimensions and the
// attraction table size; throws std::invalid_argument on mismatch.
void validate_model(const Model& model, const CarouselLayout& layout, std::size_t n_items);

}  // namespace cclick
