#include "cclick/dataset.hpp"

#include <algorithm>
#include <stdexcept>

namespace cclick {

std::int32_t Vocab::intern_session(const std::string& name) {
    auto it = session_index.find(name);
    if (it != session_index.end()) return it->second;
    const auto id = static_cast<std::int32_t>(sessions.size());
    sessions.push_back(name);
    session_index.emplace(name, id);
    return id;
}

std::int32_t Vocab::intern_item(const std::string& name) {
    auto it = item_index.find(name);
    if (it != item_index.end()) return it->second;
    const auto id = static_cast<std::int32_t>(items.size());
    items.push_back(name);
    item_index.emplace(name, id);
    return id;
}

std::optional<std::int32_t> Vocab::find_session(const std::string& name) const {
    auto it = session_index.find(name);
    if (it == session_index.end()) return std::nullopt;
    return it->second;
}

std::optional<std::int32_t> Vocab::find_item(const std::string& name) const {
    auto it = item_index.find(name);
    if (it == item_index.end()) return std::nullopt;
    return it->second;
}

Dataset::Dataset(CarouselLayout layout, VocabPtr vocab, std::vector<InteractionRecord> records)
    : layout_(layout), vocab_(std::move(vocab)), records_(std::move(records)) {
    if (!vocab_) throw std::invalid_argument("Dataset: null vocab");
    const int n_items = static_cast<int>(vocab_->items.size());
    const int n_sessions = static_cast<int>(vocab_->sessions.size());
    by_item_.resize(n_items);
    by_position_.resize(static_cast<std::size_t>(layout_.positions()));
    by_row_.resize(static_cast<std::size_t>(layout_.rows));
    by_col_.resize(static_cast<std::size_t>(layout_.cols));
    by_session_.resize(n_sessions);

    for (std::size_t t = 0; t < records_.size(); ++t) {
        const InteractionRecord& r = records_[t];
        layout_.require_in_range(r.row, r.col);
        if (r.item < 0 || r.item >= n_items || r.session < 0 || r.session >= n_sessions) {
            throw std::invalid_argument("Dataset: record " + std::to_string(t) +
                                        " references an id outside the vocabulary");
        }
        if (r.click && !r.examined) {
            throw std::invalid_argument("Dataset: record " + std::to_string(t) +
                                        " has a click without examination");
        }
        if (r.click && !r.impressed) {
            throw std::invalid_argument("Dataset: record " + std::to_string(t) +
                                        " has a click without impression");
        }
        const int idx = static_cast<int>(t);
        by_item_[r.item].push_back(idx);
        by_position_[layout_.cell(r.row, r.col)].push_back(idx);
        by_row_[r.row - 1].push_back(idx);
        by_col_[r.col - 1].push_back(idx);
        by_session_[r.session].push_back(idx);
    }

    for (std::int32_t s = 0; s < n_sessions; ++s) {
        if (!by_session_[s].empty()) sessions_present_.push_back(s);
    }
    for (const auto& v : by_item_) {
        if (!v.empty()) ++items_present_;
    }
}

const std::vector<int>& Dataset::by_item(int item) const {
    if (item < 0 || item >= n_items()) {
        throw std::out_of_range("unknown item id " + std::to_string(item));
    }
    return by_item_[item];
}

const std::vector<int>& Dataset::by_position(int row, int col) const {
    layout_.require_in_range(row, col);
    return by_position_[layout_.cell(row, col)];
}

const std::vector<int>& Dataset::by_row(int row) const {
    if (row < 1 || row > layout_.rows) throw std::out_of_range("row out of range");
    return by_row_[row - 1];
}

const std::vector<int>& Dataset::by_col(int col) const {
    if (col < 1 || col > layout_.cols) throw std::out_of_range("col out of range");
    return by_col_[col - 1];
}

const std::vector<int>& Dataset::by_session(int session) const {
    if (session < 0 || session >= n_sessions()) throw std::out_of_range("session out of range");
    return by_session_[session];
}

Dataset make_dataset(const CarouselLayout& layout, const std::vector<RawRow>& rows) {
    auto vocab = std::make_shared<Vocab>();
    std::vector<InteractionRecord> records;
    records.reserve(rows.size());
    for (const RawRow& row : rows) {
        InteractionRecord r;
        r.session = vocab->intern_session(row.session);
        r.item = vocab->intern_item(row.item);
        r.row = static_cast<std::int16_t>(row.row);
        r.col = static_cast<std::int16_t>(row.col);
        r.click = row.click != 0;
        r.examined = row.examined != 0;
        r.impressed = row.impressed != 0;
        records.push_back(r);
    }
    return Dataset(layout, std::move(vocab), std::move(records));
}

Dataset concat(const Dataset& a, const Dataset& b) {
    if (a.vocab() != b.vocab()) {
        throw std::invalid_argument("concat: datasets must share one vocabulary");
    }
    if (!(a.layout() == b.layout())) {
        throw std::invalid_argument("concat: datasets must share one layout");
    }
    for (std::int32_t s : b.sessions_present()) {
        if (!a.by_session(s).empty()) {
            throw std::invalid_argument("concat: session '" + a.vocab()->sessions[s] +
                                        "' appears in both datasets");
        }
    }
    std::vector<InteractionRecord> records = a.records();
    records.insert(records.end(), b.records().begin(), b.records().end());
    return Dataset(a.layout(), a.vocab(), std::move(records));
}

const std::vector<int>& index_by_item(const Dataset& dataset, const std::string& item) {
    const auto id = dataset.vocab()->find_item(item);
    if (!id) throw std::out_of_range("unknown item: " + item);
    return dataset.by_item(*id);
}

const std::vector<int>& index_by_item(const Dataset& dataset, int item) {
    return dataset.by_item(item);
}

const std::vector<int>& index_by_position(const Dataset& dataset, int row, int col) {
    return dataset.by_position(row, col);
}

}  // namespace cclick
