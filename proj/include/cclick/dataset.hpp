#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cclick/types.hpp"

namespace cclick {

// Shared session/item id tables. Splits of one dataset keep the parent vocab
// so that dense indices (and therefore fitted parameter tables) stay aligned
// across train/validation/test.
struct Vocab {
    std::vector<std::string> sessions;
    std::vector<std::string> items;
    std::unordered_map<std::string, std::int32_t> session_index;
    std::unordered_map<std::string, std::int32_t> item_index;

    std::int32_t intern_session(const std::string& name);
    std::int32_t intern_item(const std::string& name);
    std::optional<std::int32_t> find_session(const std::string& name) const;
    std::optional<std::int32_t> find_item(const std::string& name) const;
};

using VocabPtr = std::shared_ptr<const Vocab>;

// A record before interning, as read from a file or built in code.
struct RawRow {
    std::string session;
    std::string item;
    int row = 1;
    int col = 1;
    int click = 0;
    int examined = 0;
    int impressed = 1;
};

// Immutable record collection with cached index sets. Construction validates
// position ranges and the click => examined / click => impressed invariants
// (loaders drop violating rows before construction).
class Dataset {
public:
    Dataset(CarouselLayout layout, VocabPtr vocab, std::vector<InteractionRecord> records);

    const CarouselLayout& layout() const { return layout_; }
    const VocabPtr& vocab() const { return vocab_; }
    const std::vector<InteractionRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    int n_items() const { return static_cast<int>(vocab_->items.size()); }
    int n_sessions() const { return static_cast<int>(vocab_->sessions.size()); }

    // Distinct sessions / items that actually occur in this dataset.
    long session_count() const { return static_cast<long>(sessions_present_.size()); }
    long item_count() const { return items_present_; }
    const std::vector<std::int32_t>& sessions_present() const { return sessions_present_; }

    const std::vector<int>& by_item(int item) const;
    const std::vector<int>& by_position(int row, int col) const;
    const std::vector<int>& by_row(int row) const;
    const std::vector<int>& by_col(int col) const;
    const std::vector<int>& by_session(int session) const;

    Dataset with_records(std::vector<InteractionRecord> records) const {
        return Dataset(layout_, vocab_, std::move(records));
    }

private:
    CarouselLayout layout_;
    VocabPtr vocab_;
    std::vector<InteractionRecord> records_;
    std::vector<std::vector<int>> by_item_;
    std::vector<std::vector<int>> by_position_;
    std::vector<std::vector<int>> by_row_;
    std::vector<std::vector<int>> by_col_;
    std::vector<std::vector<int>> by_session_;
    std::vector<std::int32_t> sessions_present_;
    long items_present_ = 0;
};

// Convenience constructor used by tests, bindings and the simulator.
Dataset make_dataset(const CarouselLayout& layout, const std::vector<RawRow>& rows);

// Concatenates two datasets sharing one vocab (session sets must be disjoint).
Dataset concat(const Dataset& a, const Dataset& b);

// Index-set lookups; the by-name form throws on unknown item names, which is
// distinct from a known item that merely has no records in this dataset.
const std::vector<int>& index_by_item(const Dataset& dataset, const std::string& item);
const std::vector<int>& index_by_item(const Dataset& dataset, int item);
const std::vector<int>& index_by_position(const Dataset& dataset, int row, int col);

}  // namespace cclick
