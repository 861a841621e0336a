#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>

#include "cclick/dataset.hpp"
#include "cclick/optimize.hpp"
#include "cclick/types.hpp"

namespace cclick {

struct LoadReport {
    long rows_parsed = 0;
    long dropped_click_without_examination = 0;
    long dropped_click_without_impression = 0;
};

// Reads the delimiter-separated interaction schema
//   session_id,item_id,row,col,click,examined,impressed[,split]
// (1-based positions, {0,1} flags). Rows violating click => examined or
// click => impressed are dropped and counted instead of repaired.
Dataset load_interactions(const std::filesystem::path& path, const CarouselLayout& layout,
                          LoadReport* report = nullptr);
Dataset load_interactions(std::istream& in, const CarouselLayout& layout,
                          LoadReport* report = nullptr, const std::string& source = "<stream>");

// Writes the same schema; a non-empty split label appends the `split` column.
void write_interactions(const std::filesystem::path& path, const Dataset& dataset,
                        const std::string& split_label = "");

struct ImpressionFilterReport {
    long records_in = 0;
    long records_out = 0;
    long negatives_in = 0;
    long negatives_out = 0;
};

// Keeps only impressed records; clicked records always survive.
Dataset filter_impressions(const Dataset& dataset, ImpressionFilterReport* report = nullptr);

struct SessionFilterReport {
    long sessions_in = 0;
    long sessions_without_click = 0;
    long sessions_without_fixation = 0;
    long never_clicked_items = 0;
    long records_of_never_clicked_items = 0;
    long sessions_out = 0;
    long records_out = 0;
};

// Drops fixation-less sessions (no examined record; this is where sessions
// whose click row was removed at load end up), then click-less sessions, then
// every record of items that are never clicked in what remains.
Dataset filter_sessions(const Dataset& dataset, SessionFilterReport* report = nullptr);

struct SplitSpec {
    int test_click_threshold = 5;
    int validation_click_threshold = 4;
    double fraction = 0.5;  // of an item's click sessions, rounded down
    std::uint64_t seed = 0;
};

// Moves floor(fraction * clicks) click-sessions of every item with at least
// `test_click_threshold` clicks to the second part. Draws are redrawn from
// the seed until every position that has a click keeps one in the first part.
std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset, const SplitSpec& spec);

// Same mechanism with the validation threshold, applied to the train set.
std::pair<Dataset, Dataset> train_validation_split(const Dataset& train, const SplitSpec& spec);

ItemAttraction init_attraction(const Dataset& train, AttractionInit choice);

// Gaze: per-position examination frequency (the examination MLE).
// Carousel: 0.95^(row-1), times 0.7 once for swiped columns.
PositionGrid init_examination(const Dataset& train, const CarouselLayout& layout,
                              ExaminationInit choice);

PositionGrid carousel_prior(const CarouselLayout& layout);

// Row/column factors from a grid: row means and column means.
RowColFactors reduce_to_rowcol(const PositionGrid& grid);

struct SplitDatasets {
    Dataset train;
    Dataset validation;
    Dataset test;
};

// Loads three split files through one shared vocabulary so that fitted
// parameter tables stay aligned across them.
SplitDatasets load_split_datasets(const std::filesystem::path& train,
                                  const std::filesystem::path& validation,
                                  const std::filesystem::path& test,
                                  const CarouselLayout& layout);

struct SplitFiles {
    std::filesystem::path train_full;
    std::filesystem::path train;
    std::filesystem::path validation;
    std::filesystem::path test;
    std::filesystem::path manifest;
};

// Full pipeline: load -> impression filter -> session filter -> 90/10 test
// split -> 82/8 validation split; writes the four datasets plus a JSON
// manifest of seed, thresholds and per-stage counts.
SplitFiles run_split_pipeline(const std::filesystem::path& raw, const CarouselLayout& layout,
                              const SplitSpec& spec, const std::filesystem::path& out_dir);

}  // namespace cclick
