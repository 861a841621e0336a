#include "cclick/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cclick/rng.hpp"

namespace cclick {

namespace {

constexpr const char* kHeader = "session_id,item_id,row,col,click,examined,impressed";

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line, char delim = ',') {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, delim)) fields.push_back(trim(field));
    if (!line.empty() && line.back() == delim) fields.push_back("");
    return fields;
}

int parse_int(const std::string& value, const std::string& what, long line_no) {
    try {
        std::size_t pos = 0;
        const int parsed = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": cannot parse " + what +
                                 " from '" + value + "'");
    }
}

int parse_flag(const std::string& value, const std::string& what, long line_no) {
    const int v = parse_int(value, what, line_no);
    if (v != 0 && v != 1) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": " + what +
                                 " must be 0 or 1, got " + value);
    }
    return v;
}

}  // namespace

Dataset load_interactions(std::istream& in, const CarouselLayout& layout, LoadReport* report,
                          const std::string& source) {
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    auto vocab = std::make_shared<Vocab>();
    std::vector<InteractionRecord> records;
    LoadReport local;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        if (!header_seen) {
            const auto fields = split_fields(trimmed);
            std::string joined;
            for (std::size_t k = 0; k < std::min<std::size_t>(fields.size(), 7); ++k) {
                if (k) joined += ',';
                joined += fields[k];
            }
            if (joined != kHeader || fields.size() > 8 ||
                (fields.size() == 8 && fields[7] != "split")) {
                throw std::runtime_error(source + ": unexpected header '" + trimmed + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_fields(trimmed);
        if (fields.size() != 7 && fields.size() != 8) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                                     std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[1].empty()) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": empty session or item id");
        }
        const int row = parse_int(fields[2], "row", line_no);
        const int col = parse_int(fields[3], "col", line_no);
        if (!layout.in_range(row, col)) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": position (" +
                                     std::to_string(row) + "," + std::to_string(col) +
                                     ") outside the " + std::to_string(layout.rows) + "x" +
                                     std::to_string(layout.cols) + " layout");
        }
        const int click = parse_flag(fields[4], "click", line_no);
        const int examined = parse_flag(fields[5], "examined", line_no);
        const int impressed = parse_flag(fields[6], "impressed", line_no);
        ++local.rows_parsed;
        if (click && !examined) {
            ++local.dropped_click_without_examination;
            continue;
        }
        if (click && !impressed) {
            ++local.dropped_click_without_impression;
            continue;
        }
        InteractionRecord r;
        r.session = vocab->intern_session(fields[0]);
        r.item = vocab->intern_item(fields[1]);
        r.row = static_cast<std::int16_t>(row);
        r.col = static_cast<std::int16_t>(col);
        r.click = click != 0;
        r.examined = examined != 0;
        r.impressed = impressed != 0;
        records.push_back(r);
    }
    if (!header_seen) throw std::runtime_error(source + ": empty file");
    if (records.empty()) throw std::runtime_error(source + ": no records");
    if (report) *report = local;
    return Dataset(layout, std::move(vocab), std::move(records));
}

Dataset load_interactions(const std::filesystem::path& path, const CarouselLayout& layout,
                          LoadReport* report) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_interactions(in, layout, report, path.string());
}

void write_interactions(const std::filesystem::path& path, const Dataset& dataset,
                        const std::string& split_label) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << kHeader;
    if (!split_label.empty()) out << ",split";
    out << '\n';
    const Vocab& vocab = *dataset.vocab();
    for (const InteractionRecord& r : dataset.records()) {
        out << vocab.sessions[r.session] << ',' << vocab.items[r.item] << ',' << r.row << ','
            << r.col << ',' << (r.click ? 1 : 0) << ',' << (r.examined ? 1 : 0) << ','
            << (r.impressed ? 1 : 0);
        if (!split_label.empty()) out << ',' << split_label;
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset filter_impressions(const Dataset& dataset, ImpressionFilterReport* report) {
    ImpressionFilterReport local;
    local.records_in = static_cast<long>(dataset.size());
    std::vector<InteractionRecord> kept;
    kept.reserve(dataset.size());
    for (const InteractionRecord& r : dataset.records()) {
        if (!r.click) ++local.negatives_in;
        if (r.impressed) {
            kept.push_back(r);
            if (!r.click) ++local.negatives_out;
        }
    }
    local.records_out = static_cast<long>(kept.size());
    if (report) *report = local;
    return dataset.with_records(std::move(kept));
}

Dataset filter_sessions(const Dataset& dataset, SessionFilterReport* report) {
    SessionFilterReport local;
    local.sessions_in = dataset.session_count();

    // Fixation-less sessions are dropped first: a session whose click row was
    // removed at load (click without examination) has no examined record left
    // and belongs to this stage, not the click-less one.
    std::vector<char> keep_session(static_cast<std::size_t>(dataset.n_sessions()), 0);
    for (std::int32_t s : dataset.sessions_present()) {
        bool has_click = false;
        bool has_fixation = false;
        for (int t : dataset.by_session(s)) {
            has_click = has_click || dataset.records()[t].click;
            has_fixation = has_fixation || dataset.records()[t].examined;
        }
        if (!has_fixation) {
            ++local.sessions_without_fixation;
        } else if (!has_click) {
            ++local.sessions_without_click;
        } else {
            keep_session[s] = 1;
        }
    }

    std::vector<char> item_clicked(static_cast<std::size_t>(dataset.n_items()), 0);
    std::vector<char> item_present(static_cast<std::size_t>(dataset.n_items()), 0);
    for (const InteractionRecord& r : dataset.records()) {
        if (!keep_session[r.session]) continue;
        item_present[r.item] = 1;
        if (r.click) item_clicked[r.item] = 1;
    }
    for (int u = 0; u < dataset.n_items(); ++u) {
        if (item_present[u] && !item_clicked[u]) ++local.never_clicked_items;
    }

    std::vector<InteractionRecord> kept;
    kept.reserve(dataset.size());
    for (const InteractionRecord& r : dataset.records()) {
        if (!keep_session[r.session]) continue;
        if (!item_clicked[r.item]) {
            ++local.records_of_never_clicked_items;
            continue;
        }
        kept.push_back(r);
    }
    if (kept.empty()) throw std::runtime_error("no sessions survived filtering");
    Dataset out = dataset.with_records(std::move(kept));
    local.sessions_out = out.session_count();
    local.records_out = static_cast<long>(out.size());
    if (report) *report = local;
    return out;
}

namespace {

// Click sessions per item, in first-occurrence order.
std::vector<std::vector<std::int32_t>> click_sessions_by_item(const Dataset& dataset) {
    std::vector<std::vector<std::int32_t>> sessions(static_cast<std::size_t>(dataset.n_items()));
    for (const InteractionRecord& r : dataset.records()) {
        if (!r.click) continue;
        auto& list = sessions[r.item];
        if (std::find(list.begin(), list.end(), r.session) == list.end()) {
            list.push_back(r.session);
        }
    }
    return sessions;
}

std::pair<Dataset, Dataset> split_sessions(const Dataset& dataset, int click_threshold,
                                           double fraction, std::uint64_t seed,
                                           std::uint64_t salt) {
    if (click_threshold < 2) throw std::invalid_argument("click threshold must be >= 2");
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("split fraction must be in (0, 1)");
    }
    const auto item_sessions = click_sessions_by_item(dataset);
    const CarouselLayout& layout = dataset.layout();

    std::vector<char> position_clicked(static_cast<std::size_t>(layout.positions()), 0);
    for (const InteractionRecord& r : dataset.records()) {
        if (r.click) position_clicked[layout.cell(r.row, r.col)] = 1;
    }

    const Rng base = Rng(seed).fork(salt);
    constexpr int kMaxAttempts = 1000;
    std::vector<char> in_second(static_cast<std::size_t>(dataset.n_sessions()), 0);
    std::vector<char> position_ok;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Rng rng = base.fork(static_cast<std::uint64_t>(attempt));
        std::fill(in_second.begin(), in_second.end(), 0);
        bool any_selected = false;
        for (std::size_t u = 0; u < item_sessions.size(); ++u) {
            const auto& sessions = item_sessions[u];
            if (static_cast<int>(sessions.size()) < click_threshold) continue;
            const auto want = static_cast<std::size_t>(
                std::floor(fraction * static_cast<double>(sessions.size())));
            if (want == 0) continue;
            std::vector<std::int32_t> pool = sessions;
            rng.shuffle(pool);
            std::size_t taken = 0;
            for (std::int32_t s : pool) {
                if (taken == want) break;
                if (!in_second[s]) {
                    in_second[s] = 1;
                    any_selected = true;
                }
                ++taken;  // already-moved sessions still count toward the item's share
            }
        }
        if (!any_selected) {
            throw std::runtime_error("no item reaches the click threshold of " +
                                     std::to_string(click_threshold) + "; split would be empty");
        }

        // Every position that has a click must keep one in the first part.
        position_ok.assign(static_cast<std::size_t>(layout.positions()), 0);
        for (const InteractionRecord& r : dataset.records()) {
            if (r.click && !in_second[r.session]) position_ok[layout.cell(r.row, r.col)] = 1;
        }
        bool ok = true;
        for (int c = 0; c < layout.positions(); ++c) {
            if (position_clicked[c] && !position_ok[c]) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        std::vector<InteractionRecord> first, second;
        for (const InteractionRecord& r : dataset.records()) {
            (in_second[r.session] ? second : first).push_back(r);
        }
        return {dataset.with_records(std::move(first)), dataset.with_records(std::move(second))};
    }

    std::string blocking;
    for (int i = 1; i <= layout.rows; ++i) {
        for (int j = 1; j <= layout.cols; ++j) {
            const int c = layout.cell(i, j);
            if (position_clicked[c] && !position_ok[c]) {
                if (!blocking.empty()) blocking += ", ";
                blocking += "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            }
        }
    }
    throw std::runtime_error("split constraints unsatisfiable; blocking positions: " + blocking);
}

}  // namespace

std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset, const SplitSpec& spec) {
    return split_sessions(dataset, spec.test_click_threshold, spec.fraction, spec.seed, 1);
}

std::pair<Dataset, Dataset> train_validation_split(const Dataset& train, const SplitSpec& spec) {
    return split_sessions(train, spec.validation_click_threshold, spec.fraction, spec.seed, 2);
}

ItemAttraction init_attraction(const Dataset& train, AttractionInit choice) {
    if (choice == AttractionInit::Uniform) {
        ItemAttraction attraction;
        attraction.theta.assign(static_cast<std::size_t>(train.n_items()), 0.5);
        return attraction;
    }
    return mle_attraction(train);
}

PositionGrid carousel_prior(const CarouselLayout& layout) {
    PositionGrid grid = PositionGrid::filled(layout, 0.0);
    for (int i = 1; i <= layout.rows; ++i) {
        const double row_factor = std::pow(0.95, i - 1);
        for (int j = 1; j <= layout.cols; ++j) {
            const double swipe_factor = j > layout.visible_set_size ? 0.7 : 1.0;
            grid.at(i, j) = clip_prob(row_factor * swipe_factor);
        }
    }
    return grid;
}

PositionGrid init_examination(const Dataset& train, const CarouselLayout& layout,
                              ExaminationInit choice) {
    if (choice == ExaminationInit::Carousel) return carousel_prior(layout);
    return mle_examination(train);
}

RowColFactors reduce_to_rowcol(const PositionGrid& grid) {
    RowColFactors factors;
    factors.row_w.assign(static_cast<std::size_t>(grid.rows), 0.0);
    factors.col_w.assign(static_cast<std::size_t>(grid.cols), 0.0);
    for (int i = 1; i <= grid.rows; ++i) {
        double sum = 0.0;
        for (int j = 1; j <= grid.cols; ++j) sum += grid.at(i, j);
        factors.row_w[i - 1] = sum / grid.cols;
    }
    for (int j = 1; j <= grid.cols; ++j) {
        double sum = 0.0;
        for (int i = 1; i <= grid.rows; ++i) sum += grid.at(i, j);
        factors.col_w[j - 1] = sum / grid.rows;
    }
    return factors;
}

SplitDatasets load_split_datasets(const std::filesystem::path& train,
                                  const std::filesystem::path& validation,
                                  const std::filesystem::path& test,
                                  const CarouselLayout& layout) {
    const std::filesystem::path paths[] = {train, validation, test};
    std::vector<Dataset> parts;
    for (const auto& path : paths) parts.push_back(load_interactions(path, layout));
    auto vocab = std::make_shared<Vocab>();
    std::vector<std::vector<InteractionRecord>> records(3);
    for (std::size_t k = 0; k < 3; ++k) {
        records[k].reserve(parts[k].size());
        for (const InteractionRecord& r : parts[k].records()) {
            InteractionRecord out = r;
            out.session = vocab->intern_session(parts[k].vocab()->sessions[r.session]);
            out.item = vocab->intern_item(parts[k].vocab()->items[r.item]);
            records[k].push_back(out);
        }
    }
    VocabPtr shared = vocab;
    return {Dataset(layout, shared, std::move(records[0])),
            Dataset(layout, shared, std::move(records[1])),
            Dataset(layout, shared, std::move(records[2]))};
}

SplitFiles run_split_pipeline(const std::filesystem::path& raw, const CarouselLayout& layout,
                              const SplitSpec& spec, const std::filesystem::path& out_dir) {
    LoadReport load_report;
    Dataset loaded = load_interactions(raw, layout, &load_report);
    ImpressionFilterReport impression_report;
    Dataset impressed = filter_impressions(loaded, &impression_report);
    SessionFilterReport session_report;
    Dataset filtered = filter_sessions(impressed, &session_report);

    auto [train_full, test] = train_test_split(filtered, spec);
    auto [train, validation] = train_validation_split(train_full, spec);

    std::filesystem::create_directories(out_dir);
    SplitFiles files;
    files.train_full = out_dir / "train_full.csv";
    files.train = out_dir / "train.csv";
    files.validation = out_dir / "validation.csv";
    files.test = out_dir / "test.csv";
    files.manifest = out_dir / "manifest.json";
    write_interactions(files.train_full, train_full, "train");
    write_interactions(files.train, train, "subtrain");
    write_interactions(files.validation, validation, "validation");
    write_interactions(files.test, test, "test");

    auto clicks_of = [](const Dataset& d) {
        long clicks = 0;
        for (const auto& r : d.records()) clicks += r.click ? 1 : 0;
        return clicks;
    };
    nlohmann::ordered_json manifest;
    manifest["input"] = raw.string();
    manifest["layout"] = {{"rows", layout.rows},
                          {"cols", layout.cols},
                          {"visible_set_size", layout.visible_set_size},
                          {"swipe_sets", layout.swipe_sets}};
    manifest["seed"] = spec.seed;
    manifest["test_click_threshold"] = spec.test_click_threshold;
    manifest["validation_click_threshold"] = spec.validation_click_threshold;
    manifest["fraction"] = spec.fraction;
    manifest["load"] = {{"rows_parsed", load_report.rows_parsed},
                        {"dropped_click_without_examination",
                         load_report.dropped_click_without_examination},
                        {"dropped_click_without_impression",
                         load_report.dropped_click_without_impression}};
    manifest["impression_filter"] = {{"records_in", impression_report.records_in},
                                     {"records_out", impression_report.records_out},
                                     {"negatives_in", impression_report.negatives_in},
                                     {"negatives_out", impression_report.negatives_out}};
    manifest["session_filter"] = {
        {"sessions_in", session_report.sessions_in},
        {"sessions_without_click", session_report.sessions_without_click},
        {"sessions_without_fixation", session_report.sessions_without_fixation},
        {"never_clicked_items", session_report.never_clicked_items},
        {"records_of_never_clicked_items", session_report.records_of_never_clicked_items},
        {"sessions_out", session_report.sessions_out},
        {"records_out", session_report.records_out}};
    auto split_stats = [&](const Dataset& d) {
        return nlohmann::ordered_json{{"sessions", d.session_count()},
                                      {"records", static_cast<long>(d.size())},
                                      {"items", d.item_count()},
                                      {"clicks", clicks_of(d)}};
    };
    manifest["splits"] = {{"train_full", split_stats(train_full)},
                          {"train", split_stats(train)},
                          {"validation", split_stats(validation)},
                          {"test", split_stats(test)}};

    std::ofstream out(files.manifest);
    if (!out) throw std::runtime_error("cannot write " + files.manifest.string());
    out << manifest.dump(2) << '\n';
    return files;
}

}  // namespace cclick
