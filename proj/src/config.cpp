#include "cclick/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cclick {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

struct KeyValues {
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries) {
            if (k == key) return &v;
        }
        return nullptr;
    }
};

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        }
        kv.entries.emplace_back(trim(trimmed.substr(0, eq)), trim(trimmed.substr(eq + 1)));
    }
    return kv;
}

long to_long(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long parsed = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': cannot parse integer from '" + value +
                                 "'");
    }
}

double to_double(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double parsed = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': cannot parse number from '" + value +
                                 "'");
    }
}

bool to_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::runtime_error("config key '" + key + "': cannot parse boolean from '" + value +
                             "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream stream(value);
    std::string token;
    while (std::getline(stream, token, ',')) {
        const std::string t = trim(token);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

std::vector<std::string> split_tokens(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream stream(value);
    std::string token;
    while (stream >> token) out.push_back(token);
    return out;
}

ConfigRequest parse_config_request(const std::string& value) {
    const auto tokens = split_tokens(value);
    if (tokens.size() < 2) {
        throw std::runtime_error("config entry '" + value + "': expected MODEL ALG [inits] [lr]");
    }
    ConfigRequest request;
    request.model = model_kind_from_string(tokens[0]);
    request.algorithm = algorithm_from_string(tokens[1]);
    for (std::size_t k = 2; k < tokens.size(); ++k) {
        const std::string& token = tokens[k];
        try {
            request.att_init = attraction_init_from_string(token);
            continue;
        } catch (const std::invalid_argument&) {
        }
        try {
            request.exam_init = examination_init_from_string(token);
            continue;
        } catch (const std::invalid_argument&) {
        }
        request.learning_rate = to_double(token, "config");
    }
    return request;
}

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%g", value);
    return buffer;
}

}  // namespace

ExperimentSpec parse_experiment_config(const std::string& text) {
    ExperimentSpec spec;
    int rows = spec.layout.rows, cols = spec.layout.cols;
    int visible = spec.layout.visible_set_size;
    const KeyValues kv = parse_key_values(text);
    for (const auto& [key, value] : kv.entries) {
        if (key == "scenario") {
            spec.scenario = scenario_from_string(value);
        } else if (key == "raw") {
            spec.raw_path = value;
        } else if (key == "train") {
            spec.train_path = value;
        } else if (key == "validation") {
            spec.validation_path = value;
        } else if (key == "test") {
            spec.test_path = value;
        } else if (key == "rows") {
            rows = static_cast<int>(to_long(value, key));
        } else if (key == "cols") {
            cols = static_cast<int>(to_long(value, key));
        } else if (key == "visible_set_size") {
            visible = static_cast<int>(to_long(value, key));
        } else if (key == "test_click_threshold") {
            spec.split.test_click_threshold = static_cast<int>(to_long(value, key));
        } else if (key == "validation_click_threshold") {
            spec.split.validation_click_threshold = static_cast<int>(to_long(value, key));
        } else if (key == "fraction") {
            spec.split.fraction = to_double(value, key);
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(to_long(value, key));
            spec.split.seed = spec.seed;
        } else if (key == "out") {
            spec.out_dir = value;
        } else if (key == "iterations") {
            spec.iterations = static_cast<int>(to_long(value, key));
        } else if (key == "checkpoints") {
            spec.eval_checkpoints.clear();
            for (const std::string& token : split_list(value)) {
                spec.eval_checkpoints.push_back(static_cast<int>(to_long(token, key)));
            }
        } else if (key == "learning_rates") {
            spec.lr_grid.clear();
            for (const std::string& token : split_list(value)) {
                spec.lr_grid.push_back(to_double(token, key));
            }
        } else if (key == "include_dummy") {
            spec.include_dummy = to_bool(value, key);
        } else if (key == "use_default_matrix") {
            spec.use_default_matrix = to_bool(value, key);
        } else if (key == "config") {
            spec.matrix.push_back(parse_config_request(value));
            spec.use_default_matrix = false;
        } else {
            throw std::runtime_error("unknown experiment config key: " + key);
        }
    }
    spec.layout = CarouselLayout::make(rows, cols, visible);
    return spec;
}

ExperimentSpec load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str());
}

std::string format_experiment_config(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "scenario = " << to_string(spec.scenario) << '\n';
    if (!spec.raw_path.empty()) out << "raw = " << spec.raw_path << '\n';
    if (!spec.train_path.empty()) out << "train = " << spec.train_path << '\n';
    if (!spec.validation_path.empty()) out << "validation = " << spec.validation_path << '\n';
    if (!spec.test_path.empty()) out << "test = " << spec.test_path << '\n';
    out << "rows = " << spec.layout.rows << '\n';
    out << "cols = " << spec.layout.cols << '\n';
    out << "visible_set_size = " << spec.layout.visible_set_size << '\n';
    out << "test_click_threshold = " << spec.split.test_click_threshold << '\n';
    out << "validation_click_threshold = " << spec.split.validation_click_threshold << '\n';
    out << "fraction = " << format_double(spec.split.fraction) << '\n';
    out << "seed = " << spec.seed << '\n';
    out << "out = " << spec.out_dir << '\n';
    out << "iterations = " << spec.iterations << '\n';
    out << "checkpoints = ";
    for (std::size_t k = 0; k < spec.eval_checkpoints.size(); ++k) {
        if (k) out << ',';
        out << spec.eval_checkpoints[k];
    }
    out << '\n';
    out << "learning_rates = ";
    for (std::size_t k = 0; k < spec.lr_grid.size(); ++k) {
        if (k) out << ',';
        out << format_double(spec.lr_grid[k]);
    }
    out << '\n';
    out << "include_dummy = " << (spec.include_dummy ? "true" : "false") << '\n';
    if (spec.matrix.empty()) {
        out << "use_default_matrix = " << (spec.use_default_matrix ? "true" : "false") << '\n';
    }
    for (const ConfigRequest& request : spec.matrix) {
        out << "config = " << to_string(request.model) << ' ' << to_string(request.algorithm);
        if (request.att_init) out << ' ' << to_string(*request.att_init);
        if (request.exam_init) out << ' ' << to_string(*request.exam_init);
        if (request.learning_rate) out << ' ' << format_double(*request.learning_rate);
        out << '\n';
    }
    return out.str();
}

FitConfig parse_fit_config(const std::string& text) {
    FitConfig config;
    const KeyValues kv = parse_key_values(text);
    for (const auto& [key, value] : kv.entries) {
        if (key == "model") {
            config.model_kind = model_kind_from_string(value);
        } else if (key == "algorithm") {
            config.algorithm = algorithm_from_string(value);
        } else if (key == "learning_rate") {
            config.learning_rate = to_double(value, key);
        } else if (key == "iterations") {
            config.iterations = static_cast<int>(to_long(value, key));
        } else if (key == "checkpoints") {
            config.eval_checkpoints.clear();
            for (const std::string& token : split_list(value)) {
                config.eval_checkpoints.push_back(static_cast<int>(to_long(token, key)));
            }
        } else if (key == "attraction_init") {
            config.attraction_init = attraction_init_from_string(value);
        } else if (key == "examination_init") {
            config.examination_init = examination_init_from_string(value);
        } else if (key == "fixed_attraction") {
            config.fixed_attraction = to_bool(value, key);
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(to_long(value, key));
        } else {
            throw std::runtime_error("unknown fit config key: " + key);
        }
    }
    return config;
}

FitConfig load_fit_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_fit_config(buffer.str());
}

std::string format_fit_config(const FitConfig& config) {
    std::ostringstream out;
    out << "model = " << to_string(config.model_kind) << '\n';
    out << "algorithm = " << to_string(config.algorithm) << '\n';
    out << "learning_rate = " << format_double(config.learning_rate) << '\n';
    out << "iterations = " << config.iterations << '\n';
    out << "checkpoints = ";
    for (std::size_t k = 0; k < config.eval_checkpoints.size(); ++k) {
        if (k) out << ',';
        out << config.eval_checkpoints[k];
    }
    out << '\n';
    out << "attraction_init = " << to_string(config.attraction_init) << '\n';
    out << "examination_init = " << to_string(config.examination_init) << '\n';
    out << "fixed_attraction = " << (config.fixed_attraction ? "true" : "false") << '\n';
    out << "seed = " << config.seed << '\n';
    return out.str();
}

SimulateSpec parse_simulate_config(const std::string& text) {
    SimulateSpec spec;
    int rows = spec.layout.rows, cols = spec.layout.cols;
    int visible = spec.layout.visible_set_size;
    const KeyValues kv = parse_key_values(text);
    for (const auto& [key, value] : kv.entries) {
        if (key == "model") {
            spec.kind = model_kind_from_string(value);
        } else if (key == "rows") {
            rows = static_cast<int>(to_long(value, key));
        } else if (key == "cols") {
            cols = static_cast<int>(to_long(value, key));
        } else if (key == "visible_set_size") {
            visible = static_cast<int>(to_long(value, key));
        } else if (key == "items") {
            spec.items = static_cast<int>(to_long(value, key));
        } else if (key == "sessions") {
            spec.sessions = static_cast<int>(to_long(value, key));
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(to_long(value, key));
        } else if (key == "theta_low") {
            spec.theta_range.first = to_double(value, key);
        } else if (key == "theta_high") {
            spec.theta_range.second = to_double(value, key);
        } else if (key == "exam_low") {
            spec.exam_range.first = to_double(value, key);
        } else if (key == "exam_high") {
            spec.exam_range.second = to_double(value, key);
        } else if (key == "termination") {
            spec.termination = to_double(value, key);
        } else if (key == "first_click_only") {
            spec.first_click_only = to_bool(value, key);
        } else {
            throw std::runtime_error("unknown simulate config key: " + key);
        }
    }
    spec.layout = CarouselLayout::make(rows, cols, visible);
    return spec;
}

SimulateSpec load_simulate_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_simulate_config(buffer.str());
}

namespace {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

}  // namespace

void write_model_json(const std::filesystem::path& path, const Model& model,
                      const VocabPtr& vocab, const FitConfig* config) {
    nlohmann::ordered_json doc;
    doc["kind"] = to_string(model.kind);
    nlohmann::ordered_json attraction = nlohmann::ordered_json::object();
    for (std::size_t u = 0; u < model.attraction.theta.size(); ++u) {
        attraction[vocab->items[u]] = model.attraction.theta[u];
    }
    doc["attraction"] = std::move(attraction);
    if (const auto* grid = std::get_if<PositionGrid>(&model.exam)) {
        doc["examination"] = {{"type", "grid"},
                              {"rows", grid->rows},
                              {"cols", grid->cols},
                              {"w", grid->w}};
    } else if (const auto* rc = std::get_if<RowColFactors>(&model.exam)) {
        doc["examination"] = {{"type", "rowcol"}, {"row_w", rc->row_w}, {"col_w", rc->col_w}};
    } else if (const auto* term = std::get_if<Termination>(&model.exam)) {
        doc["examination"] = {{"type", "termination"}, {"t", term->t}};
    } else {
        doc["examination"] = {{"type", "none"}};
    }
    if (config) {
        const std::string text = format_fit_config(*config);
        doc["config"] = text;
        char fingerprint[24];
        std::snprintf(fingerprint, sizeof(fingerprint), "%016llx",
                      static_cast<unsigned long long>(fnv1a(text)));
        doc["fingerprint"] = fingerprint;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

Model load_model_json(const std::filesystem::path& path, const Dataset& target) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    nlohmann::json doc;
    in >> doc;
    Model model;
    model.kind = model_kind_from_string(doc.at("kind").get<std::string>());
    const auto& attraction = doc.at("attraction");
    model.attraction.theta.assign(static_cast<std::size_t>(target.n_items()), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(target.n_items()), 0);
    for (auto it = attraction.begin(); it != attraction.end(); ++it) {
        const auto id = target.vocab()->find_item(it.key());
        if (!id) continue;  // parameters for items absent from the target data
        model.attraction.theta[*id] = it.value().get<double>();
        seen[*id] = 1;
    }
    for (int u = 0; u < target.n_items(); ++u) {
        if (!seen[u] && !target.by_item(u).empty()) {
            throw std::runtime_error("model has no attraction entry for item '" +
                                     target.vocab()->items[u] + "'");
        }
    }
    const auto& exam = doc.at("examination");
    const std::string type = exam.at("type").get<std::string>();
    if (type == "grid") {
        PositionGrid grid;
        grid.rows = exam.at("rows").get<int>();
        grid.cols = exam.at("cols").get<int>();
        grid.w = exam.at("w").get<std::vector<double>>();
        model.exam = std::move(grid);
    } else if (type == "rowcol") {
        RowColFactors rc;
        rc.row_w = exam.at("row_w").get<std::vector<double>>();
        rc.col_w = exam.at("col_w").get<std::vector<double>>();
        model.exam = std::move(rc);
    } else if (type == "termination") {
        model.exam = Termination{exam.at("t").get<double>()};
    } else if (type == "none") {
        model.exam = std::monostate{};
    } else {
        throw std::runtime_error("unknown examination parameter type: " + type);
    }
    validate_model(model, target.layout(), static_cast<std::size_t>(target.n_items()));
    return model;
}

}  // namespace cclick
