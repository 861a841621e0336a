#include "cclick/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cclick {

const char* to_string(Scenario s) {
    return s == Scenario::Standard ? "standard" : "fixed";
}

Scenario scenario_from_string(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "standard") return Scenario::Standard;
    if (s == "fixed" || s == "fixedattraction" || s == "fixed-attraction") {
        return Scenario::FixedAttraction;
    }
    throw std::invalid_argument("unknown scenario: " + name);
}

std::vector<ConfigRequest> default_matrix(Scenario scenario) {
    std::vector<ConfigRequest> matrix;
    matrix.push_back({ModelKind::TCM, Algorithm::MLE, {}, {}, {}});
    matrix.push_back({ModelKind::CCM, Algorithm::MLE, {}, {}, {}});

    std::vector<AttractionInit> atts = {AttractionInit::CTR, AttractionInit::Uniform};
    if (scenario == Scenario::FixedAttraction) atts = {AttractionInit::CTR};
    const std::vector<ExaminationInit> exams = {ExaminationInit::Carousel, ExaminationInit::Gaze};

    auto add_inits = [&](ModelKind kind, Algorithm alg) {
        for (AttractionInit att : atts) {
            for (ExaminationInit exam : exams) {
                matrix.push_back({kind, alg, att, exam, {}});
            }
        }
    };
    add_inits(ModelKind::CPBM, Algorithm::EM);
    add_inits(ModelKind::CPBM, Algorithm::GA);
    add_inits(ModelKind::RCPBM, Algorithm::GA);
    add_inits(ModelKind::OEPBM, Algorithm::GA);
    matrix.push_back({ModelKind::OEPBM, Algorithm::MLE, {}, {}, {}});
    return matrix;
}

namespace {

struct LoadedSplits {
    Dataset train;       // 82% subtrain
    Dataset validation;  // 8%
    Dataset test;        // 10%
    Dataset train_full;  // train + validation
};

// Loads the three split files through one shared vocabulary so fitted
// parameter tables stay aligned across them.
LoadedSplits load_splits(const ExperimentSpec& spec) {
    if (!spec.raw_path.empty()) {
        Dataset loaded = load_interactions(spec.raw_path, spec.layout);
        Dataset filtered = filter_sessions(filter_impressions(loaded), nullptr);
        auto [train_full, test] = train_test_split(filtered, spec.split);
        auto [train, validation] = train_validation_split(train_full, spec.split);
        return {std::move(train), std::move(validation), std::move(test), std::move(train_full)};
    }
    if (spec.train_path.empty() || spec.validation_path.empty() || spec.test_path.empty()) {
        throw std::invalid_argument("experiment needs either raw or train/validation/test paths");
    }
    SplitDatasets splits =
        load_split_datasets(spec.train_path, spec.validation_path, spec.test_path, spec.layout);
    Dataset train_full = concat(splits.train, splits.validation);
    return {std::move(splits.train), std::move(splits.validation), std::move(splits.test),
            std::move(train_full)};
}

const CheckpointReport* checkpoint_at(const FitResult& result, int iteration) {
    for (const CheckpointReport& cp : result.trace) {
        if (cp.iteration == iteration) return &cp;
    }
    return nullptr;
}

double validation_objective(const FitResult& result, LikelihoodKind objective) {
    const CheckpointReport* cp = checkpoint_at(result, result.validation_best_checkpoint);
    if (!cp) return -std::numeric_limits<double>::infinity();
    const auto& report =
        objective == LikelihoodKind::OELL ? cp->validation_oell : cp->validation_click;
    return report ? report->per_session_normalized : -std::numeric_limits<double>::infinity();
}

ResultRow run_request(const ConfigRequest& request, const ExperimentSpec& spec,
                      const LoadedSplits& data) {
    ResultRow row;
    row.model = to_string(request.model);
    row.alg = to_string(request.algorithm);
    row.att_init = request.att_init;
    row.exam_init = request.exam_init;
    row.lr = request.learning_rate;

    FitConfig config;
    config.model_kind = request.model;
    config.algorithm = request.algorithm;
    config.iterations = spec.iterations;
    config.eval_checkpoints = spec.eval_checkpoints;
    config.seed = spec.seed;
    config.fixed_attraction =
        spec.scenario == Scenario::FixedAttraction && request.algorithm != Algorithm::MLE;
    if (request.att_init) config.attraction_init = *request.att_init;
    if (request.exam_init) config.examination_init = *request.exam_init;

    FitResult final_fit;
    if (request.algorithm == Algorithm::MLE) {
        if (is_cascade(request.model)) {
            // Termination selected on validation with subtrain attraction,
            // then the final model is refit on the full train set.
            const FitResult selection = fit_cascade_mle(data.train, request.model,
                                                        data.validation);
            Model final_model{request.model, mle_attraction(data.train_full),
                              selection.model.exam};
            final_fit.model = final_model;
            final_fit.config = config;
            final_fit.selected_termination = selection.selected_termination;
            CheckpointReport cp;
            cp.iteration = 0;
            cp.train_click = click_log_likelihood(data.train_full, final_model);
            cp.validation_click = click_log_likelihood(data.validation, final_model);
            cp.test_click = click_log_likelihood(data.test, final_model);
            final_fit.trace.push_back(std::move(cp));
        } else {
            final_fit = fit(config, data.train_full, data.validation, data.test);
        }
    } else if (request.algorithm == Algorithm::GA && !request.learning_rate) {
        const LikelihoodKind objective = objective_kind(request.model);
        double best_lr = spec.lr_grid.at(0);
        double best_value = -std::numeric_limits<double>::infinity();
        for (double lr : spec.lr_grid) {
            FitConfig candidate = config;
            candidate.learning_rate = lr;
            const FitResult trial = fit(candidate, data.train, data.validation, data.test);
            const double value = validation_objective(trial, objective);
            if (value > best_value) {  // ties keep the smaller rate
                best_value = value;
                best_lr = lr;
            }
        }
        config.learning_rate = best_lr;
        row.lr = best_lr;
        final_fit = fit(config, data.train_full, data.validation, data.test);
    } else {
        if (request.learning_rate) config.learning_rate = *request.learning_rate;
        final_fit = fit(config, data.train_full, data.validation, data.test);
    }

    if (request.algorithm != Algorithm::MLE) row.best_iteration = final_fit.best_checkpoint;
    const CheckpointReport* best = checkpoint_at(final_fit, final_fit.best_checkpoint);
    if (!best) throw std::logic_error("missing checkpoint report");
    if (best->test_click) row.test_click_ll = best->test_click->per_session_normalized;
    if (is_cascade(request.model)) {
        row.oell_undefined = true;
    } else if (best->test_oell) {
        row.test_oell = best->test_oell->per_session_normalized;
    }
    return row;
}

int model_order(const std::string& model) {
    if (model == "1% Click") return 0;
    if (model == "TCM") return 1;
    if (model == "CCM") return 2;
    if (model == "CPBM") return 3;
    if (model == "RCPBM") return 4;
    if (model == "OEPBM") return 5;
    return 6;
}

int alg_order(const std::string& alg) {
    if (alg == "EM") return 0;
    if (alg == "GA") return 1;
    if (alg == "MLE") return 2;
    return 3;
}

void sort_rows(std::vector<ResultRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        const int ma = model_order(a.model), mb = model_order(b.model);
        if (ma != mb) return ma < mb;
        const int aa = alg_order(a.alg), ab = alg_order(b.alg);
        if (aa != ab) return aa < ab;
        const int ia = a.att_init ? static_cast<int>(*a.att_init) : -1;
        const int ib = b.att_init ? static_cast<int>(*b.att_init) : -1;
        if (ia != ib) return ia > ib;  // CTR before Uniform
        const int ea = a.exam_init ? static_cast<int>(*a.exam_init) : -1;
        const int eb = b.exam_init ? static_cast<int>(*b.exam_init) : -1;
        return ea > eb;  // Carousel before Gaze
    });
}

}  // namespace

ExperimentResults run_experiment(const ExperimentSpec& spec) {
    const LoadedSplits data = load_splits(spec);
    const std::vector<ConfigRequest> matrix = spec.matrix.empty() && spec.use_default_matrix
                                                  ? default_matrix(spec.scenario)
                                                  : spec.matrix;

    ExperimentResults results;
    if (spec.include_dummy) {
        const auto [click, joint] = dummy_baseline(data.test);
        ResultRow dummy;
        dummy.model = "1% Click";
        dummy.alg = "-";
        dummy.test_click_ll = click.per_session_normalized;
        dummy.test_oell = joint.per_session_normalized;
        results.rows.push_back(std::move(dummy));
    }
    for (const ConfigRequest& request : matrix) {
        try {
            results.rows.push_back(run_request(request, spec, data));
        } catch (const std::exception& e) {
            ResultRow row;
            row.model = to_string(request.model);
            row.alg = to_string(request.algorithm);
            row.att_init = request.att_init;
            row.exam_init = request.exam_init;
            row.lr = request.learning_rate;
            row.error = e.what();
            results.rows.push_back(std::move(row));
            ++results.failed_configs;
        }
    }
    sort_rows(results.rows);

    double best_click = -std::numeric_limits<double>::infinity();
    double best_oell = -std::numeric_limits<double>::infinity();
    for (const ResultRow& row : results.rows) {
        if (row.test_click_ll) best_click = std::max(best_click, *row.test_click_ll);
        if (row.test_oell) best_oell = std::max(best_oell, *row.test_oell);
    }
    for (ResultRow& row : results.rows) {
        row.best_click = row.test_click_ll && *row.test_click_ll == best_click;
        row.best_oell = row.test_oell && *row.test_oell == best_oell;
    }
    return results;
}

namespace {

std::string format_ll(const std::optional<double>& value) {
    if (!value) return "-";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", *value);
    return buffer;
}

std::string format_lr(const std::optional<double>& value) {
    if (!value) return "-";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%g", *value);
    return buffer;
}

std::vector<std::vector<std::string>> result_cells(const ExperimentResults& results) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"Model", "Alg", "Lr", "AttInit", "ExamInit", "Iter", "TestLL", "TestOELL",
                     "Best", "Error"});
    for (const ResultRow& row : results.rows) {
        std::vector<std::string> line;
        line.push_back(row.model);
        line.push_back(row.alg);
        line.push_back(format_lr(row.lr));
        line.push_back(row.att_init ? to_string(*row.att_init) : "-");
        line.push_back(row.exam_init ? to_string(*row.exam_init) : "-");
        line.push_back(row.best_iteration ? std::to_string(*row.best_iteration) : "-");
        line.push_back(format_ll(row.test_click_ll));
        line.push_back(row.oell_undefined ? "undefined" : format_ll(row.test_oell));
        std::string best;
        if (row.best_click) best = "click";
        if (row.best_oell) best += best.empty() ? "oell" : "+oell";
        line.push_back(best.empty() ? "-" : best);
        line.push_back(row.error.empty() ? "-" : row.error);
        cells.push_back(std::move(line));
    }
    return cells;
}

}  // namespace

std::string format_results_csv(const ExperimentResults& results) {
    std::ostringstream out;
    for (const auto& line : result_cells(results)) {
        for (std::size_t k = 0; k < line.size(); ++k) {
            if (k) out << ',';
            std::string field = line[k];
            std::replace(field.begin(), field.end(), ',', ';');
            out << field;
        }
        out << '\n';
    }
    return out.str();
}

std::string format_results_text(const ExperimentResults& results) {
    auto cells = result_cells(results);
    // Mark best values the way the tables mark bold entries.
    for (std::size_t r = 1; r < cells.size(); ++r) {
        const ResultRow& row = results.rows[r - 1];
        if (row.best_click) cells[r][6] += " *";
        if (row.best_oell) cells[r][7] += " *";
    }
    std::vector<std::size_t> widths(cells.front().size(), 0);
    for (const auto& line : cells) {
        for (std::size_t k = 0; k < line.size(); ++k) {
            widths[k] = std::max(widths[k], line[k].size());
        }
    }
    std::ostringstream out;
    for (const auto& line : cells) {
        for (std::size_t k = 0; k < line.size(); ++k) {
            if (k) out << "  ";
            out << line[k];
            if (k + 1 < line.size()) out << std::string(widths[k] - line[k].size(), ' ');
        }
        out << '\n';
    }
    out << "\n* best column value\n";
    return out.str();
}

ReportFiles emit_report(const ExperimentResults& results, const std::filesystem::path& out_dir) {
    if (results.rows.empty()) throw std::invalid_argument("emit_report: no result rows");
    std::filesystem::create_directories(out_dir);
    ReportFiles files;
    files.csv = out_dir / "results.csv";
    files.text = out_dir / "results.txt";
    {
        std::ofstream out(files.csv);
        if (!out) throw std::runtime_error("cannot write " + files.csv.string());
        out << format_results_csv(results);
        if (!out) throw std::runtime_error("write failed: " + files.csv.string());
    }
    {
        std::ofstream out(files.text);
        if (!out) throw std::runtime_error("cannot write " + files.text.string());
        out << format_results_text(results);
        if (!out) throw std::runtime_error("write failed: " + files.text.string());
    }
    return files;
}

}  // namespace cclick
