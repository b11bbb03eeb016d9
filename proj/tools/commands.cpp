#include "commands.hpp"

#include <glob.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "ordsoft/csv.hpp"
#include "ordsoft/random.hpp"
#include "ordsoft/stat_tests.hpp"
#include "ordsoft/synth.hpp"

namespace ordsoft::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json read_json_file(const fs::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw UsageError(path.string() + ": " + e.what());
    }
}

std::vector<Strategy> parse_strategy_list(const std::vector<std::string>& names) {
    std::vector<Strategy> out;
    for (const auto& n : names) {
        try {
            out.push_back(parse_strategy(n));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

std::string dump_line(const json& j) { return j.dump() + "\n"; }

// Output to a file when a path is given, otherwise to `out`.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        write_file_atomic(path, text);
    }
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    std::vector<fs::path> out;
    if (rc == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH) throw std::runtime_error("glob failed for '" + pattern + "'");
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- softlabels

struct SoftlabelArgs {
    int classes = 0;
    std::string strategy;
    double eta = 1.0;
    std::optional<double> alpha, p, concentration;
    bool plot_data = false;
    std::string output;
};

void add_softlabels(CLI::App& app, SoftlabelArgs& a) {
    auto* cmd = app.add_subcommand("softlabels", "Print the soft target matrix of a strategy as CSV");
    cmd->add_option("--classes", a.classes, "Number of grades")->required()->check(CLI::Range(2, 1000));
    cmd->add_option("--strategy", a.strategy, "nominal, binomial, beta, triangular, exponential, nominal_smoothed")
        ->required();
    cmd->add_option("--eta", a.eta, "Blend weight of the soft distribution")->check(CLI::Range(0.0, 1.0));
    auto* alpha = cmd->add_option("--alpha", a.alpha, "Triangular adjacent-class probability");
    auto* p = cmd->add_option("--p", a.p, "Exponential distance exponent");
    auto* conc = cmd->add_option("--concentration", a.concentration, "Beta concentration");
    alpha->excludes(p)->excludes(conc);
    p->excludes(conc);
    cmd->add_flag("--plot-data", a.plot_data, "Emit a long table (true_grade,grade,distribution,target)");
    cmd->add_option("-o,--output", a.output, "Write to a file instead of stdout");
}

int cmd_softlabels(const SoftlabelArgs& a, std::ostream& out) {
    Strategy strategy;
    try {
        strategy = parse_strategy(a.strategy);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (a.alpha && strategy != Strategy::Triangular) throw UsageError("--alpha only applies to triangular");
    if (a.p && strategy != Strategy::Exponential) throw UsageError("--p only applies to exponential");
    if (a.concentration && strategy != Strategy::Beta) throw UsageError("--concentration only applies to beta");
    softlabel::SmoothingParams params;
    params.eta = a.eta;
    if (a.alpha) params.alpha = *a.alpha;
    if (a.p) params.p = *a.p;
    if (a.concentration) params.concentration = *a.concentration;
    try {
        softlabel::validate(strategy, params);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const LabelSpace space(a.classes);
    const auto matrix = softlabel::build_target_matrix(space, strategy, params);
    std::ostringstream s;
    if (a.plot_data) {
        s << "true_grade,grade,distribution,target\n";
        for (int k = 0; k < a.classes; ++k) {
            const auto raw = softlabel::strategy_row(strategy, a.classes, k, params);
            for (int j = 0; j < a.classes; ++j) {
                s << k << ',' << j << ',' << csv::format_double(raw[static_cast<std::size_t>(j)]) << ','
                  << csv::format_double(matrix.at(k, j)) << '\n';
            }
        }
    } else {
        for (int k = 0; k < a.classes; ++k) {
            for (int j = 0; j < a.classes; ++j) s << (j ? "," : "") << csv::format_double(matrix.at(k, j));
            s << '\n';
        }
    }
    emit(a.output, s.str(), out);
    return kExitOk;
}

// --------------------------------------------------------------------- synth

struct SynthArgs {
    std::string config;
    std::optional<int> classes;
    std::vector<std::size_t> n_per_class;
    std::optional<std::size_t> dims;
    std::optional<double> separation, noise_sd, flip;
    std::optional<std::uint64_t> seed;
    bool paired = false;
    std::optional<std::size_t> n;
    std::string output;
};

void add_synth(CLI::App& app, SynthArgs& a) {
    auto* cmd = app.add_subcommand("synth", "Generate a synthetic ordinal dataset");
    cmd->add_option("--config", a.config, "JSON spec; flags override its fields")->check(CLI::ExistingFile);
    cmd->add_option("--classes", a.classes, "Number of grades (single-task mode)");
    cmd->add_option("--n-per-class", a.n_per_class, "Samples per grade")->delimiter(',');
    cmd->add_option("--dims", a.dims, "Feature dimensions");
    cmd->add_option("--separation", a.separation, "Distance between consecutive grade centres");
    cmd->add_option("--noise-sd", a.noise_sd, "Isotropic noise standard deviation");
    cmd->add_option("--flip", a.flip, "Adjacent label flip probability");
    cmd->add_option("--seed", a.seed, "Generator seed");
    cmd->add_flag("--paired", a.paired, "Two grading axes sharing the same samples");
    cmd->add_option("--n", a.n, "Total samples (paired mode)");
    cmd->add_option("-o,--output", a.output,
                    "CSV path (single-task mode) or output directory (paired mode)")
        ->required();
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    const json cfg = a.config.empty() ? json::object() : read_json_file(a.config);
    if (!a.paired) {
        auto spec = synth::SynthSpec{};
        try {
            spec = io::synth_spec_from_json(cfg);
            if (a.classes) spec.classes = *a.classes;
            if (!a.n_per_class.empty()) spec.n_per_class = a.n_per_class;
            if (a.dims) spec.dims = *a.dims;
            if (a.separation) spec.class_separation = *a.separation;
            if (a.noise_sd) spec.noise_sd = *a.noise_sd;
            if (a.flip) spec.adjacent_flip_prob = *a.flip;
            if (a.seed) spec.seed = *a.seed;
            spec.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        std::ostringstream s;
        synth::generate(spec).write_csv(s);
        write_file_atomic(a.output, s.str());
        out << dump_line({{"schema_version", io::kSchemaVersion}, {"kind", "synth"}, {"spec", io::to_json(spec)},
                          {"files", {{"samples", a.output}}}});
        return kExitOk;
    }

    auto spec = synth::PairedSampleSpec{};
    try {
        spec = io::paired_spec_from_json(cfg);
        if (a.classes) throw UsageError("--classes is single-task only; use classes_a/classes_b in --config");
        if (!a.n_per_class.empty()) throw UsageError("--n-per-class is single-task only");
        if (a.n) spec.grades.n = *a.n;
        if (a.dims) spec.dims = *a.dims;
        if (a.separation) spec.separation_a = spec.separation_b = *a.separation;
        if (a.noise_sd) spec.noise_sd = *a.noise_sd;
        if (a.flip) spec.adjacent_flip_prob = *a.flip;
        if (a.seed) spec.seed = spec.grades.seed = *a.seed;
        spec.validate();
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto samples = synth::generate_paired_samples(spec);
    const fs::path dir(a.output);
    fs::create_directories(dir);
    std::ostringstream sa, sb, grades, truth;
    samples.task_a.write_csv(sa);
    samples.task_b.write_csv(sb);
    grades << "a,b\n";
    for (std::size_t i = 0; i < samples.clean.a.size(); ++i) grades << samples.clean.a[i] << ',' << samples.clean.b[i] << '\n';
    samples.observed_table().write_csv(truth);
    write_file_atomic(dir / "task_a.csv", sa.str());
    write_file_atomic(dir / "task_b.csv", sb.str());
    write_file_atomic(dir / "clean_grades.csv", grades.str());
    write_file_atomic(dir / "truth_table.csv", truth.str());
    out << dump_line({{"schema_version", io::kSchemaVersion},
                      {"kind", "synth_paired"},
                      {"spec", io::to_json(spec)},
                      {"files",
                       {{"task_a", (dir / "task_a.csv").string()},
                        {"task_b", (dir / "task_b.csv").string()},
                        {"clean_grades", (dir / "clean_grades.csv").string()},
                        {"truth_table", (dir / "truth_table.csv").string()}}}});
    return kExitOk;
}

// --------------------------------------------------------------------- train

struct TrainArgs {
    std::string data, config, output;
    std::optional<int> classes;
    std::optional<std::string> strategy, architecture;
    std::optional<double> lr, eta, alpha, p, concentration;
    std::optional<std::size_t> batch, hidden;
    std::optional<int> epochs, patience;
    std::optional<std::uint64_t> seed;
    double validation_fraction = 0.3;
};

void add_train(CLI::App& app, TrainArgs& a) {
    auto* cmd = app.add_subcommand("train", "Train one model with a fixed configuration");
    cmd->add_option("--data", a.data, "Sample CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--config", a.config, "TrainConfig JSON; flags override its fields")->check(CLI::ExistingFile);
    cmd->add_option("--classes", a.classes, "Number of grades (default: inferred)");
    cmd->add_option("--strategy", a.strategy, "Target strategy");
    cmd->add_option("--lr", a.lr, "Learning rate");
    cmd->add_option("--eta", a.eta, "Blend weight");
    cmd->add_option("--alpha", a.alpha, "Triangular adjacent-class probability");
    cmd->add_option("--p", a.p, "Exponential exponent");
    cmd->add_option("--concentration", a.concentration, "Beta concentration");
    cmd->add_option("--batch-size", a.batch, "Mini-batch size");
    cmd->add_option("--epochs", a.epochs, "Maximum epochs");
    cmd->add_option("--patience", a.patience, "Early-stopping patience");
    cmd->add_option("--architecture", a.architecture, "linear or mlp");
    cmd->add_option("--hidden", a.hidden, "Hidden width");
    cmd->add_option("--seed", a.seed, "Seed for split, initialisation and shuffling");
    cmd->add_option("--validation-fraction", a.validation_fraction, "Held-out share for early stopping")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("-o,--output", a.output, "Model JSON path")->required();
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
    TrainConfig config;
    try {
        if (!a.config.empty()) config = io::train_config_from_json(read_json_file(a.config));
        if (a.strategy) config.strategy = parse_strategy(*a.strategy);
        if (a.architecture) config.architecture = parse_architecture(*a.architecture);
        if (a.lr) config.learning_rate = *a.lr;
        if (a.eta) config.params.eta = *a.eta;
        if (a.alpha) config.params.alpha = *a.alpha;
        if (a.p) config.params.p = *a.p;
        if (a.concentration) config.params.concentration = *a.concentration;
        if (a.batch) config.batch_size = *a.batch;
        if (a.epochs) config.max_epochs = *a.epochs;
        if (a.patience) config.patience = *a.patience;
        if (a.hidden) config.hidden_width = *a.hidden;
        if (a.seed) config.seed = *a.seed;
        config.validate();
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto data = SampleSet::load(a.data);
    const int classes = a.classes ? *a.classes : data.observed_classes();
    data.check_labels(LabelSpace(classes));
    const auto split = stratified_split(data.labels(), 1.0 - a.validation_fraction,
                                        derive_seed(config.seed, Stream::InnerSplit));
    const auto fit = data.subset(split.train);
    const auto validation = data.subset(split.holdout);
    const auto trained = train(config, fit, validation, classes);
    const auto report = metrics::evaluate(build_confusion(predict(trained.model, validation), LabelSpace(classes)));

    json model = io::to_json(trained.model);
    model["config"] = io::to_json(config);
    model["history"] = io::to_json(trained.history);
    write_file_atomic(a.output, model.dump() + "\n");
    out << dump_line({{"schema_version", io::kSchemaVersion},
                      {"kind", "train"},
                      {"model", a.output},
                      {"config", io::to_json(config)},
                      {"best_epoch", trained.history.best_epoch},
                      {"epochs_run", trained.history.epochs.size()},
                      {"validation_metrics", io::to_json(report)}});
    return kExitOk;
}

// ------------------------------------------------------------------ evaluate

struct EvaluateArgs {
    std::string model, data, results, output;
    std::optional<int> classes;
};

void add_evaluate(CLI::App& app, EvaluateArgs& a) {
    auto* cmd = app.add_subcommand("evaluate", "Score a model on a dataset, or re-summarise sweep records");
    auto* model = cmd->add_option("--model", a.model, "Model JSON written by train")->check(CLI::ExistingFile);
    auto* data = cmd->add_option("--data", a.data, "Sample CSV")->check(CLI::ExistingFile);
    auto* results = cmd->add_option("--results", a.results, "results.jsonl written by sweep")->check(CLI::ExistingFile);
    model->needs(data);
    data->needs(model);
    results->excludes(model)->excludes(data);
    cmd->add_option("--classes", a.classes, "Number of grades (default: from the model)");
    cmd->add_option("-o,--output", a.output, "Write JSON to a file instead of stdout");
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
    if (!a.results.empty()) {
        // Metrics are recomputed from the stored predictions, not copied.
        auto runs = read_jsonl(a.results);
        for (auto& r : runs) {
            r.metrics = metrics::evaluate(build_confusion(r.predictions, LabelSpace(r.predictions.classes())));
        }
        emit(a.output, summary_json(runs).dump(2) + "\n", out);
        return kExitOk;
    }
    if (a.model.empty()) throw UsageError("evaluate needs --model with --data, or --results");
    const auto model = io::model_from_json(read_json_file(a.model));
    const auto data = SampleSet::load(a.data);
    const int classes = a.classes ? *a.classes : model.classes();
    if (classes != model.classes()) throw UsageError("--classes does not match the model");
    data.check_labels(LabelSpace(classes));
    const auto report = metrics::evaluate(build_confusion(predict(model, data), LabelSpace(classes)));
    json doc = io::to_json(report);
    doc["schema_version"] = io::kSchemaVersion;
    doc["n"] = data.size();
    emit(a.output, doc.dump(2) + "\n", out);
    return kExitOk;
}

// --------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string config, output_dir;
    std::optional<int> n_seeds, workers;
    std::optional<std::uint64_t> root_seed;
    std::vector<std::string> strategies;
};

void add_sweep(CLI::App& app, SweepArgs& a) {
    auto* cmd = app.add_subcommand("sweep", "Multi-seed split/search/evaluate protocol");
    cmd->add_option("--config", a.config, "ExperimentConfig JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output-dir", a.output_dir, "Override output_dir");
    cmd->add_option("--n-seeds", a.n_seeds, "Override n_seeds");
    cmd->add_option("--root-seed", a.root_seed, "Override root_seed");
    cmd->add_option("--strategies", a.strategies, "Override strategies")->delimiter(',');
    cmd->add_option("--workers", a.workers, "Worker threads (default: ORDSOFT_WORKERS or all cores)");
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    const fs::path config_path(a.config);
    ExperimentConfig cfg;
    try {
        cfg = experiment_config_from_json(read_json_file(config_path), config_path.parent_path());
        if (!a.output_dir.empty()) cfg.output_dir = a.output_dir;
        if (a.n_seeds) cfg.n_seeds = *a.n_seeds;
        if (a.root_seed) cfg.root_seed = *a.root_seed;
        if (!a.strategies.empty()) cfg.strategies = parse_strategy_list(a.strategies);
        cfg.validate();
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!fs::exists(cfg.dataset)) throw UsageError("dataset not found: " + cfg.dataset.string());
    if (cfg.joint && !fs::exists(cfg.joint->dataset)) {
        throw UsageError("dataset not found: " + cfg.joint->dataset.string());
    }

    ProtocolOptions options;
    options.task = cfg.task;
    options.train_fraction = cfg.train_fraction;
    options.validation_fraction = cfg.validation_fraction;
    options.space = cfg.space;
    options.base = cfg.base;
    options.seeds = seed_sequence(cfg.root_seed, cfg.n_seeds);
    options.workers = a.workers.value_or(0);

    const auto data = SampleSet::load(cfg.dataset.string());
    const int classes = cfg.classes > 0 ? cfg.classes : data.observed_classes();
    fs::create_directories(cfg.output_dir);

    std::vector<RunResult> runs;
    if (!cfg.joint) {
        runs = run_protocol(data, classes, cfg.strategies, options);
    } else {
        const auto data_b = SampleSet::load(cfg.joint->dataset.string());
        const int classes_b = cfg.joint->classes > 0 ? cfg.joint->classes : data_b.observed_classes();
        auto res = run_joint_protocol(data, data_b, classes, classes_b, cfg.strategies, options, cfg.joint->task);
        runs = std::move(res.runs_a);
        runs.insert(runs.end(), std::make_move_iterator(res.runs_b.begin()), std::make_move_iterator(res.runs_b.end()));
        const fs::path tables = cfg.output_dir / "tables";
        fs::create_directories(tables);
        for (const auto& t : res.tables) {
            auto table = t.predicted;
            table.row_axis = cfg.task;
            table.col_axis = cfg.joint->task;
            std::ostringstream s;
            table.write_csv(s);
            write_file_atomic(tables / (std::string(to_string(t.strategy)) + "_seed" + std::to_string(t.seed) + ".csv"),
                              s.str());
        }
        auto truth = joint::ContingencyTable::from_pairs(data.labels(), data_b.labels(), classes, classes_b);
        truth.row_axis = cfg.task;
        truth.col_axis = cfg.joint->task;
        std::ostringstream s;
        truth.write_csv(s);
        write_file_atomic(cfg.output_dir / "truth_table.csv", s.str());
    }

    write_file_atomic(cfg.output_dir / "results.jsonl", to_jsonl(runs));
    const auto rows = summarize(runs);
    json summary = summary_json(runs);
    write_file_atomic(cfg.output_dir / "summary.json", summary.dump(2) + "\n");
    write_file_atomic(cfg.output_dir / "summary.txt", format_summary(rows));
    write_file_atomic(cfg.output_dir / "config.json", to_json(cfg).dump(2) + "\n");
    out << format_summary(rows);
    return kExitOk;
}

// ------------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string truth, predicted, output;
    double epsilon = joint::kDefaultKldEpsilon;
};

void add_analyze(CLI::App& app, AnalyzeArgs& a) {
    auto* cmd = app.add_subcommand("analyze", "Compare predicted contingency tables with the ground truth");
    cmd->add_option("--truth", a.truth, "Ground-truth contingency table CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--predicted", a.predicted, "Glob of predicted tables named <strategy>_seed<N>.csv")->required();
    cmd->add_option("--epsilon", a.epsilon, "KLD smoothing constant")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("-o,--output", a.output, "Write JSON to a file instead of stdout");
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
    const auto truth = joint::ContingencyTable::load(a.truth);
    const auto files = expand_glob(a.predicted);
    if (files.empty()) throw UsageError("no predicted tables match '" + a.predicted + "'");
    emit(a.output, analyze_tables(truth, files, a.epsilon).dump(2) + "\n", out);
    return kExitOk;
}

json mean_std_json(std::span<const double> values) {
    const auto m = mean_std(values);
    return {{"mean", m.mean}, {"std", m.std}, {"n", m.n}};
}

}  // namespace

// ------------------------------------------------------------ shared helpers

void ExperimentConfig::validate() const {
    if (task.empty()) throw std::invalid_argument("task name is empty");
    if (dataset.empty()) throw std::invalid_argument("dataset path is empty");
    if (classes < 0 || classes == 1) throw std::invalid_argument("classes must be >= 2 (or 0 to infer)");
    if (strategies.empty()) throw std::invalid_argument("strategies list is empty");
    if (n_seeds < 1) throw std::invalid_argument("n_seeds must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw std::invalid_argument("train_fraction out of (0,1)");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
        throw std::invalid_argument("validation_fraction out of (0,1)");
    }
    space.validate();
    base.validate();
    if (joint) {
        if (joint->task.empty() || joint->task == task) throw std::invalid_argument("joint task needs a distinct name");
        if (joint->dataset.empty()) throw std::invalid_argument("joint dataset path is empty");
    }
}

ExperimentConfig experiment_config_from_json(const json& j, const fs::path& base_dir) {
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != io::kSchemaVersion) {
        throw std::invalid_argument("unsupported schema_version");
    }
    auto resolve = [&](const std::string& p) {
        fs::path path(p);
        return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    ExperimentConfig c;
    c.task = j.value("task", c.task);
    c.dataset = resolve(j.at("dataset").get<std::string>());
    c.classes = j.value("classes", c.classes);
    c.strategies = parse_strategy_list(j.value("strategies", std::vector<std::string>{"nominal", "binomial", "beta",
                                                                                      "triangular", "exponential"}));
    if (j.contains("search_space")) c.space = io::search_space_from_json(j.at("search_space"));
    if (j.contains("train")) c.base = io::train_config_from_json(j.at("train"));
    c.n_seeds = j.value("n_seeds", c.n_seeds);
    c.root_seed = j.value("root_seed", c.root_seed);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
    c.output_dir = j.contains("output_dir") ? resolve(j.at("output_dir").get<std::string>()) : c.output_dir;
    if (j.contains("joint")) {
        const auto& jj = j.at("joint");
        c.joint = JointTask{jj.at("task").get<std::string>(), resolve(jj.at("dataset").get<std::string>()),
                            jj.value("classes", 0)};
    }
    return c;
}

json to_json(const ExperimentConfig& c) {
    std::vector<std::string> names;
    for (auto s : c.strategies) names.emplace_back(to_string(s));
    json j{{"schema_version", io::kSchemaVersion},
           {"task", c.task},
           {"dataset", c.dataset.string()},
           {"classes", c.classes},
           {"strategies", names},
           {"search_space", io::to_json(c.space)},
           {"train", io::to_json(c.base)},
           {"n_seeds", c.n_seeds},
           {"root_seed", c.root_seed},
           {"train_fraction", c.train_fraction},
           {"validation_fraction", c.validation_fraction},
           {"output_dir", c.output_dir.string()}};
    if (c.joint) j["joint"] = {{"task", c.joint->task}, {"dataset", c.joint->dataset.string()}, {"classes", c.joint->classes}};
    return j;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << contents;
        f.flush();
        if (!f) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string to_jsonl(const std::vector<RunResult>& runs) {
    std::string s;
    for (const auto& r : runs) s += io::to_json(r).dump() + "\n";
    return s;
}

std::vector<RunResult> read_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<RunResult> runs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        runs.push_back(io::run_result_from_json(json::parse(line)));
    }
    return runs;
}

json summary_json(const std::vector<RunResult>& runs) {
    json rows = json::array();
    for (const auto& r : summarize(runs)) rows.push_back(io::to_json(r));
    return {{"schema_version", io::kSchemaVersion},
            {"metrics", std::vector<std::string>(kMetricNames.begin(), kMetricNames.end())},
            {"n_records", runs.size()},
            {"rows", rows}};
}

json analyze_tables(const joint::ContingencyTable& truth, const std::vector<fs::path>& predicted, double epsilon) {
    static const std::regex name_re(R"(([a-z_]+)_seed([0-9]+)\.csv)");
    if (truth.total() <= 0) throw std::invalid_argument("ground-truth table is empty");
    const auto p = joint::normalise(truth);

    struct Run {
        std::string file;
        Strategy strategy;
        std::uint64_t seed;
        joint::ContingencyTable table;
        double kld = 0.0, mae = 0.0;
    };
    std::vector<Run> runs;
    for (const auto& f : predicted) {
        std::smatch m;
        const std::string name = f.filename().string();
        if (!std::regex_match(name, m, name_re)) {
            throw std::invalid_argument("cannot parse strategy/seed from '" + name + "'");
        }
        auto table = joint::ContingencyTable::load(f.string());
        if (table.rows() != truth.rows() || table.cols() != truth.cols()) {
            throw std::invalid_argument("shape mismatch between '" + name + "' and the ground truth");
        }
        if (table.total() <= 0) throw std::invalid_argument("'" + name + "' is empty");
        Run r{f.string(), parse_strategy(m[1].str()), std::stoull(m[2].str()), std::move(table)};
        const auto q = joint::normalise(r.table);
        r.kld = joint::kld(p, q, epsilon);
        r.mae = joint::table_mae(p, q);
        runs.push_back(std::move(r));
    }
    std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
        return std::tie(a.strategy, a.seed) < std::tie(b.strategy, b.seed);
    });
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (runs[i].strategy == runs[i - 1].strategy && runs[i].seed == runs[i - 1].seed) {
            throw std::invalid_argument("duplicate table for " + std::string(to_string(runs[i].strategy)) + " seed " +
                                        std::to_string(runs[i].seed));
        }
    }

    std::vector<Strategy> strategies;
    for (const auto& r : runs)
        if (strategies.empty() || strategies.back() != r.strategy) strategies.push_back(r.strategy);
    if (strategies.size() < 2) throw std::invalid_argument("the global test needs at least two strategies");

    json run_docs = json::array();
    for (const auto& r : runs) {
        run_docs.push_back({{"file", r.file},
                            {"strategy", std::string(to_string(r.strategy))},
                            {"seed", r.seed},
                            {"kld", io::number_or_null(r.kld)},
                            {"table_mae", r.mae}});
    }

    json per_strategy = json::array();
    std::vector<std::vector<double>> kld_groups;
    std::vector<std::map<std::uint64_t, double>> kld_by_seed;
    for (Strategy s : strategies) {
        std::vector<double> klds, maes;
        std::vector<joint::JointDistribution> dists;
        std::map<std::uint64_t, double> by_seed;
        for (const auto& r : runs) {
            if (r.strategy != s) continue;
            klds.push_back(r.kld);
            maes.push_back(r.mae);
            dists.push_back(joint::normalise(r.table));
            by_seed[r.seed] = r.kld;
        }
        const auto mean_table = joint::average(dists);
        per_strategy.push_back({{"strategy", std::string(to_string(s))},
                                {"runs", klds.size()},
                                {"kld", mean_std_json(klds)},
                                {"table_mae", mean_std_json(maes)},
                                {"mean_table", io::grid_to_json(mean_table.grid())},
                                {"residuals", io::grid_to_json(joint::residuals(p, mean_table))},
                                {"mean_table_kld", io::number_or_null(joint::kld(p, mean_table, epsilon))},
                                {"mean_table_mae", joint::table_mae(p, mean_table)}});
        kld_groups.push_back(std::move(klds));
        kld_by_seed.push_back(std::move(by_seed));
    }

    json tests = json::array();
    {
        json t{{"scope", "global"}, {"groups", json::array()}};
        for (Strategy s : strategies) t["groups"].push_back(std::string(to_string(s)));
        try {
            t["result"] = io::to_json(stats::kruskal_wallis(kld_groups));
        } catch (const std::invalid_argument& e) {
            t["result"] = nullptr;
            t["warning"] = e.what();
        }
        tests.push_back(t);
    }

    // Pairwise signed-rank tests on seeds present for both strategies.
    struct Pair {
        std::size_t a, b;
        json doc;
        std::optional<double> p;
    };
    std::vector<Pair> pairs;
    for (std::size_t a = 0; a < strategies.size(); ++a) {
        for (std::size_t b = a + 1; b < strategies.size(); ++b) {
            std::vector<double> xa, xb;
            for (const auto& [seed, v] : kld_by_seed[a]) {
                auto it = kld_by_seed[b].find(seed);
                if (it == kld_by_seed[b].end()) continue;
                xa.push_back(v);
                xb.push_back(it->second);
            }
            json doc{{"scope", "pairwise"},
                     {"groups", {std::string(to_string(strategies[a])), std::string(to_string(strategies[b]))}},
                     {"paired_seeds", xa.size()}};
            std::optional<double> pv;
            try {
                const auto res = stats::wilcoxon_signed_rank(xa, xb);
                doc["result"] = io::to_json(res);
                doc["degenerate"] = !res.warning.empty();
                pv = res.p_value;
            } catch (const std::invalid_argument& e) {
                doc["result"] = nullptr;
                doc["degenerate"] = true;
                doc["warning"] = e.what();
            }
            pairs.push_back({a, b, std::move(doc), pv});
        }
    }
    std::vector<double> raw;
    for (const auto& pr : pairs)
        if (pr.p) raw.push_back(*pr.p);
    const auto adjusted = stats::holm_adjust(raw);
    std::size_t k = 0;
    for (auto& pr : pairs) {
        pr.doc["p_holm"] = pr.p ? json(adjusted[k++]) : json(nullptr);
        tests.push_back(std::move(pr.doc));
    }

    return {{"schema_version", io::kSchemaVersion},
            {"epsilon", epsilon},
            {"truth", {{"rows", truth.rows()}, {"cols", truth.cols()}, {"total", truth.total()},
                       {"distribution", io::grid_to_json(p.grid())}}},
            {"runs", run_docs},
            {"strategies", per_strategy},
            {"tests", tests}};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Soft-target ordinal classification toolkit", "ordsoft"};
    app.require_subcommand(1);
    SoftlabelArgs softlabels;
    SynthArgs synth_args;
    TrainArgs train_args;
    EvaluateArgs evaluate_args;
    SweepArgs sweep_args;
    AnalyzeArgs analyze_args;
    add_softlabels(app, softlabels);
    add_synth(app, synth_args);
    add_train(app, train_args);
    add_evaluate(app, evaluate_args);
    add_sweep(app, sweep_args);
    add_analyze(app, analyze_args);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        for (auto* sub : app.get_subcommands()) err << sub->help();
        if (app.get_subcommands().empty()) err << app.help();
        return kExitUsage;
    }

    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        if (name == "softlabels") return cmd_softlabels(softlabels, out);
        if (name == "synth") return cmd_synth(synth_args, out);
        if (name == "train") return cmd_train(train_args, out);
        if (name == "evaluate") return cmd_evaluate(evaluate_args, out);
        if (name == "sweep") return cmd_sweep(sweep_args, out);
        if (name == "analyze") return cmd_analyze(analyze_args, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << sub->help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    err << "error: unknown command\n";
    return kExitUsage;
}

}  // namespace ordsoft::cli
