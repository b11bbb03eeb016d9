#include "ordsoft/json_io.hpp"

#include <cmath>

namespace ordsoft::io {

json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json to_json(const softlabel::SmoothingParams& p) {
    return {{"eta", p.eta}, {"alpha", p.alpha}, {"p", p.p}, {"concentration", p.concentration}};
}

softlabel::SmoothingParams smoothing_from_json(const json& j, softlabel::SmoothingParams base) {
    base.eta = j.value("eta", base.eta);
    base.alpha = j.value("alpha", base.alpha);
    base.p = j.value("p", base.p);
    base.concentration = j.value("concentration", base.concentration);
    return base;
}

json to_json(const TrainConfig& c) {
    return {{"learning_rate", c.learning_rate},
            {"batch_size", c.batch_size},
            {"max_epochs", c.max_epochs},
            {"patience", c.patience},
            {"strategy", std::string(to_string(c.strategy))},
            {"params", to_json(c.params)},
            {"seed", c.seed},
            {"architecture", std::string(to_string(c.architecture))},
            {"hidden_width", c.hidden_width}};
}

TrainConfig train_config_from_json(const json& j, TrainConfig base) {
    base.learning_rate = j.value("learning_rate", base.learning_rate);
    base.batch_size = j.value("batch_size", base.batch_size);
    base.max_epochs = j.value("max_epochs", base.max_epochs);
    base.patience = j.value("patience", base.patience);
    if (j.contains("strategy")) base.strategy = parse_strategy(j.at("strategy").get<std::string>());
    if (j.contains("params")) base.params = smoothing_from_json(j.at("params"), base.params);
    base.seed = j.value("seed", base.seed);
    if (j.contains("architecture")) base.architecture = parse_architecture(j.at("architecture").get<std::string>());
    base.hidden_width = j.value("hidden_width", base.hidden_width);
    return base;
}

json to_json(const SearchSpace& s) {
    return {{"learning_rates", s.learning_rates}, {"etas", s.etas},
            {"alphas", s.alphas},                 {"ps", s.ps},
            {"concentrations", s.concentrations}, {"max_configs", s.max_configs}};
}

SearchSpace search_space_from_json(const json& j, SearchSpace base) {
    base.learning_rates = j.value("learning_rates", base.learning_rates);
    base.etas = j.value("etas", base.etas);
    base.alphas = j.value("alphas", base.alphas);
    base.ps = j.value("ps", base.ps);
    base.concentrations = j.value("concentrations", base.concentrations);
    base.max_configs = j.value("max_configs", base.max_configs);
    base.validate();
    return base;
}

json to_json(const metrics::MetricReport& r) {
    json per_class = json::array();
    for (const auto& v : r.per_class_mae) per_class.push_back(v ? json(*v) : json(nullptr));
    return {{"qwk", r.qwk ? json(*r.qwk) : json(nullptr)},
            {"mae", r.mae},
            {"amae", r.amae},
            {"mmae", r.mmae},
            {"ms", r.ms},
            {"ba", r.ba},
            {"per_class_mae", per_class},
            {"empty_classes", r.empty_classes}};
}

metrics::MetricReport metric_report_from_json(const json& j) {
    metrics::MetricReport r;
    if (!j.at("qwk").is_null()) r.qwk = j.at("qwk").get<double>();
    r.mae = j.at("mae").get<double>();
    r.amae = j.at("amae").get<double>();
    r.mmae = j.at("mmae").get<double>();
    r.ms = j.at("ms").get<double>();
    r.ba = j.at("ba").get<double>();
    for (const auto& v : j.at("per_class_mae")) {
        r.per_class_mae.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
    }
    r.empty_classes = j.value("empty_classes", std::vector<int>{});
    return r;
}

json to_json(const stats::TestResult& t) {
    json j{{"method", std::string(stats::to_string(t.method))},
           {"statistic", number_or_null(t.statistic)},
           {"p_value", t.p_value},
           {"n", t.n}};
    if (t.df) j["df"] = *t.df;
    if (!t.warning.empty()) j["warning"] = t.warning;
    return j;
}

json to_json(const stats::AnovaTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        rows.push_back({{"source", r.source},
                        {"ss", r.ss},
                        {"df", r.df},
                        {"f", r.f ? json(*r.f) : json(nullptr)},
                        {"p_value", r.p_value ? json(*r.p_value) : json(nullptr)}});
    }
    return {{"rows", rows}, {"ss_total", t.ss_total}, {"zero_residual_variance", t.zero_residual_variance}};
}

json to_json(const TrainHistory& h) {
    json epochs = json::array();
    for (const auto& e : h.epochs) {
        epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"validation_loss", e.validation_loss}});
    }
    return {{"epochs", epochs},
            {"best_epoch", h.best_epoch},
            {"best_validation_loss", number_or_null(h.best_validation_loss)},
            {"early_stopped", h.early_stopped}};
}

json to_json(const ClassifierModel& m) {
    return {{"schema_version", kSchemaVersion},
            {"architecture", std::string(to_string(m.architecture()))},
            {"inputs", m.inputs()},
            {"hidden", m.hidden()},
            {"classes", m.classes()},
            {"input_mean", std::vector<double>(m.input_mean().begin(), m.input_mean().end())},
            {"input_scale", std::vector<double>(m.input_scale().begin(), m.input_scale().end())},
            {"parameters", std::vector<double>(m.parameters().begin(), m.parameters().end())}};
}

ClassifierModel model_from_json(const json& j) {
    ClassifierModel m(parse_architecture(j.at("architecture").get<std::string>()), j.at("inputs").get<std::size_t>(),
                      j.at("hidden").get<std::size_t>(), j.at("classes").get<int>());
    m.set_scaler(j.at("input_mean").get<std::vector<double>>(), j.at("input_scale").get<std::vector<double>>());
    m.set_parameters(j.at("parameters").get<std::vector<double>>());
    return m;
}

json to_json(const RunResult& r, bool with_probabilities) {
    json preds{{"true", std::vector<int>(r.predictions.true_labels().begin(), r.predictions.true_labels().end())},
               {"predicted",
                std::vector<int>(r.predictions.predicted_labels().begin(), r.predictions.predicted_labels().end())}};
    if (with_probabilities) {
        preds["probabilities"] = std::vector<double>(r.predictions.probs().begin(), r.predictions.probs().end());
    }
    return {{"schema_version", kSchemaVersion},
            {"task", r.task},
            {"seed", r.seed},
            {"strategy", std::string(to_string(r.strategy))},
            {"classes", r.predictions.classes()},
            {"config", to_json(r.chosen_config)},
            {"validation_amae", r.validation_amae},
            {"validation_mae", r.validation_mae},
            {"metrics", to_json(r.metrics)},
            {"test_indices", r.test_indices},
            {"predictions", preds}};
}

RunResult run_result_from_json(const json& j) {
    RunResult r;
    r.task = j.at("task").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.strategy = parse_strategy(j.at("strategy").get<std::string>());
    r.chosen_config = train_config_from_json(j.at("config"));
    r.validation_amae = j.at("validation_amae").get<double>();
    r.validation_mae = j.at("validation_mae").get<double>();
    r.metrics = metric_report_from_json(j.at("metrics"));
    r.test_indices = j.value("test_indices", std::vector<std::size_t>{});
    const int classes = j.at("classes").get<int>();
    const auto& p = j.at("predictions");
    auto truth = p.at("true").get<std::vector<int>>();
    if (p.contains("probabilities")) {
        r.predictions = PredictionSet(std::move(truth), p.at("probabilities").get<std::vector<double>>(), classes);
    } else {
        r.predictions = PredictionSet::from_labels(std::move(truth), p.at("predicted").get<std::vector<int>>(), classes);
    }
    return r;
}

json to_json(const synth::SynthSpec& s) {
    return {{"classes", s.classes},
            {"n_per_class", s.n_per_class},
            {"dims", s.dims},
            {"class_separation", s.class_separation},
            {"noise_sd", s.noise_sd},
            {"adjacent_flip_prob", s.adjacent_flip_prob},
            {"seed", s.seed}};
}

synth::SynthSpec synth_spec_from_json(const json& j, synth::SynthSpec base) {
    base.classes = j.value("classes", base.classes);
    base.n_per_class = j.value("n_per_class", base.n_per_class);
    base.dims = j.value("dims", base.dims);
    base.class_separation = j.value("class_separation", base.class_separation);
    base.noise_sd = j.value("noise_sd", base.noise_sd);
    base.adjacent_flip_prob = j.value("adjacent_flip_prob", base.adjacent_flip_prob);
    base.seed = j.value("seed", base.seed);
    base.validate();
    return base;
}

json to_json(const synth::PairedSampleSpec& s) {
    return {{"classes_a", s.grades.classes_a},
            {"classes_b", s.grades.classes_b},
            {"n", s.grades.n},
            {"marginal_a", s.grades.marginal_a},
            {"low_grade_concentration", s.grades.low_grade_concentration},
            {"high_grade_spread", s.grades.high_grade_spread},
            {"dims", s.dims},
            {"separation_a", s.separation_a},
            {"separation_b", s.separation_b},
            {"noise_sd", s.noise_sd},
            {"adjacent_flip_prob", s.adjacent_flip_prob},
            {"seed", s.seed}};
}

synth::PairedSampleSpec paired_spec_from_json(const json& j, synth::PairedSampleSpec base) {
    base.grades.classes_a = j.value("classes_a", base.grades.classes_a);
    base.grades.classes_b = j.value("classes_b", base.grades.classes_b);
    base.grades.n = j.value("n", base.grades.n);
    base.grades.marginal_a = j.value("marginal_a", base.grades.marginal_a);
    base.grades.low_grade_concentration = j.value("low_grade_concentration", base.grades.low_grade_concentration);
    base.grades.high_grade_spread = j.value("high_grade_spread", base.grades.high_grade_spread);
    base.dims = j.value("dims", base.dims);
    base.separation_a = j.value("separation_a", base.separation_a);
    base.separation_b = j.value("separation_b", base.separation_b);
    base.noise_sd = j.value("noise_sd", base.noise_sd);
    base.adjacent_flip_prob = j.value("adjacent_flip_prob", base.adjacent_flip_prob);
    base.seed = j.value("seed", base.seed);
    base.grades.seed = base.seed;
    base.validate();
    return base;
}

json to_json(const SummaryRow& row) {
    json values = json::object();
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
        values[kMetricNames[m]] = {{"mean", row.values[m].mean}, {"std", row.values[m].std}, {"n", row.values[m].n}};
    }
    return {{"task", row.task}, {"label", row.label}, {"metrics", values}};
}

json grid_to_json(const joint::Grid& g) {
    json rows = json::array();
    for (int i = 0; i < g.rows; ++i) {
        json r = json::array();
        for (int j = 0; j < g.cols; ++j) r.push_back(g.at(i, j));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace ordsoft::io
