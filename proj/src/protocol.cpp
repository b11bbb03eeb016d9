#include "ordsoft/protocol.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "ordsoft/random.hpp"

namespace ordsoft {

namespace {

struct SeedSplits {
    SampleSet fit;
    SampleSet validation;
    SampleSet test;
    std::vector<std::size_t> test_indices;
    std::vector<std::size_t> fit_indices;
    std::vector<std::size_t> validation_indices;
};

SeedSplits make_splits(const SampleSet& data, std::span<const int> strata, const ProtocolOptions& options,
                       std::uint64_t seed) {
    const auto outer = stratified_split(strata, options.train_fraction, derive_seed(seed, Stream::OuterSplit));
    std::vector<int> train_strata;
    train_strata.reserve(outer.train.size());
    for (auto i : outer.train) train_strata.push_back(strata[i]);
    const auto inner =
        stratified_split(train_strata, 1.0 - options.validation_fraction, derive_seed(seed, Stream::InnerSplit));
    SeedSplits s;
    for (auto i : inner.train) s.fit_indices.push_back(outer.train[i]);
    for (auto i : inner.holdout) s.validation_indices.push_back(outer.train[i]);
    s.test_indices = outer.holdout;
    s.fit = data.subset(s.fit_indices);
    s.validation = data.subset(s.validation_indices);
    s.test = data.subset(s.test_indices);
    return s;
}

RunResult evaluate_strategy(const SeedSplits& splits, int classes, Strategy strategy, const ProtocolOptions& options,
                            std::uint64_t seed) {
    TrainConfig base = options.base;
    base.seed = seed;
    auto fitted = random_search(options.space, splits.fit, splits.validation, classes, strategy, base, seed);
    RunResult r;
    r.task = options.task;
    r.seed = seed;
    r.strategy = strategy;
    r.chosen_config = fitted.search.best;
    r.validation_amae = fitted.search.validation_amae;
    r.validation_mae = fitted.search.validation_mae;
    r.predictions = predict(fitted.model.model, splits.test);
    r.metrics = metrics::evaluate(build_confusion(r.predictions, LabelSpace(classes)));
    r.test_indices = splits.test_indices;
    return r;
}

template <typename Fn>
void for_each_seed(std::size_t count, int workers, Fn&& fn) {
    std::vector<std::exception_ptr> errors(count);
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long long i = 0; i < n; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

int resolve_workers(int requested) {
    return requested > 0 ? requested : default_worker_count();
}

}  // namespace

std::vector<std::uint64_t> seed_sequence(std::uint64_t root, int n) {
    if (n < 1) throw std::invalid_argument("n_seeds must be >= 1");
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < n; ++i) seeds.push_back(root + static_cast<std::uint64_t>(i));
    return seeds;
}

int default_worker_count() {
    if (const char* env = std::getenv("ORDSOFT_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return omp_get_max_threads();
}

std::vector<RunResult> run_seed(const SampleSet& data, int classes, std::span<const Strategy> strategies,
                                const ProtocolOptions& options, std::uint64_t seed) {
    const auto splits = make_splits(data, data.labels(), options, seed);
    std::vector<RunResult> out;
    for (Strategy s : strategies) out.push_back(evaluate_strategy(splits, classes, s, options, seed));
    return out;
}

std::vector<RunResult> run_protocol(const SampleSet& data, int classes, std::span<const Strategy> strategies,
                                    const ProtocolOptions& options) {
    if (options.seeds.empty()) throw std::invalid_argument("run_protocol: no seeds");
    if (strategies.empty()) throw std::invalid_argument("run_protocol: no strategies");
    data.check_labels(LabelSpace(classes));
    std::vector<std::vector<RunResult>> per_seed(options.seeds.size());
    for_each_seed(options.seeds.size(), resolve_workers(options.workers), [&](std::size_t i) {
        per_seed[i] = run_seed(data, classes, strategies, options, options.seeds[i]);
    });
    std::vector<RunResult> out;
    for (auto& v : per_seed)
        for (auto& r : v) out.push_back(std::move(r));
    return out;
}

JointProtocolResult run_joint_protocol(const SampleSet& task_a, const SampleSet& task_b, int classes_a,
                                       int classes_b, std::span<const Strategy> strategies,
                                       const ProtocolOptions& options, const std::string& task_b_name) {
    if (options.seeds.empty()) throw std::invalid_argument("run_joint_protocol: no seeds");
    if (task_a.size() != task_b.size() || task_a.dims() != task_b.dims() ||
        !std::equal(task_a.features().begin(), task_a.features().end(), task_b.features().begin())) {
        throw std::invalid_argument("run_joint_protocol: the two tasks must share their samples");
    }
    task_a.check_labels(LabelSpace(classes_a));
    task_b.check_labels(LabelSpace(classes_b));
    ProtocolOptions options_b = options;
    options_b.task = task_b_name;

    struct SeedOutput {
        std::vector<RunResult> a, b;
        std::vector<JointRun> tables;
    };
    std::vector<SeedOutput> per_seed(options.seeds.size());
    for_each_seed(options.seeds.size(), resolve_workers(options.workers), [&](std::size_t i) {
        const auto seed = options.seeds[i];
        const auto splits_a = make_splits(task_a, task_a.labels(), options, seed);
        SeedSplits splits_b{task_b.subset(splits_a.fit_indices), task_b.subset(splits_a.validation_indices),
                            task_b.subset(splits_a.test_indices), splits_a.test_indices, splits_a.fit_indices,
                            splits_a.validation_indices};
        auto& out = per_seed[i];
        for (Strategy s : strategies) {
            auto ra = evaluate_strategy(splits_a, classes_a, s, options, seed);
            auto rb = evaluate_strategy(splits_b, classes_b, s, options_b, seed);
            out.tables.push_back({seed, s,
                                  joint::ContingencyTable::from_pairs(ra.predictions.predicted_labels(),
                                                                      rb.predictions.predicted_labels(), classes_a,
                                                                      classes_b)});
            out.a.push_back(std::move(ra));
            out.b.push_back(std::move(rb));
        }
    });
    JointProtocolResult result;
    for (auto& s : per_seed) {
        for (auto& r : s.a) result.runs_a.push_back(std::move(r));
        for (auto& r : s.b) result.runs_b.push_back(std::move(r));
        for (auto& t : s.tables) result.tables.push_back(std::move(t));
    }
    return result;
}

MeanStd mean_std(std::span<const double> values) {
    MeanStd m;
    m.n = values.size();
    if (values.empty()) return m;
    double s = 0.0;
    for (double v : values) s += v;
    m.mean = s / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - m.mean) * (v - m.mean);
        m.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return m;
}

std::optional<double> metric_value(const metrics::MetricReport& report, std::string_view name) {
    if (name == "qwk") return report.qwk;
    if (name == "mae") return report.mae;
    if (name == "ms") return report.ms;
    if (name == "ba") return report.ba;
    if (name == "amae") return report.amae;
    if (name == "mmae") return report.mmae;
    throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

std::vector<SummaryRow> summarize(std::span<const RunResult> runs) {
    std::vector<std::string> tasks;
    for (const auto& r : runs)
        if (std::find(tasks.begin(), tasks.end(), r.task) == tasks.end()) tasks.push_back(r.task);

    std::vector<SummaryRow> rows;
    for (const auto& task : tasks) {
        std::vector<Strategy> order;
        for (const auto& r : runs)
            if (r.task == task && std::find(order.begin(), order.end(), r.strategy) == order.end())
                order.push_back(r.strategy);
        SummaryRow average{task, "average", {}};
        for (Strategy s : order) {
            SummaryRow row{task, std::string(to_string(s)), {}};
            for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
                std::vector<double> values;
                for (const auto& r : runs) {
                    if (r.task != task || r.strategy != s) continue;
                    if (auto v = metric_value(r.metrics, kMetricNames[m])) values.push_back(*v);
                }
                row.values[m] = mean_std(values);
                average.values[m].mean += row.values[m].mean / static_cast<double>(order.size());
                average.values[m].std += row.values[m].std / static_cast<double>(order.size());
                average.values[m].n += row.values[m].n;
            }
            rows.push_back(std::move(row));
        }
        if (order.size() > 1) rows.push_back(std::move(average));
    }
    return rows;
}

std::string format_summary(std::span<const SummaryRow> rows) {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-10s %-12s", "task", "strategy");
    out << buf;
    for (const char* name : kMetricNames) {
        std::string upper(name);
        for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        std::snprintf(buf, sizeof buf, " %-15s", upper.c_str());
        out << buf;
    }
    out << '\n';
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%-10s %-12s", row.task.c_str(), row.label.c_str());
        out << buf;
        for (const auto& v : row.values) {
            std::snprintf(buf, sizeof buf, " %.3f_{%.3f}", v.mean, v.std);
            std::string cell(buf);
            cell.resize(std::max<std::size_t>(cell.size(), 16), ' ');
            out << cell;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace ordsoft
