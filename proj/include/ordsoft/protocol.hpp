#pragma once
// Multi-seed experimental protocol: split, search, evaluate, summarise.

#include <array>
#include <optional>
#include <string_view>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ordsoft/core.hpp"
#include "ordsoft/joint.hpp"
#include "ordsoft/metrics.hpp"
#include "ordsoft/trainer.hpp"

namespace ordsoft {

// One (task, seed, strategy) evaluation on the held-out split.
struct RunResult {
    std::string task;
    std::uint64_t seed = 0;
    Strategy strategy = Strategy::Nominal;
    TrainConfig chosen_config;
    double validation_amae = 0.0;
    double validation_mae = 0.0;
    metrics::MetricReport metrics;
    PredictionSet predictions;
    std::vector<std::size_t> test_indices;
};

struct ProtocolOptions {
    std::string task = "task";
    double train_fraction = 0.7;
    double validation_fraction = 0.3;
    SearchSpace space;
    TrainConfig base;                 // batch size, epochs, patience, architecture
    std::vector<std::uint64_t> seeds; // one run per seed per strategy
    int workers = 0;                  // 0: ORDSOFT_WORKERS or the OpenMP default
};

// root, root+1, ..., root+n-1.
std::vector<std::uint64_t> seed_sequence(std::uint64_t root, int n);

// Worker count from ORDSOFT_WORKERS, falling back to the OpenMP default.
int default_worker_count();

// Results are ordered by seed, then by strategy in the order given.
std::vector<RunResult> run_protocol(const SampleSet& data, int classes, std::span<const Strategy> strategies,
                                    const ProtocolOptions& options);

// Single seed of the protocol for one task.
std::vector<RunResult> run_seed(const SampleSet& data, int classes, std::span<const Strategy> strategies,
                                const ProtocolOptions& options, std::uint64_t seed);

struct JointRun {
    std::uint64_t seed = 0;
    Strategy strategy = Strategy::Nominal;
    joint::ContingencyTable predicted;
};

struct JointProtocolResult {
    std::vector<RunResult> runs_a;
    std::vector<RunResult> runs_b;
    std::vector<JointRun> tables;
};

// Two tasks sharing the same samples (and features). Each seed uses one split
// stratified on the A grades; the predicted contingency table of a strategy is
// built from its A and B test predictions.
JointProtocolResult run_joint_protocol(const SampleSet& task_a, const SampleSet& task_b, int classes_a,
                                       int classes_b, std::span<const Strategy> strategies,
                                       const ProtocolOptions& options, const std::string& task_b_name);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n-1); 0 for a single run
    std::size_t n = 0;
};

MeanStd mean_std(std::span<const double> values);

inline constexpr std::array<const char*, 6> kMetricNames{"qwk", "mae", "ms", "ba", "amae", "mmae"};

// One metric of a report by name; QWK may be undefined.
std::optional<double> metric_value(const metrics::MetricReport& report, std::string_view name);

struct SummaryRow {
    std::string task;
    std::string label;  // strategy name, or "average"
    std::array<MeanStd, 6> values;
};

// Per task: one row per strategy in first-seen order, then (with two or more
// strategies) an "average" row holding the mean of the strategy means and the
// mean of their deviations.
std::vector<SummaryRow> summarize(std::span<const RunResult> runs);

// Fixed-width text table with mean_{std} cells.
std::string format_summary(std::span<const SummaryRow> rows);

}  // namespace ordsoft
