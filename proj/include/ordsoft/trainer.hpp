#pragma once
// Stratified splitting, mini-batch training with early stopping, and
// randomised hyperparameter search with AMAE model selection.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordsoft/core.hpp"
#include "ordsoft/model.hpp"
#include "ordsoft/softlabel.hpp"

namespace ordsoft {

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> holdout;
};

// Per-class train counts: largest-remainder apportionment of N * fraction
// across classes (ties: larger class first, then lower grade), clamped so
// every class keeps at least one sample on each side. Indices come back sorted.
std::vector<std::size_t> stratified_train_counts(std::span<const std::size_t> class_sizes, double train_fraction);

Split stratified_split(std::span<const int> labels, double train_fraction, std::uint64_t seed);

struct TrainConfig {
    double learning_rate = 1e-2;
    std::size_t batch_size = 32;
    int max_epochs = 100;
    int patience = 40;
    Strategy strategy = Strategy::Nominal;
    softlabel::SmoothingParams params;
    std::uint64_t seed = 0;
    Architecture architecture = Architecture::Mlp;
    std::size_t hidden_width = 32;

    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double validation_loss = 0.0;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    int best_epoch = 0;
    double best_validation_loss = 0.0;
    bool early_stopped = false;
};

struct TrainedModel {
    ClassifierModel model;
    TrainHistory history;
};

class TrainingDiverged : public std::runtime_error {
public:
    explicit TrainingDiverged(const std::string& what) : std::runtime_error(what) {}
};

// Fresh model for `config`: scaler fitted on `data`, weights seeded from config.seed.
ClassifierModel make_model(const TrainConfig& config, const SampleSet& data, int classes);

// Mini-batch gradient descent on the mean soft cross-entropy. Each epoch
// reshuffles the rows; training stops after `patience` epochs without a
// strict decrease of the validation loss, and the best epoch's weights are
// returned.
TrainedModel train(ClassifierModel model, const SampleSet& data, const softlabel::SoftTargetMatrix& targets,
                   const TrainConfig& config, const SampleSet& validation);

// Convenience: builds the target matrix and model from the config.
TrainedModel train(const TrainConfig& config, const SampleSet& data, const SampleSet& validation, int classes);

PredictionSet predict(const ClassifierModel& model, const SampleSet& data);

struct SearchSpace {
    std::vector<double> learning_rates{1e-4, 1e-3, 1e-2};
    std::vector<double> etas{0.8, 1.0};
    std::vector<double> alphas{0.01, 0.05, 0.10};
    std::vector<double> ps{1.0, 1.5, 2.0};
    std::vector<double> concentrations{5.0, 10.0};
    std::size_t max_configs = 15;

    void validate() const;
};

// Every grid point for the strategy, in lexicographic order
// (learning rate, eta, strategy parameter). Other fields come from `base`.
std::vector<TrainConfig> enumerate_grid(const SearchSpace& space, Strategy strategy, const TrainConfig& base);

struct CandidateResult {
    TrainConfig config;
    double validation_amae = 0.0;
    double validation_mae = 0.0;
    int best_epoch = 0;
};

struct SearchResult {
    TrainConfig best;
    double validation_amae = 0.0;
    double validation_mae = 0.0;
    std::vector<CandidateResult> candidates;  // in sampling order
};

using CandidateEvaluator = std::function<CandidateResult(const TrainConfig&)>;

// Draws up to max_configs distinct grid points uniformly without replacement.
std::vector<TrainConfig> sample_configs(const SearchSpace& space, Strategy strategy, const TrainConfig& base,
                                        std::uint64_t seed);

// Lowest validation AMAE wins; ties go to lower MAE, then lower learning rate,
// then earlier sampling position.
std::size_t select_best(std::span<const CandidateResult> candidates);

SearchResult random_search(const SearchSpace& space, Strategy strategy, const TrainConfig& base, std::uint64_t seed,
                           const CandidateEvaluator& evaluate);

struct FittedSearch {
    SearchResult search;
    TrainedModel model;  // the winning configuration's trained model
};

// Trains every sampled configuration on `fit` and scores it on `validation`.
FittedSearch random_search(const SearchSpace& space, const SampleSet& fit, const SampleSet& validation, int classes,
                           Strategy strategy, const TrainConfig& base, std::uint64_t seed);

// Carves a stratified 30% validation split from `data` and runs the search.
FittedSearch random_search(const SearchSpace& space, const SampleSet& data, int classes, Strategy strategy,
                           const TrainConfig& base, std::uint64_t seed, double validation_fraction = 0.3);

}  // namespace ordsoft
