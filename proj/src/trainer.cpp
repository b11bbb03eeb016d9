#include "ordsoft/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ordsoft/kernels.hpp"
#include "ordsoft/metrics.hpp"
#include "ordsoft/random.hpp"

namespace ordsoft {

std::vector<std::size_t> stratified_train_counts(std::span<const std::size_t> class_sizes, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("stratified_split: train fraction must lie in (0, 1)");
    }
    std::size_t total = 0;
    for (std::size_t c = 0; c < class_sizes.size(); ++c) {
        if (class_sizes[c] == 1) {
            throw std::invalid_argument("stratified_split: grade " + std::to_string(c) + " has a single sample");
        }
        total += class_sizes[c];
    }
    const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(total) * train_fraction));

    const std::size_t n = class_sizes.size();
    std::vector<std::size_t> counts(n), lo(n, 0), hi(n, 0);
    std::vector<double> quotas(n), remainders(n);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < n; ++c) {
        quotas[c] = static_cast<double>(class_sizes[c]) * train_fraction;
        // Nudge so quotas like 260.4 that land at 260.39999... floor correctly.
        const double whole = std::floor(quotas[c] + 1e-9);
        remainders[c] = std::max(0.0, quotas[c] - whole);
        if (class_sizes[c] > 0) {
            // Every present grade keeps at least one sample on each side.
            lo[c] = 1;
            hi[c] = class_sizes[c] - 1;
        }
        counts[c] = std::clamp<std::size_t>(static_cast<std::size_t>(whole), lo[c], hi[c]);
        assigned += counts[c];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (std::fabs(remainders[a] - remainders[b]) > 1e-9) return remainders[a] > remainders[b];
        return class_sizes[a] > class_sizes[b];
    });
    // First pass stays within one sample of each quota; the second only runs
    // when the bounds make that impossible.
    for (int strict = 1; strict >= 0 && assigned < target; --strict) {
        for (std::size_t c : order) {
            if (assigned == target) break;
            if (counts[c] >= hi[c]) continue;
            if (strict && static_cast<double>(counts[c]) >= quotas[c]) continue;
            ++counts[c];
            ++assigned;
        }
    }
    for (int strict = 1; strict >= 0 && assigned > target; --strict) {
        for (auto it = order.rbegin(); it != order.rend() && assigned > target; ++it) {
            const std::size_t c = *it;
            if (counts[c] <= lo[c]) continue;
            if (strict && static_cast<double>(counts[c]) <= quotas[c]) continue;
            --counts[c];
            --assigned;
        }
    }
    return counts;
}

Split stratified_split(std::span<const int> labels, double train_fraction, std::uint64_t seed) {
    if (labels.empty()) throw std::invalid_argument("stratified_split: no labels");
    int classes = 0;
    for (int y : labels) {
        if (y < 0) throw std::invalid_argument("stratified_split: negative label");
        classes = std::max(classes, y + 1);
    }
    const auto sizes = class_counts(labels, classes);
    const auto counts = stratified_train_counts(sizes, train_fraction);

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(classes));
    for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

    Split split;
    for (std::size_t c = 0; c < members.size(); ++c) {
        auto& m = members[c];
        Rng rng(derive_seed(seed, Stream::OuterSplit, c));
        std::shuffle(m.begin(), m.end(), rng);
        split.train.insert(split.train.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(counts[c]));
        split.holdout.insert(split.holdout.end(), m.begin() + static_cast<std::ptrdiff_t>(counts[c]), m.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.holdout.begin(), split.holdout.end());
    return split;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        // Zero is allowed for diagnostics; negative or NaN is not.
        if (learning_rate != 0.0) throw std::invalid_argument("TrainConfig: learning rate must be non-negative");
    }
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch size must be >= 1");
    if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
    if (patience < 1 || patience > max_epochs) throw std::invalid_argument("TrainConfig: need 1 <= patience <= max_epochs");
    if (architecture == Architecture::Mlp && hidden_width < 1) throw std::invalid_argument("TrainConfig: hidden width must be >= 1");
    softlabel::validate(strategy, params);
}

ClassifierModel make_model(const TrainConfig& config, const SampleSet& data, int classes) {
    ClassifierModel model(config.architecture, data.dims(), config.hidden_width, classes);
    model.fit_scaler(data);
    model.initialise(derive_seed(config.seed, Stream::Init));
    return model;
}

TrainedModel train(ClassifierModel model, const SampleSet& data, const softlabel::SoftTargetMatrix& targets,
                   const TrainConfig& config, const SampleSet& validation) {
    config.validate();
    if (data.empty()) throw std::invalid_argument("train: no training samples");
    if (validation.empty()) throw std::invalid_argument("train: no validation samples");
    const LabelSpace space(model.classes());
    data.check_labels(space);
    validation.check_labels(space);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(derive_seed(config.seed, Stream::Shuffle));
    std::vector<double> grad(model.parameter_count());
    std::vector<double> best_params(model.parameters().begin(), model.parameters().end());

    TrainedModel result{model, {}};
    double best = std::numeric_limits<double>::infinity();
    int stale = 0;
    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            std::span<const std::size_t> batch(order.data() + start, end - start);
            epoch_loss += kernels::loss_and_gradient(model, data, batch, targets, grad);
            const double step = config.learning_rate / static_cast<double>(batch.size());
            auto params = model.parameters();
            for (std::size_t p = 0; p < params.size(); ++p) params[p] -= step * grad[p];
        }
        epoch_loss /= static_cast<double>(data.size());
        const double val_loss = kernels::total_loss(model, validation, targets) / static_cast<double>(validation.size());
        if (!std::isfinite(epoch_loss) || !std::isfinite(val_loss) || !model.all_finite()) {
            throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) + " (train loss " +
                                   std::to_string(epoch_loss) + ", validation loss " + std::to_string(val_loss) +
                                   ", learning rate " + std::to_string(config.learning_rate) + ")");
        }
        result.history.epochs.push_back({epoch, epoch_loss, val_loss});
        if (val_loss < best) {
            best = val_loss;
            stale = 0;
            result.history.best_epoch = epoch;
            std::copy(model.parameters().begin(), model.parameters().end(), best_params.begin());
        } else if (++stale >= config.patience) {
            result.history.early_stopped = true;
            break;
        }
    }
    result.history.best_validation_loss = best;
    model.set_parameters(std::move(best_params));
    result.model = std::move(model);
    return result;
}

TrainedModel train(const TrainConfig& config, const SampleSet& data, const SampleSet& validation, int classes) {
    const auto targets = softlabel::build_target_matrix(LabelSpace(classes), config.strategy, config.params);
    return train(make_model(config, data, classes), data, targets, config, validation);
}

PredictionSet predict(const ClassifierModel& model, const SampleSet& data) {
    std::vector<int> truth(data.labels().begin(), data.labels().end());
    return PredictionSet(std::move(truth), kernels::predict_proba(model, data), model.classes());
}

void SearchSpace::validate() const {
    if (learning_rates.empty()) throw std::invalid_argument("SearchSpace: no learning rates");
    if (max_configs < 1) throw std::invalid_argument("SearchSpace: max_configs must be >= 1");
}

std::vector<TrainConfig> enumerate_grid(const SearchSpace& space, Strategy strategy, const TrainConfig& base) {
    space.validate();
    const std::vector<double> none{0.0};
    const bool uses_eta = strategy != Strategy::Nominal;
    const std::vector<double>& etas = uses_eta ? space.etas : none;
    const std::vector<double>* extra = &none;
    if (strategy == Strategy::Triangular) extra = &space.alphas;
    if (strategy == Strategy::Exponential) extra = &space.ps;
    if (strategy == Strategy::Beta) extra = &space.concentrations;
    if (etas.empty() || extra->empty()) {
        throw std::invalid_argument("SearchSpace: empty grid for strategy " + std::string(to_string(strategy)));
    }
    std::vector<TrainConfig> grid;
    for (double lr : space.learning_rates) {
        for (double eta : etas) {
            for (double v : *extra) {
                TrainConfig c = base;
                c.strategy = strategy;
                c.learning_rate = lr;
                c.params = base.params;
                if (uses_eta) c.params.eta = eta;
                if (strategy == Strategy::Triangular) c.params.alpha = v;
                if (strategy == Strategy::Exponential) c.params.p = v;
                if (strategy == Strategy::Beta) c.params.concentration = v;
                grid.push_back(c);
            }
        }
    }
    return grid;
}

std::vector<TrainConfig> sample_configs(const SearchSpace& space, Strategy strategy, const TrainConfig& base,
                                        std::uint64_t seed) {
    auto grid = enumerate_grid(space, strategy, base);
    if (grid.size() <= space.max_configs) return grid;
    Rng rng(derive_seed(seed, Stream::Search, static_cast<std::uint64_t>(strategy)));
    std::shuffle(grid.begin(), grid.end(), rng);
    grid.resize(space.max_configs);
    return grid;
}

std::size_t select_best(std::span<const CandidateResult> candidates) {
    if (candidates.empty()) throw std::invalid_argument("select_best: no candidates");
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        const auto& b = candidates[best];
        if (c.validation_amae != b.validation_amae) {
            if (c.validation_amae < b.validation_amae) best = i;
        } else if (c.validation_mae != b.validation_mae) {
            if (c.validation_mae < b.validation_mae) best = i;
        } else if (c.config.learning_rate < b.config.learning_rate) {
            best = i;
        }
    }
    return best;
}

SearchResult random_search(const SearchSpace& space, Strategy strategy, const TrainConfig& base, std::uint64_t seed,
                           const CandidateEvaluator& evaluate) {
    const auto configs = sample_configs(space, strategy, base, seed);
    SearchResult result;
    result.candidates.reserve(configs.size());
    for (const auto& c : configs) result.candidates.push_back(evaluate(c));
    const auto& winner = result.candidates[select_best(result.candidates)];
    result.best = winner.config;
    result.validation_amae = winner.validation_amae;
    result.validation_mae = winner.validation_mae;
    return result;
}

FittedSearch random_search(const SearchSpace& space, const SampleSet& fit, const SampleSet& validation, int classes,
                           Strategy strategy, const TrainConfig& base, std::uint64_t seed) {
    const LabelSpace labels(classes);
    std::vector<TrainedModel> models;
    auto evaluate = [&](const TrainConfig& config) {
        auto trained = train(config, fit, validation, classes);
        const auto cm = build_confusion(predict(trained.model, validation), labels);
        CandidateResult r{config, metrics::amae(cm), metrics::mae(cm), trained.history.best_epoch};
        models.push_back(std::move(trained));
        return r;
    };
    auto search = random_search(space, strategy, base, seed, evaluate);
    const auto winner = select_best(search.candidates);
    return FittedSearch{std::move(search), std::move(models[winner])};
}

FittedSearch random_search(const SearchSpace& space, const SampleSet& data, int classes, Strategy strategy,
                           const TrainConfig& base, std::uint64_t seed, double validation_fraction) {
    const auto split = stratified_split(data.labels(), 1.0 - validation_fraction, derive_seed(seed, Stream::InnerSplit));
    return random_search(space, data.subset(split.train), data.subset(split.holdout), classes, strategy, base, seed);
}

}  // namespace ordsoft
