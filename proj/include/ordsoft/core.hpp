#pragma once
// Domain types shared by every module: label spaces, sample sets,
// confusion matrices and prediction records.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ordsoft {

// Labelling strategy used to build supervision targets.
// NominalSmoothed is the uniform-smoothing ablation, not one of the
// unimodal strategies.
enum class Strategy { Nominal, Binomial, Beta, Triangular, Exponential, NominalSmoothed };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

// Nominal plus the four unimodal strategies, in reporting order.
std::vector<Strategy> all_strategies();

// True for the unimodal (ordinal) strategies.
bool is_ordinal(Strategy s);

// Ordered grade set with grades indexed 0..J-1.
class LabelSpace {
public:
    explicit LabelSpace(int classes);

    int size() const { return classes_; }
    bool contains(int grade) const { return grade >= 0 && grade < classes_; }
    void check(int grade) const;

private:
    int classes_;
};

// N x d feature matrix (row-major) with one grade label per row.
class SampleSet {
public:
    SampleSet() = default;
    SampleSet(std::vector<double> features, std::vector<int> labels, std::size_t dims);

    std::size_t size() const { return labels_.size(); }
    std::size_t dims() const { return dims_; }
    bool empty() const { return labels_.empty(); }

    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * dims_, dims_};
    }
    std::span<const double> features() const { return features_; }
    std::span<const int> labels() const { return labels_; }
    int label(std::size_t i) const { return labels_[i]; }

    // Highest label + 1; 0 for an empty set.
    int observed_classes() const;

    // Rows selected by index, in the order given.
    SampleSet subset(std::span<const std::size_t> indices) const;

    // Same features, different labels.
    SampleSet with_labels(std::vector<int> labels) const;

    void check_labels(const LabelSpace& space) const;

    // CSV with header f0,...,f{d-1},label.
    void write_csv(std::ostream& out) const;
    static SampleSet read_csv(std::istream& in);
    void save(const std::string& path) const;
    static SampleSet load(const std::string& path);

private:
    std::vector<double> features_;
    std::vector<int> labels_;
    std::size_t dims_ = 0;
};

// J x J counts; rows are true grades, columns predicted grades.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int classes);

    int classes() const { return classes_; }
    std::int64_t at(int truth, int predicted) const { return counts_[index(truth, predicted)]; }
    void add(int truth, int predicted, std::int64_t count = 1);

    std::int64_t total() const;
    std::int64_t row_total(int truth) const;
    std::int64_t col_total(int predicted) const;
    std::int64_t off_diagonal() const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t index(int i, int j) const;

    int classes_;
    std::vector<std::int64_t> counts_;
};

// Per-sample predictions with class probabilities (N x J, row-major).
class PredictionSet {
public:
    PredictionSet() = default;

    // Labels are derived from the probabilities by argmax.
    PredictionSet(std::vector<int> true_labels, std::vector<double> probs, int classes);

    // Labels only; probabilities are one-hot on the predicted label.
    static PredictionSet from_labels(std::vector<int> true_labels, std::vector<int> predicted, int classes);

    std::size_t size() const { return true_labels_.size(); }
    int classes() const { return classes_; }
    std::span<const int> true_labels() const { return true_labels_; }
    std::span<const int> predicted_labels() const { return predicted_labels_; }
    std::span<const double> probs() const { return probs_; }
    std::span<const double> probs_row(std::size_t i) const {
        return {probs_.data() + i * static_cast<std::size_t>(classes_), static_cast<std::size_t>(classes_)};
    }

private:
    std::vector<int> true_labels_;
    std::vector<int> predicted_labels_;
    std::vector<double> probs_;
    int classes_ = 0;
};

// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

ConfusionMatrix build_confusion(const PredictionSet& preds, const LabelSpace& space);
ConfusionMatrix build_confusion(std::span<const int> truth, std::span<const int> predicted, const LabelSpace& space);

// Sample count per grade.
std::vector<std::size_t> class_counts(std::span<const int> labels, int classes);

}  // namespace ordsoft
