#include "ordsoft/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ordsoft/csv.hpp"

namespace ordsoft {

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Nominal: return "nominal";
        case Strategy::Binomial: return "binomial";
        case Strategy::Beta: return "beta";
        case Strategy::Triangular: return "triangular";
        case Strategy::Exponential: return "exponential";
        case Strategy::NominalSmoothed: return "nominal_smoothed";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view name) {
    for (Strategy s : {Strategy::Nominal, Strategy::Binomial, Strategy::Beta, Strategy::Triangular,
                       Strategy::Exponential, Strategy::NominalSmoothed}) {
        if (to_string(s) == name) return s;
    }
    throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::vector<Strategy> all_strategies() {
    return {Strategy::Nominal, Strategy::Binomial, Strategy::Beta, Strategy::Triangular, Strategy::Exponential};
}

bool is_ordinal(Strategy s) {
    return s == Strategy::Binomial || s == Strategy::Beta || s == Strategy::Triangular ||
           s == Strategy::Exponential;
}

LabelSpace::LabelSpace(int classes) : classes_(classes) {
    if (classes < 2) throw std::invalid_argument("LabelSpace: need at least 2 grades");
}

void LabelSpace::check(int grade) const {
    if (!contains(grade)) {
        throw std::out_of_range("grade " + std::to_string(grade) + " outside 0.." + std::to_string(classes_ - 1));
    }
}

SampleSet::SampleSet(std::vector<double> features, std::vector<int> labels, std::size_t dims)
    : features_(std::move(features)), labels_(std::move(labels)), dims_(dims) {
    if (dims_ == 0 && !labels_.empty()) throw std::invalid_argument("SampleSet: zero feature dimensions");
    if (features_.size() != labels_.size() * dims_) {
        throw std::invalid_argument("SampleSet: feature matrix does not match label count");
    }
    for (double v : features_) {
        if (!std::isfinite(v)) throw std::invalid_argument("SampleSet: non-finite feature value");
    }
    for (int y : labels_) {
        if (y < 0) throw std::invalid_argument("SampleSet: negative label");
    }
}

int SampleSet::observed_classes() const {
    if (labels_.empty()) return 0;
    return *std::max_element(labels_.begin(), labels_.end()) + 1;
}

SampleSet SampleSet::subset(std::span<const std::size_t> indices) const {
    std::vector<double> feats;
    std::vector<int> labels;
    feats.reserve(indices.size() * dims_);
    labels.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= size()) throw std::out_of_range("SampleSet::subset: index out of range");
        auto r = row(i);
        feats.insert(feats.end(), r.begin(), r.end());
        labels.push_back(labels_[i]);
    }
    return SampleSet(std::move(feats), std::move(labels), dims_);
}

SampleSet SampleSet::with_labels(std::vector<int> labels) const {
    return SampleSet(features_, std::move(labels), dims_);
}

void SampleSet::check_labels(const LabelSpace& space) const {
    for (int y : labels_) space.check(y);
}

void SampleSet::write_csv(std::ostream& out) const {
    for (std::size_t j = 0; j < dims_; ++j) out << 'f' << j << ',';
    out << "label\n";
    for (std::size_t i = 0; i < size(); ++i) {
        for (double v : row(i)) out << csv::format_double(v) << ',';
        out << labels_[i] << '\n';
    }
}

SampleSet SampleSet::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("SampleSet CSV: missing header");
    auto header = csv::split(line);
    if (header.size() < 2 || header.back() != "label") {
        throw std::runtime_error("SampleSet CSV: header must be f0,...,f{d-1},label");
    }
    const std::size_t dims = header.size() - 1;
    for (std::size_t j = 0; j < dims; ++j) {
        if (header[j] != "f" + std::to_string(j)) {
            throw std::runtime_error("SampleSet CSV: unexpected column '" + header[j] + "'");
        }
    }
    std::vector<double> feats;
    std::vector<int> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = csv::split(line);
        if (cells.size() != dims + 1) {
            throw std::runtime_error("SampleSet CSV: line " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " + std::to_string(dims + 1));
        }
        for (std::size_t j = 0; j < dims; ++j) feats.push_back(csv::parse_double(cells[j]));
        labels.push_back(csv::parse_int(cells[dims]));
    }
    return SampleSet(std::move(feats), std::move(labels), dims);
}

void SampleSet::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_csv(out);
}

SampleSet SampleSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return read_csv(in);
}

ConfusionMatrix::ConfusionMatrix(int classes)
    : classes_(classes), counts_(static_cast<std::size_t>(classes) * static_cast<std::size_t>(classes), 0) {
    if (classes < 1) throw std::invalid_argument("ConfusionMatrix: need at least one class");
}

std::size_t ConfusionMatrix::index(int i, int j) const {
    if (i < 0 || i >= classes_ || j < 0 || j >= classes_) {
        throw std::out_of_range("ConfusionMatrix: grade out of range");
    }
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(classes_) + static_cast<std::size_t>(j);
}

void ConfusionMatrix::add(int truth, int predicted, std::int64_t count) {
    if (count < 0) throw std::invalid_argument("ConfusionMatrix: negative count");
    counts_[index(truth, predicted)] += count;
}

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::row_total(int truth) const {
    std::int64_t s = 0;
    for (int j = 0; j < classes_; ++j) s += at(truth, j);
    return s;
}

std::int64_t ConfusionMatrix::col_total(int predicted) const {
    std::int64_t s = 0;
    for (int i = 0; i < classes_; ++i) s += at(i, predicted);
    return s;
}

std::int64_t ConfusionMatrix::off_diagonal() const {
    std::int64_t s = 0;
    for (int i = 0; i < classes_; ++i)
        for (int j = 0; j < classes_; ++j)
            if (i != j) s += at(i, j);
    return s;
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

PredictionSet::PredictionSet(std::vector<int> true_labels, std::vector<double> probs, int classes)
    : true_labels_(std::move(true_labels)), probs_(std::move(probs)), classes_(classes) {
    if (classes_ < 2) throw std::invalid_argument("PredictionSet: need at least 2 classes");
    const auto j = static_cast<std::size_t>(classes_);
    if (probs_.size() != true_labels_.size() * j) {
        throw std::invalid_argument("PredictionSet: probability matrix does not match sample count");
    }
    predicted_labels_.reserve(true_labels_.size());
    for (std::size_t i = 0; i < true_labels_.size(); ++i) {
        auto r = probs_row(i);
        double sum = 0.0;
        for (double p : r) {
            if (!(p >= 0.0)) throw std::invalid_argument("PredictionSet: negative or NaN probability");
            sum += p;
        }
        if (std::fabs(sum - 1.0) > 1e-9) throw std::invalid_argument("PredictionSet: probability row does not sum to 1");
        predicted_labels_.push_back(static_cast<int>(argmax(r)));
    }
}

PredictionSet PredictionSet::from_labels(std::vector<int> true_labels, std::vector<int> predicted, int classes) {
    if (predicted.size() != true_labels.size()) {
        throw std::invalid_argument("PredictionSet: label vectors differ in length");
    }
    std::vector<double> probs(true_labels.size() * static_cast<std::size_t>(classes), 0.0);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] < 0 || predicted[i] >= classes) throw std::out_of_range("PredictionSet: predicted label out of range");
        probs[i * static_cast<std::size_t>(classes) + static_cast<std::size_t>(predicted[i])] = 1.0;
    }
    return PredictionSet(std::move(true_labels), std::move(probs), classes);
}

ConfusionMatrix build_confusion(std::span<const int> truth, std::span<const int> predicted, const LabelSpace& space) {
    if (truth.size() != predicted.size()) throw std::invalid_argument("build_confusion: length mismatch");
    ConfusionMatrix cm(space.size());
    for (std::size_t n = 0; n < truth.size(); ++n) {
        space.check(truth[n]);
        space.check(predicted[n]);
        cm.add(truth[n], predicted[n]);
    }
    return cm;
}

ConfusionMatrix build_confusion(const PredictionSet& preds, const LabelSpace& space) {
    return build_confusion(preds.true_labels(), preds.predicted_labels(), space);
}

std::vector<std::size_t> class_counts(std::span<const int> labels, int classes) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(classes), 0);
    for (int y : labels) {
        if (y < 0 || y >= classes) throw std::out_of_range("class_counts: label out of range");
        ++counts[static_cast<std::size_t>(y)];
    }
    return counts;
}

}  // namespace ordsoft
