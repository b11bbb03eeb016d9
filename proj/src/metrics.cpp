#include "ordsoft/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ordsoft::metrics {

namespace {

void require_samples(const ConfusionMatrix& cm, const char* what) {
    if (cm.total() <= 0) throw std::invalid_argument(std::string(what) + ": confusion matrix is empty");
}

std::vector<double> present_values(const std::vector<std::optional<double>>& values, const char* what) {
    std::vector<double> out;
    for (const auto& v : values)
        if (v) out.push_back(*v);
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": every class is empty");
    return out;
}

std::vector<std::optional<double>> per_class_recall(const ConfusionMatrix& cm) {
    std::vector<std::optional<double>> out(static_cast<std::size_t>(cm.classes()));
    for (int i = 0; i < cm.classes(); ++i) {
        const auto n = cm.row_total(i);
        if (n > 0) out[static_cast<std::size_t>(i)] = static_cast<double>(cm.at(i, i)) / static_cast<double>(n);
    }
    return out;
}

}  // namespace

double kappa_weight(int i, int j, int classes, double penalty_exponent) {
    return std::pow(std::abs(i - j), penalty_exponent) / std::pow(classes - 1, penalty_exponent);
}

std::optional<double> qwk(const ConfusionMatrix& cm, double penalty_exponent) {
    require_samples(cm, "qwk");
    const int J = cm.classes();
    const double n = static_cast<double>(cm.total());
    std::vector<double> rows(static_cast<std::size_t>(J)), cols(static_cast<std::size_t>(J));
    for (int i = 0; i < J; ++i) {
        rows[static_cast<std::size_t>(i)] = static_cast<double>(cm.row_total(i));
        cols[static_cast<std::size_t>(i)] = static_cast<double>(cm.col_total(i));
    }
    double observed = 0.0;
    double expected = 0.0;
    for (int i = 0; i < J; ++i) {
        for (int j = 0; j < J; ++j) {
            const double w = kappa_weight(i, j, J, penalty_exponent);
            observed += w * static_cast<double>(cm.at(i, j));
            expected += w * rows[static_cast<std::size_t>(i)] * cols[static_cast<std::size_t>(j)] / n;
        }
    }
    if (expected == 0.0) return std::nullopt;
    return 1.0 - observed / expected;
}

double mae(const ConfusionMatrix& cm) {
    require_samples(cm, "mae");
    double err = 0.0;
    for (int i = 0; i < cm.classes(); ++i)
        for (int j = 0; j < cm.classes(); ++j) err += std::abs(i - j) * static_cast<double>(cm.at(i, j));
    return err / static_cast<double>(cm.total());
}

std::vector<std::optional<double>> per_class_mae(const ConfusionMatrix& cm) {
    std::vector<std::optional<double>> out(static_cast<std::size_t>(cm.classes()));
    for (int i = 0; i < cm.classes(); ++i) {
        const auto n = cm.row_total(i);
        if (n == 0) continue;
        double err = 0.0;
        for (int j = 0; j < cm.classes(); ++j) err += std::abs(i - j) * static_cast<double>(cm.at(i, j));
        out[static_cast<std::size_t>(i)] = err / static_cast<double>(n);
    }
    return out;
}

double amae(const ConfusionMatrix& cm) {
    const auto v = present_values(per_class_mae(cm), "amae");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double mmae(const ConfusionMatrix& cm) {
    const auto v = present_values(per_class_mae(cm), "mmae");
    return *std::max_element(v.begin(), v.end());
}

double min_sensitivity(const ConfusionMatrix& cm) {
    const auto v = present_values(per_class_recall(cm), "min_sensitivity");
    return *std::min_element(v.begin(), v.end());
}

double balanced_accuracy(const ConfusionMatrix& cm) {
    const auto v = present_values(per_class_recall(cm), "balanced_accuracy");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

MetricReport evaluate(const ConfusionMatrix& cm) {
    MetricReport r;
    r.qwk = qwk(cm);
    r.mae = mae(cm);
    r.amae = amae(cm);
    r.mmae = mmae(cm);
    r.ms = min_sensitivity(cm);
    r.ba = balanced_accuracy(cm);
    r.per_class_mae = per_class_mae(cm);
    for (int i = 0; i < cm.classes(); ++i)
        if (cm.row_total(i) == 0) r.empty_classes.push_back(i);
    return r;
}

MetricReport evaluate(const PredictionSet& preds) {
    return evaluate(build_confusion(preds, LabelSpace(preds.classes())));
}

}  // namespace ordsoft::metrics
