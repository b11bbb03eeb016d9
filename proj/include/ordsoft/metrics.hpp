#pragma once
// Ordinal evaluation measures computed from a confusion matrix.

#include <optional>
#include <vector>

#include "ordsoft/core.hpp"

namespace ordsoft::metrics {

// Agreement and error measures for one evaluation. Classes absent from the
// evaluated samples are excluded from the class-averaged measures and listed
// in `empty_classes`.
struct MetricReport {
    std::optional<double> qwk;  // empty when the expected disagreement is zero
    double mae = 0.0;
    double amae = 0.0;
    double mmae = 0.0;
    double ms = 0.0;
    double ba = 0.0;
    std::vector<std::optional<double>> per_class_mae;
    std::vector<int> empty_classes;
};

// Weighted kappa with penalty |i-j|^n / (J-1)^n. Empty optional when the
// denominator vanishes (degenerate marginals).
std::optional<double> qwk(const ConfusionMatrix& cm, double penalty_exponent = 2.0);

// Penalty weight |i-j|^n / (J-1)^n.
double kappa_weight(int i, int j, int classes, double penalty_exponent = 2.0);

double mae(const ConfusionMatrix& cm);

// Mean absolute error of each class; empty for classes with no samples.
std::vector<std::optional<double>> per_class_mae(const ConfusionMatrix& cm);

double amae(const ConfusionMatrix& cm);
double mmae(const ConfusionMatrix& cm);
double min_sensitivity(const ConfusionMatrix& cm);
double balanced_accuracy(const ConfusionMatrix& cm);

MetricReport evaluate(const ConfusionMatrix& cm);
MetricReport evaluate(const PredictionSet& preds);

}  // namespace ordsoft::metrics
