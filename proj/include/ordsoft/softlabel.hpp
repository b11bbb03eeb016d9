#pragma once
// Unimodal soft targets and their blend with the one-hot label.

#include <span>
#include <vector>

#include "ordsoft/core.hpp"

namespace ordsoft::softlabel {

using ProbabilityVector = std::vector<double>;

// Hyperparameters of the labelling strategies. Only the fields used by the
// active strategy are validated.
struct SmoothingParams {
    double eta = 1.0;            // blend weight of the soft distribution
    double alpha = 0.05;         // triangular: mass given to each adjacent grade
    double p = 1.0;              // exponential: distance exponent
    double concentration = 10.0; // beta: concentration around the segment midpoint

    bool operator==(const SmoothingParams&) const = default;
};

void validate(Strategy strategy, const SmoothingParams& params);

// Discrete triangular mass: 1-2a at k and a at each neighbour (1-a / a at the ends).
ProbabilityVector triangular_row(int classes, int k, double alpha);

// Binomial(J-1, k/(J-1)) mass.
ProbabilityVector binomial_row(int classes, int k);

// Softmax of -|j-k|^p.
ProbabilityVector exponential_row(int classes, int k, double p);

// Beta c.d.f. differences over J equal segments of [0,1]; the density's mode
// sits at the midpoint of segment k.
ProbabilityVector beta_row(int classes, int k, double concentration);

// (1-lambda) one-hot + lambda uniform.
ProbabilityVector nominal_smooth_row(int classes, int k, double lambda);

// (1-eta) one-hot(k) + eta soft.
ProbabilityVector blend_ordinal_row(int k, std::span<const double> soft, double eta);

// J x J row-stochastic matrix; row k is the training target for grade k.
class SoftTargetMatrix {
public:
    SoftTargetMatrix(int classes, std::vector<double> rows, Strategy strategy, SmoothingParams params);

    int classes() const { return classes_; }
    Strategy strategy() const { return strategy_; }
    const SmoothingParams& params() const { return params_; }

    std::span<const double> row(int k) const {
        return {rows_.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(classes_),
                static_cast<std::size_t>(classes_)};
    }
    double at(int k, int j) const { return row(k)[static_cast<std::size_t>(j)]; }
    std::span<const double> data() const { return rows_; }

private:
    int classes_;
    std::vector<double> rows_;
    Strategy strategy_;
    SmoothingParams params_;
};

// Unblended distribution for the strategy (one-hot for nominal).
ProbabilityVector strategy_row(Strategy strategy, int classes, int k, const SmoothingParams& params);

SoftTargetMatrix build_target_matrix(const LabelSpace& space, Strategy strategy, const SmoothingParams& params);

// Checks used by tests and by the acceptance suite.
bool is_probability_vector(std::span<const double> v, double tol = 1e-9);
bool is_unimodal_at(std::span<const double> v, std::size_t mode);

}  // namespace ordsoft::softlabel
