#include "ordsoft/softlabel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ordsoft/specfun.hpp"

namespace ordsoft::softlabel {

namespace {

void check_grade(int classes, int k) {
    if (classes < 2) throw std::invalid_argument("soft label: need at least 2 grades");
    if (k < 0 || k >= classes) throw std::out_of_range("soft label: grade outside 0..J-1");
}

}  // namespace

void validate(Strategy strategy, const SmoothingParams& params) {
    if (!(params.eta >= 0.0 && params.eta <= 1.0)) {
        throw std::invalid_argument("smoothing factor eta must lie in [0, 1]");
    }
    switch (strategy) {
        case Strategy::Triangular:
            if (!(params.alpha > 0.0 && params.alpha < 0.5)) {
                throw std::invalid_argument("triangular alpha must lie in (0, 0.5)");
            }
            break;
        case Strategy::Exponential:
            if (!(params.p > 0.0) || !std::isfinite(params.p)) {
                throw std::invalid_argument("exponential p must be positive");
            }
            break;
        case Strategy::Beta:
            if (!(params.concentration > 0.0) || !std::isfinite(params.concentration)) {
                throw std::invalid_argument("beta concentration must be positive");
            }
            break;
        default:
            break;
    }
}

ProbabilityVector triangular_row(int classes, int k, double alpha) {
    check_grade(classes, k);
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("triangular alpha must lie in (0, 0.5)");
    ProbabilityVector row(static_cast<std::size_t>(classes), 0.0);
    const bool boundary = k == 0 || k == classes - 1;
    row[static_cast<std::size_t>(k)] = boundary ? 1.0 - alpha : 1.0 - 2.0 * alpha;
    if (k > 0) row[static_cast<std::size_t>(k - 1)] = alpha;
    if (k < classes - 1) row[static_cast<std::size_t>(k + 1)] = alpha;
    return row;
}

ProbabilityVector binomial_row(int classes, int k) {
    check_grade(classes, k);
    const int n = classes - 1;
    ProbabilityVector row(static_cast<std::size_t>(classes), 0.0);
    if (k == 0 || k == n) {
        row[static_cast<std::size_t>(k)] = 1.0;
        return row;
    }
    const double t = static_cast<double>(k) / n;
    for (int j = 0; j <= n; ++j) {
        row[static_cast<std::size_t>(j)] =
            specfun::binomial_coefficient(n, j) * std::pow(t, j) * std::pow(1.0 - t, n - j);
    }
    return row;
}

ProbabilityVector exponential_row(int classes, int k, double p) {
    check_grade(classes, k);
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("exponential p must be positive");
    ProbabilityVector row(static_cast<std::size_t>(classes));
    // The largest logit is 0 (at j = k), so no max-shift is needed.
    double sum = 0.0;
    for (int j = 0; j < classes; ++j) {
        const double v = std::exp(-std::pow(std::abs(j - k), p));
        row[static_cast<std::size_t>(j)] = v;
        sum += v;
    }
    for (double& v : row) v /= sum;
    return row;
}

ProbabilityVector beta_row(int classes, int k, double concentration) {
    check_grade(classes, k);
    if (!(concentration > 0.0) || !std::isfinite(concentration)) {
        throw std::invalid_argument("beta concentration must be positive");
    }
    const double mid = (2.0 * k + 1.0) / (2.0 * classes);
    const double a = 1.0 + concentration * mid;
    const double b = 1.0 + concentration * (1.0 - mid);
    ProbabilityVector row(static_cast<std::size_t>(classes));
    double lower = 0.0;
    for (int j = 0; j < classes; ++j) {
        const double edge = j + 1 == classes ? 1.0 : static_cast<double>(j + 1) / classes;
        const double upper = specfun::reg_inc_beta(edge, a, b);
        row[static_cast<std::size_t>(j)] = std::max(0.0, upper - lower);
        lower = upper;
    }
    return row;
}

ProbabilityVector nominal_smooth_row(int classes, int k, double lambda) {
    check_grade(classes, k);
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
    ProbabilityVector row(static_cast<std::size_t>(classes), lambda / classes);
    row[static_cast<std::size_t>(k)] += 1.0 - lambda;
    return row;
}

ProbabilityVector blend_ordinal_row(int k, std::span<const double> soft, double eta) {
    if (k < 0 || static_cast<std::size_t>(k) >= soft.size()) throw std::out_of_range("blend: grade outside row");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
    if (!is_probability_vector(soft, 1e-6)) throw std::invalid_argument("blend: soft row is not a probability vector");
    ProbabilityVector row(soft.size());
    for (std::size_t j = 0; j < soft.size(); ++j) {
        row[j] = (static_cast<int>(j) == k ? 1.0 - eta : 0.0) + eta * soft[j];
    }
    return row;
}

SoftTargetMatrix::SoftTargetMatrix(int classes, std::vector<double> rows, Strategy strategy, SmoothingParams params)
    : classes_(classes), rows_(std::move(rows)), strategy_(strategy), params_(params) {
    if (classes_ < 2) throw std::invalid_argument("SoftTargetMatrix: need at least 2 grades");
    if (rows_.size() != static_cast<std::size_t>(classes_) * static_cast<std::size_t>(classes_)) {
        throw std::invalid_argument("SoftTargetMatrix: expected J x J entries");
    }
    for (int k = 0; k < classes_; ++k) {
        if (!is_probability_vector(row(k))) {
            throw std::invalid_argument("SoftTargetMatrix: row " + std::to_string(k) + " is not a probability vector");
        }
    }
}

ProbabilityVector strategy_row(Strategy strategy, int classes, int k, const SmoothingParams& params) {
    switch (strategy) {
        case Strategy::Nominal: return nominal_smooth_row(classes, k, 0.0);
        case Strategy::NominalSmoothed: return nominal_smooth_row(classes, k, 1.0);
        case Strategy::Binomial: return binomial_row(classes, k);
        case Strategy::Beta: return beta_row(classes, k, params.concentration);
        case Strategy::Triangular: return triangular_row(classes, k, params.alpha);
        case Strategy::Exponential: return exponential_row(classes, k, params.p);
    }
    throw std::invalid_argument("unknown strategy");
}

SoftTargetMatrix build_target_matrix(const LabelSpace& space, Strategy strategy, const SmoothingParams& params) {
    validate(strategy, params);
    const int classes = space.size();
    std::vector<double> rows;
    rows.reserve(static_cast<std::size_t>(classes) * static_cast<std::size_t>(classes));
    for (int k = 0; k < classes; ++k) {
        ProbabilityVector r;
        if (strategy == Strategy::Nominal) {
            r = nominal_smooth_row(classes, k, 0.0);
        } else if (strategy == Strategy::NominalSmoothed) {
            r = nominal_smooth_row(classes, k, params.eta);
        } else {
            r = blend_ordinal_row(k, strategy_row(strategy, classes, k, params), params.eta);
        }
        rows.insert(rows.end(), r.begin(), r.end());
    }
    return SoftTargetMatrix(classes, std::move(rows), strategy, params);
}

bool is_probability_vector(std::span<const double> v, double tol) {
    double sum = 0.0;
    for (double x : v) {
        if (!(x >= 0.0) || !std::isfinite(x)) return false;
        sum += x;
    }
    return std::fabs(sum - 1.0) <= tol;
}

bool is_unimodal_at(std::span<const double> v, std::size_t mode) {
    if (mode >= v.size()) return false;
    for (std::size_t j = mode; j + 1 < v.size(); ++j) {
        if (v[j + 1] > v[j]) return false;
    }
    for (std::size_t j = mode; j > 0; --j) {
        if (v[j - 1] > v[j]) return false;
    }
    return true;
}

}  // namespace ordsoft::softlabel
