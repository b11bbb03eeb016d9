#include "ordsoft/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ordsoft::loss {

namespace {

void check_target(std::span<const double> target) {
    double sum = 0.0;
    for (double t : target) {
        if (!(t >= 0.0)) throw std::invalid_argument("soft_ce: target has a negative entry");
        sum += t;
    }
    if (std::fabs(sum - 1.0) > 1e-6) throw std::invalid_argument("soft_ce: target not normalised");
}

}  // namespace

void softmax_into(std::span<const double> logits, std::span<double> out) {
    if (logits.empty() || out.size() != logits.size()) throw std::invalid_argument("softmax: size mismatch");
    const double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
        out[j] = std::exp(logits[j] - mx);
        sum += out[j];
    }
    for (double& v : out) v /= sum;
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> out(logits.size());
    softmax_into(logits, out);
    return out;
}

double soft_ce(std::span<const double> probs, std::span<const double> target) {
    if (probs.size() != target.size()) throw std::invalid_argument("soft_ce: size mismatch");
    check_target(target);
    double loss = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        if (target[j] == 0.0) continue;
        loss -= target[j] * std::log(std::max(probs[j], kProbabilityFloor));
    }
    return loss;
}

double soft_ce_from_logits(std::span<const double> logits, std::span<const double> target) {
    if (logits.size() != target.size() || logits.empty()) throw std::invalid_argument("soft_ce: size mismatch");
    const double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - mx);
    const double log_norm = mx + std::log(sum);
    double loss = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
        if (target[j] == 0.0) continue;
        loss -= target[j] * std::max(logits[j] - log_norm, std::log(kProbabilityFloor));
    }
    return loss;
}

std::vector<double> soft_ce_grad(std::span<const double> logits, std::span<const double> target) {
    if (logits.size() != target.size()) throw std::invalid_argument("soft_ce_grad: size mismatch");
    check_target(target);
    auto g = softmax(logits);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] -= target[j];
    return g;
}

double entropy(std::span<const double> dist) {
    double h = 0.0;
    for (double p : dist) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

}  // namespace ordsoft::loss
