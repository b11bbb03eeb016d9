#pragma once
// Softmax and the soft-target cross-entropy with its logit gradient.

#include <span>
#include <vector>

namespace ordsoft::loss {

// Floor applied to probabilities before taking the logarithm.
inline constexpr double kProbabilityFloor = 1e-12;

std::vector<double> softmax(std::span<const double> logits);
void softmax_into(std::span<const double> logits, std::span<double> out);

// -sum_j target[j] log(max(probs[j], floor)).
double soft_ce(std::span<const double> probs, std::span<const double> target);

// Cross-entropy evaluated from logits (log-softmax form, no floor needed).
double soft_ce_from_logits(std::span<const double> logits, std::span<const double> target);

// softmax(logits) - target.
std::vector<double> soft_ce_grad(std::span<const double> logits, std::span<const double> target);

// Shannon entropy in nats.
double entropy(std::span<const double> dist);

}  // namespace ordsoft::loss
