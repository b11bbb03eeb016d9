// Straightforward serial kernels: explicit layer-by-layer algebra built on the
// loss module, with no fusion or chunking.

#include <algorithm>
#include <stdexcept>

#include "ordsoft/kernels.hpp"
#include "ordsoft/loss.hpp"

namespace ordsoft::kernels::reference {

namespace {

struct Activations {
    std::vector<double> z;       // standardised input
    std::vector<double> hidden;  // post-ReLU (empty for linear)
    std::vector<double> logits;
};

Activations forward(const ClassifierModel& m, std::span<const double> x) {
    Activations a;
    a.z.resize(m.inputs());
    for (std::size_t j = 0; j < m.inputs(); ++j) a.z[j] = (x[j] - m.input_mean()[j]) * m.input_scale()[j];
    std::span<const double> in = a.z;
    if (m.architecture() == Architecture::Mlp) {
        a.hidden.assign(m.hidden(), 0.0);
        for (std::size_t u = 0; u < m.hidden(); ++u) {
            double s = m.b1()[u];
            for (std::size_t j = 0; j < m.inputs(); ++j) s += m.w1()[u * m.inputs() + j] * a.z[j];
            a.hidden[u] = std::max(0.0, s);
        }
        in = a.hidden;
    }
    a.logits.assign(m.classes_size(), 0.0);
    for (std::size_t k = 0; k < m.classes_size(); ++k) {
        double s = m.b2()[k];
        for (std::size_t j = 0; j < in.size(); ++j) s += m.w2()[k * in.size() + j] * in[j];
        a.logits[k] = s;
    }
    return a;
}

}  // namespace

double loss_and_gradient(const ClassifierModel& model, const SampleSet& data, std::span<const std::size_t> batch,
                         const softlabel::SoftTargetMatrix& targets, std::span<double> grad) {
    if (grad.size() != model.parameter_count()) throw std::invalid_argument("reference: gradient size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    const std::size_t D = model.inputs();
    const std::size_t H = model.hidden();
    const std::size_t J = model.classes_size();
    const std::size_t width = model.out_inputs();
    double total = 0.0;
    for (std::size_t i : batch) {
        const auto act = forward(model, data.row(i));
        const auto target = targets.row(data.label(i));
        total += loss::soft_ce(loss::softmax(act.logits), target);
        const auto delta = loss::soft_ce_grad(act.logits, target);
        const std::vector<double>& in = model.architecture() == Architecture::Mlp ? act.hidden : act.z;
        const std::size_t w2_at = model.out_offset();
        const std::size_t b2_at = w2_at + J * width;
        for (std::size_t k = 0; k < J; ++k) {
            grad[b2_at + k] += delta[k];
            for (std::size_t u = 0; u < width; ++u) grad[w2_at + k * width + u] += delta[k] * in[u];
        }
        if (model.architecture() != Architecture::Mlp) continue;
        for (std::size_t u = 0; u < H; ++u) {
            if (act.hidden[u] <= 0.0) continue;
            double back = 0.0;
            for (std::size_t k = 0; k < J; ++k) back += delta[k] * model.w2()[k * H + u];
            grad[H * D + u] += back;
            for (std::size_t j = 0; j < D; ++j) grad[u * D + j] += back * act.z[j];
        }
    }
    return total;
}

double total_loss(const ClassifierModel& model, const SampleSet& data, const softlabel::SoftTargetMatrix& targets) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto act = forward(model, data.row(i));
        total += loss::soft_ce(loss::softmax(act.logits), targets.row(data.label(i)));
    }
    return total;
}

std::vector<double> predict_proba(const ClassifierModel& model, const SampleSet& data) {
    std::vector<double> out;
    out.reserve(data.size() * model.classes_size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto p = loss::softmax(forward(model, data.row(i)).logits);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

}  // namespace ordsoft::kernels::reference
