#include "ordsoft/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ordsoft/loss.hpp"

namespace ordsoft::kernels {

namespace {

struct Workspace {
    std::vector<double> scratch;
    std::vector<double> logits;
    std::vector<double> delta;
    std::vector<double> dhidden;

    explicit Workspace(const ClassifierModel& m)
        : scratch(m.scratch_size()), logits(m.classes_size()), delta(m.classes_size()), dhidden(m.hidden()) {}
};

// Forward + backward for one sample; adds into grad, returns the loss.
double sample_step(const ClassifierModel& model, std::span<const double> x, std::span<const double> target,
                   Workspace& ws, double* grad) {
    model.forward(x, ws.logits, ws.scratch);
    loss::softmax_into(ws.logits, ws.delta);
    const std::size_t J = model.classes_size();
    double loss_value = 0.0;
    for (std::size_t k = 0; k < J; ++k) {
        if (target[k] != 0.0) loss_value -= target[k] * std::log(std::max(ws.delta[k], loss::kProbabilityFloor));
        ws.delta[k] -= target[k];
    }

    const std::size_t width = model.out_inputs();
    const double* in = model.architecture() == Architecture::Mlp ? ws.scratch.data() + model.inputs()
                                                                 : ws.scratch.data();
    double* gw2 = grad + model.out_offset();
    double* gb2 = gw2 + J * width;
    for (std::size_t k = 0; k < J; ++k) {
        const double d = ws.delta[k];
        gb2[k] += d;
        double* row = gw2 + k * width;
        for (std::size_t u = 0; u < width; ++u) row[u] += d * in[u];
    }
    if (model.architecture() != Architecture::Mlp) return loss_value;

    const std::size_t H = model.hidden();
    const std::size_t D = model.inputs();
    const double* w2 = model.parameters().data() + model.out_offset();
    std::fill(ws.dhidden.begin(), ws.dhidden.end(), 0.0);
    for (std::size_t k = 0; k < J; ++k) {
        const double d = ws.delta[k];
        const double* row = w2 + k * H;
        for (std::size_t u = 0; u < H; ++u) ws.dhidden[u] += d * row[u];
    }
    const double* z = ws.scratch.data();
    const double* h = ws.scratch.data() + D;
    double* gb1 = grad + H * D;
    for (std::size_t u = 0; u < H; ++u) {
        if (h[u] <= 0.0) continue;
        const double d = ws.dhidden[u];
        gb1[u] += d;
        double* row = grad + u * D;
        for (std::size_t j = 0; j < D; ++j) row[j] += d * z[j];
    }
    return loss_value;
}

void check_inputs(const ClassifierModel& model, const SampleSet& data, const softlabel::SoftTargetMatrix& targets) {
    if (data.dims() != model.inputs()) throw std::invalid_argument("kernel: feature dimension mismatch");
    if (targets.classes() != model.classes()) throw std::invalid_argument("kernel: target matrix size mismatch");
}

std::size_t chunk_count(std::size_t n) {
    return (n + kChunkSize - 1) / kChunkSize;
}

}  // namespace

double loss_and_gradient(const ClassifierModel& model, const SampleSet& data, std::span<const std::size_t> batch,
                         const softlabel::SoftTargetMatrix& targets, std::span<double> grad) {
    check_inputs(model, data, targets);
    const std::size_t P = model.parameter_count();
    if (grad.size() != P) throw std::invalid_argument("loss_and_gradient: gradient buffer size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    const std::size_t chunks = chunk_count(batch.size());

    if (chunks <= 1) {
        Workspace ws(model);
        double loss_sum = 0.0;
        for (std::size_t i : batch) loss_sum += sample_step(model, data.row(i), targets.row(data.label(i)), ws, grad.data());
        return loss_sum;
    }

    std::vector<double> partial_grad(chunks * P, 0.0);
    std::vector<double> partial_loss(chunks, 0.0);
    const long long n_chunks = static_cast<long long>(chunks);
#pragma omp parallel
    {
        Workspace ws(model);
#pragma omp for schedule(static)
        for (long long c = 0; c < n_chunks; ++c) {
            const auto cu = static_cast<std::size_t>(c);
            const std::size_t begin = cu * kChunkSize;
            const std::size_t end = std::min(batch.size(), begin + kChunkSize);
            double* g = partial_grad.data() + cu * P;
            double l = 0.0;
            for (std::size_t b = begin; b < end; ++b) {
                const std::size_t i = batch[b];
                l += sample_step(model, data.row(i), targets.row(data.label(i)), ws, g);
            }
            partial_loss[cu] = l;
        }
    }
    double loss_sum = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const double* g = partial_grad.data() + c * P;
        for (std::size_t p = 0; p < P; ++p) grad[p] += g[p];
        loss_sum += partial_loss[c];
    }
    return loss_sum;
}

double total_loss(const ClassifierModel& model, const SampleSet& data, const softlabel::SoftTargetMatrix& targets) {
    check_inputs(model, data, targets);
    const std::size_t chunks = chunk_count(data.size());
    std::vector<double> partial(chunks, 0.0);
    const long long n_chunks = static_cast<long long>(chunks);
#pragma omp parallel if (chunks > 1)
    {
        std::vector<double> scratch(model.scratch_size()), logits(model.classes_size()), probs(model.classes_size());
#pragma omp for schedule(static)
        for (long long c = 0; c < n_chunks; ++c) {
            const auto cu = static_cast<std::size_t>(c);
            const std::size_t end = std::min(data.size(), (cu + 1) * kChunkSize);
            double l = 0.0;
            for (std::size_t i = cu * kChunkSize; i < end; ++i) {
                model.forward(data.row(i), logits, scratch);
                loss::softmax_into(logits, probs);
                auto t = targets.row(data.label(i));
                for (std::size_t k = 0; k < probs.size(); ++k)
                    if (t[k] != 0.0) l -= t[k] * std::log(std::max(probs[k], loss::kProbabilityFloor));
            }
            partial[cu] = l;
        }
    }
    return std::accumulate(partial.begin(), partial.end(), 0.0);
}

std::vector<double> predict_proba(const ClassifierModel& model, const SampleSet& data) {
    if (data.dims() != model.inputs()) throw std::invalid_argument("predict_proba: feature dimension mismatch");
    const std::size_t J = model.classes_size();
    std::vector<double> out(data.size() * J);
    const long long n = static_cast<long long>(data.size());
#pragma omp parallel if (data.size() > kChunkSize)
    {
        std::vector<double> scratch(model.scratch_size()), logits(J);
#pragma omp for schedule(static)
        for (long long i = 0; i < n; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            model.forward(data.row(iu), logits, scratch);
            loss::softmax_into(logits, std::span<double>(out.data() + iu * J, J));
        }
    }
    return out;
}

}  // namespace ordsoft::kernels
