#include "ordsoft/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "ordsoft/random.hpp"

namespace ordsoft {

std::string_view to_string(Architecture a) {
    return a == Architecture::Linear ? "linear" : "mlp_1_hidden";
}

Architecture parse_architecture(std::string_view name) {
    if (name == "linear") return Architecture::Linear;
    if (name == "mlp_1_hidden" || name == "mlp") return Architecture::Mlp;
    throw std::invalid_argument("unknown architecture '" + std::string(name) + "'");
}

ClassifierModel::ClassifierModel(Architecture arch, std::size_t inputs, std::size_t hidden, int classes)
    : arch_(arch), inputs_(inputs), hidden_(arch == Architecture::Mlp ? hidden : 0), classes_(classes),
      mean_(inputs, 0.0), scale_(inputs, 1.0) {
    if (inputs == 0) throw std::invalid_argument("ClassifierModel: zero inputs");
    if (classes < 2) throw std::invalid_argument("ClassifierModel: need at least 2 outputs");
    if (arch == Architecture::Mlp && hidden == 0) throw std::invalid_argument("ClassifierModel: zero hidden width");
    out_offset_ = hidden_ * inputs_ + hidden_;
    params_.assign(out_offset_ + classes_size() * out_inputs() + classes_size(), 0.0);
}

void ClassifierModel::initialise(std::uint64_t seed) {
    Rng rng(seed);
    auto fill = [&](double* w, std::size_t count, std::size_t fan_in) {
        std::uniform_real_distribution<double> dist(-1.0 / std::sqrt(static_cast<double>(fan_in)),
                                                    1.0 / std::sqrt(static_cast<double>(fan_in)));
        for (std::size_t i = 0; i < count; ++i) w[i] = dist(rng);
    };
    std::fill(params_.begin(), params_.end(), 0.0);
    if (arch_ == Architecture::Mlp) fill(params_.data(), hidden_ * inputs_, inputs_);
    fill(params_.data() + out_offset_, classes_size() * out_inputs(), out_inputs());
}

void ClassifierModel::fit_scaler(const SampleSet& data) {
    if (data.dims() != inputs_) throw std::invalid_argument("fit_scaler: dimension mismatch");
    if (data.empty()) throw std::invalid_argument("fit_scaler: no samples");
    std::vector<double> mean(inputs_, 0.0), sq(inputs_, 0.0);
    const double n = static_cast<double>(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto r = data.row(i);
        for (std::size_t j = 0; j < inputs_; ++j) mean[j] += r[j];
    }
    for (double& m : mean) m /= n;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto r = data.row(i);
        for (std::size_t j = 0; j < inputs_; ++j) sq[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
    }
    std::vector<double> scale(inputs_);
    for (std::size_t j = 0; j < inputs_; ++j) {
        const double sd = std::sqrt(sq[j] / n);
        scale[j] = sd > 1e-12 ? 1.0 / sd : 1.0;
    }
    set_scaler(std::move(mean), std::move(scale));
}

void ClassifierModel::set_scaler(std::vector<double> mean, std::vector<double> scale) {
    if (mean.size() != inputs_ || scale.size() != inputs_) throw std::invalid_argument("set_scaler: dimension mismatch");
    mean_ = std::move(mean);
    scale_ = std::move(scale);
}

void ClassifierModel::set_parameters(std::vector<double> params) {
    if (params.size() != params_.size()) throw std::invalid_argument("set_parameters: size mismatch");
    params_ = std::move(params);
}

bool ClassifierModel::all_finite() const {
    for (double w : params_)
        if (!std::isfinite(w)) return false;
    return true;
}

void ClassifierModel::forward(std::span<const double> x, std::span<double> logits, std::span<double> scratch) const {
    double* z = scratch.data();
    for (std::size_t j = 0; j < inputs_; ++j) z[j] = (x[j] - mean_[j]) * scale_[j];
    const double* in = z;
    if (arch_ == Architecture::Mlp) {
        double* h = scratch.data() + inputs_;
        const double* w = params_.data();
        const double* b = params_.data() + hidden_ * inputs_;
        for (std::size_t u = 0; u < hidden_; ++u) {
            double s = b[u];
            const double* wr = w + u * inputs_;
            for (std::size_t j = 0; j < inputs_; ++j) s += wr[j] * z[j];
            h[u] = s > 0.0 ? s : 0.0;
        }
        in = h;
    }
    const std::size_t width = out_inputs();
    const double* w = params_.data() + out_offset_;
    const double* b = w + classes_size() * width;
    for (std::size_t k = 0; k < classes_size(); ++k) {
        double s = b[k];
        const double* wr = w + k * width;
        for (std::size_t j = 0; j < width; ++j) s += wr[j] * in[j];
        logits[k] = s;
    }
}

}  // namespace ordsoft
