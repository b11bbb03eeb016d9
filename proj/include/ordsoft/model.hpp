#pragma once
// Small feed-forward classifier producing J logits.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ordsoft/core.hpp"

namespace ordsoft {

enum class Architecture { Linear, Mlp };

std::string_view to_string(Architecture a);
Architecture parse_architecture(std::string_view name);

// Linear: logits = W x + b.
// Mlp:    logits = W2 relu(W1 x + b1) + b2.
// Inputs are standardised with a per-feature scaler fitted on training data.
// All trainable weights live in one flat vector so optimisers can treat the
// model as a point in parameter space.
class ClassifierModel {
public:
    ClassifierModel(Architecture arch, std::size_t inputs, std::size_t hidden, int classes);

    Architecture architecture() const { return arch_; }
    std::size_t inputs() const { return inputs_; }
    std::size_t hidden() const { return hidden_; }
    int classes() const { return classes_; }
    std::size_t classes_size() const { return static_cast<std::size_t>(classes_); }

    std::span<double> parameters() { return params_; }
    std::span<const double> parameters() const { return params_; }
    std::size_t parameter_count() const { return params_.size(); }

    // Layer views into the flat parameter vector. For Linear only the
    // output layer exists and its input width is `inputs()`.
    std::span<const double> w1() const { return {params_.data(), hidden_ * inputs_}; }
    std::span<const double> b1() const { return {params_.data() + hidden_ * inputs_, hidden_}; }
    std::span<const double> w2() const { return {params_.data() + out_offset_, classes_size() * out_inputs()}; }
    std::span<const double> b2() const {
        return {params_.data() + out_offset_ + classes_size() * out_inputs(), classes_size()};
    }
    std::size_t out_offset() const { return out_offset_; }
    std::size_t out_inputs() const { return arch_ == Architecture::Mlp ? hidden_ : inputs_; }

    std::span<const double> input_mean() const { return mean_; }
    std::span<const double> input_scale() const { return scale_; }

    // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
    void initialise(std::uint64_t seed);

    // Mean and 1/sd per feature; constant features get scale 1.
    void fit_scaler(const SampleSet& data);
    void set_scaler(std::vector<double> mean, std::vector<double> scale);
    void set_parameters(std::vector<double> params);

    bool all_finite() const;

    // Scratch sizes needed by the forward/backward kernels.
    std::size_t scratch_size() const { return inputs_ + hidden_; }

    // logits for one raw feature row; `scratch` must hold scratch_size().
    void forward(std::span<const double> x, std::span<double> logits, std::span<double> scratch) const;

private:
    Architecture arch_;
    std::size_t inputs_;
    std::size_t hidden_;
    int classes_;
    std::size_t out_offset_;
    std::vector<double> params_;
    std::vector<double> mean_;
    std::vector<double> scale_;
};

}  // namespace ordsoft
