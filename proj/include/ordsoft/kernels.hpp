#pragma once
// Batch kernels for training and inference.
//
// The default kernels split a batch into fixed-size chunks and process the
// chunks with OpenMP. Partial results are reduced in chunk order, so the
// output does not depend on the thread count. `reference` holds plain serial
// versions used as the test oracle and the benchmark baseline.

#include <cstddef>
#include <span>
#include <vector>

#include "ordsoft/core.hpp"
#include "ordsoft/model.hpp"
#include "ordsoft/softlabel.hpp"

namespace ordsoft::kernels {

inline constexpr std::size_t kChunkSize = 64;

// Zeroes `grad`, then accumulates the summed gradient of the soft-target
// cross-entropy over the batch rows. Returns the summed loss.
double loss_and_gradient(const ClassifierModel& model, const SampleSet& data, std::span<const std::size_t> batch,
                         const softlabel::SoftTargetMatrix& targets, std::span<double> grad);

// Summed loss over every row of `data`.
double total_loss(const ClassifierModel& model, const SampleSet& data, const softlabel::SoftTargetMatrix& targets);

// N x J class probabilities, row-major.
std::vector<double> predict_proba(const ClassifierModel& model, const SampleSet& data);

namespace reference {

double loss_and_gradient(const ClassifierModel& model, const SampleSet& data, std::span<const std::size_t> batch,
                         const softlabel::SoftTargetMatrix& targets, std::span<double> grad);
double total_loss(const ClassifierModel& model, const SampleSet& data, const softlabel::SoftTargetMatrix& targets);
std::vector<double> predict_proba(const ClassifierModel& model, const SampleSet& data);

}  // namespace reference

}  // namespace ordsoft::kernels
