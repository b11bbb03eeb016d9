#pragma once
// Synthetic ordinal datasets, including paired grades with an asymmetric
// association between the two grading axes.

#include <cstdint>
#include <vector>

#include "ordsoft/core.hpp"
#include "ordsoft/joint.hpp"
#include "ordsoft/random.hpp"

namespace ordsoft::synth {

struct SynthSpec {
    int classes = 5;
    std::vector<std::size_t> n_per_class{146, 310, 207, 195, 112};
    std::size_t dims = 8;
    double class_separation = 1.0;
    double noise_sd = 1.0;
    double adjacent_flip_prob = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct GeneratedSamples {
    SampleSet samples;              // labels after adjacent flips
    std::vector<int> clean_labels;  // labels before flipping
};

// Grade k sits at k * class_separation along a seeded unit direction in
// `dims` dimensions, plus isotropic Gaussian noise. Each label then moves to
// a uniformly chosen adjacent grade with probability adjacent_flip_prob.
GeneratedSamples generate_with_truth(const SynthSpec& spec);
SampleSet generate(const SynthSpec& spec);

// Replaces each label with an adjacent grade with probability `prob`.
std::vector<int> flip_adjacent(std::vector<int> labels, int classes, double prob, Rng& rng);

struct PairedSynthSpec {
    int classes_a = 5;
    int classes_b = 4;
    std::size_t n = 968;
    // Relative frequencies of grade A (normalised internally).
    std::vector<double> marginal_a{146, 310, 207, 195, 112};
    double low_grade_concentration = 0.7;
    double high_grade_spread = 0.9;
    std::uint64_t seed = 0;

    void validate() const;
};

struct PairedGrades {
    std::vector<int> a;
    std::vector<int> b;

    joint::ContingencyTable table(int classes_a, int classes_b) const;
};

// Distribution of B given A = a. The lowest A grade puts
// low_grade_concentration on B = 0 and spreads the rest uniformly; the highest
// A grade mixes a uniform row (weight high_grade_spread) with mass on the top
// B grade. Rows in between interpolate linearly in the A index.
std::vector<double> conditional_b(const PairedSynthSpec& spec, int a);

PairedGrades generate_paired(const PairedSynthSpec& spec);

// Feature model for paired grades: both grades are embedded along orthogonal
// seeded directions, and each task's observed label gets adjacent flips.
struct PairedSampleSpec {
    PairedSynthSpec grades;
    std::size_t dims = 8;
    double separation_a = 1.0;
    double separation_b = 1.0;
    double noise_sd = 1.0;
    double adjacent_flip_prob = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct PairedSamples {
    SampleSet task_a;          // shared features, observed A labels
    SampleSet task_b;          // shared features, observed B labels
    PairedGrades clean;        // grades before label flips
    int classes_a = 0;
    int classes_b = 0;

    joint::ContingencyTable observed_table() const;
};

PairedSamples generate_paired_samples(const PairedSampleSpec& spec);

// Entropy of the highest-A row minus that of the lowest-A row of the table.
double asymmetry_statistic(const joint::ContingencyTable& table);

}  // namespace ordsoft::synth
