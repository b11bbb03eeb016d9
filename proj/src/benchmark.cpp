#include "ordsoft/benchmark.hpp"

namespace ordsoft::benchmark {

namespace {

synth::SynthSpec noisy_spec(int classes, std::vector<std::size_t> counts) {
    synth::SynthSpec s;
    s.classes = classes;
    s.n_per_class = std::move(counts);
    s.dims = 64;
    s.class_separation = 2.0;
    s.noise_sd = 1.0;
    s.adjacent_flip_prob = kFlipProb;
    s.seed = 11;
    return s;
}

}  // namespace

synth::SynthSpec five_grade_spec() { return noisy_spec(5, {146, 310, 207, 195, 112}); }

synth::SynthSpec four_grade_spec() { return noisy_spec(4, {816, 372, 480, 502}); }

synth::PairedSampleSpec paired_spec() {
    synth::PairedSampleSpec s;
    s.dims = 64;
    s.separation_a = 2.0;
    s.separation_b = 2.0;
    s.noise_sd = 1.0;
    s.adjacent_flip_prob = kFlipProb;
    s.seed = 7;
    s.grades.seed = 7;
    return s;
}

ProtocolOptions protocol_options(const std::string& task) {
    ProtocolOptions o;
    o.task = task;
    o.base.batch_size = 8;
    o.seeds = seed_sequence(kRootSeed, kSeeds);
    return o;
}

}  // namespace ordsoft::benchmark
