#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ordsoft/synth.hpp"
#include "ordsoft/trainer.hpp"
#include "ordsoft/metrics.hpp"

using namespace ordsoft;
using namespace ordsoft::synth;

TEST_SUITE("synth") {
TEST_CASE("clean labels match the requested counts") {
    SynthSpec spec;
    spec.adjacent_flip_prob = 0.2;
    const auto g = generate_with_truth(spec);
    CHECK(class_counts(g.clean_labels, 5) == spec.n_per_class);
    CHECK(g.samples.size() == 970);
    CHECK(g.samples.dims() == spec.dims);
    g.samples.check_labels(LabelSpace(5));
}

TEST_CASE("adjacent flips happen at the requested rate and only to neighbours") {
    SynthSpec spec;
    spec.n_per_class = {2000, 2000, 2000, 2000};
    spec.classes = 4;
    spec.adjacent_flip_prob = 0.3;
    const auto g = generate_with_truth(spec);
    std::size_t flipped = 0;
    for (std::size_t i = 0; i < g.clean_labels.size(); ++i) {
        const int d = std::abs(g.samples.label(i) - g.clean_labels[i]);
        CHECK(d <= 1);
        flipped += d == 1;
    }
    const double n = double(g.clean_labels.size());
    const double rate = flipped / n;
    const double sd = std::sqrt(0.3 * 0.7 / n);
    CHECK(std::abs(rate - 0.3) < 4 * sd);
}

TEST_CASE("generation is deterministic per seed") {
    SynthSpec spec;
    spec.seed = 42;
    spec.adjacent_flip_prob = 0.1;
    std::ostringstream a, b, c;
    generate(spec).write_csv(a);
    generate(spec).write_csv(b);
    spec.seed = 43;
    generate(spec).write_csv(c);
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
}

TEST_CASE("noise-free data is perfectly learnable") {
    SynthSpec spec;
    spec.noise_sd = 0.0;
    spec.n_per_class = {20, 20, 20, 20, 20};
    const auto data = generate(spec);
    TrainConfig c;
    c.architecture = Architecture::Linear;
    c.learning_rate = 0.5;
    c.batch_size = data.size();
    c.max_epochs = 3000;
    c.patience = 3000;
    const auto t = train(c, data, data, 5);
    CHECK(metrics::evaluate(predict(t.model, data)).amae == 0.0);
}

TEST_CASE("spec validation") {
    SynthSpec spec;
    spec.adjacent_flip_prob = 0.5;
    CHECK_THROWS(spec.validate());
    spec = {};
    spec.n_per_class[2] = 1;
    CHECK_THROWS(spec.validate());
    spec = {};
    spec.classes = 4;
    CHECK_THROWS(spec.validate());
    PairedSynthSpec p;
    p.low_grade_concentration = 0.0;
    CHECK_THROWS(p.validate());
}

TEST_CASE("conditional rows of the paired generator") {
    PairedSynthSpec spec;
    spec.low_grade_concentration = 1.0;
    const auto low = conditional_b(spec, 0);
    CHECK(low == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    spec.high_grade_spread = 1.0;
    for (double v : conditional_b(spec, 4)) CHECK(v == doctest::Approx(0.25));
    PairedSynthSpec d;
    for (int a = 0; a < 5; ++a) {
        double s = 0.0;
        for (double v : conditional_b(d, a)) s += v;
        CHECK(s == doctest::Approx(1.0));
    }
    // B = 0 mass falls monotonically with A.
    for (int a = 1; a < 5; ++a) CHECK(conditional_b(d, a)[0] < conditional_b(d, a - 1)[0]);
}

TEST_CASE("default paired table has low-A rows concentrated at B = 0") {
    PairedSynthSpec spec;
    const auto table = generate_paired(spec).table(5, 4);
    CHECK(table.total() == 968);
    for (int a : {0, 1}) {
        for (int b = 1; b < 4; ++b) CHECK(table.at(a, 0) > table.at(a, b));
    }
}

TEST_CASE("asymmetry statistic is positive across seeds") {
    PairedSynthSpec spec;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        spec.seed = seed;
        CHECK(asymmetry_statistic(generate_paired(spec).table(5, 4)) > 0.0);
    }
}

TEST_CASE("paired samples share features and keep labels in range") {
    PairedSampleSpec spec;
    spec.adjacent_flip_prob = 0.25;
    spec.seed = 3;
    const auto s = generate_paired_samples(spec);
    CHECK(s.task_a.size() == 968);
    CHECK(std::equal(s.task_a.features().begin(), s.task_a.features().end(), s.task_b.features().begin()));
    s.task_a.check_labels(LabelSpace(5));
    s.task_b.check_labels(LabelSpace(4));
    CHECK(s.observed_table().total() == 968);
    const auto again = generate_paired_samples(spec);
    CHECK(std::equal(s.task_b.labels().begin(), s.task_b.labels().end(), again.task_b.labels().begin()));
}
}
