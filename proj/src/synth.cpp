#include "ordsoft/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ordsoft/loss.hpp"
#include "ordsoft/random.hpp"

namespace ordsoft::synth {

namespace {

std::vector<double> random_unit(std::size_t dims, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(dims);
    double norm = 0.0;
    while (norm < 1e-8) {
        norm = 0.0;
        for (double& x : v) {
            x = normal(rng);
            norm += x * x;
        }
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

// Gram-Schmidt step: second direction orthogonal to the first.
std::vector<double> orthogonal_unit(const std::vector<double>& first, Rng& rng) {
    while (true) {
        auto v = random_unit(first.size(), rng);
        double dot = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * first[i];
        double norm = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] -= dot * first[i];
            norm += v[i] * v[i];
        }
        if (norm > 1e-8) {
            norm = std::sqrt(norm);
            for (double& x : v) x /= norm;
            return v;
        }
    }
}

void check_flip(double prob) {
    if (!(prob >= 0.0 && prob < 0.5)) throw std::invalid_argument("adjacent_flip_prob must lie in [0, 0.5)");
}

}  // namespace

void SynthSpec::validate() const {
    if (classes < 2) throw std::invalid_argument("SynthSpec: need at least 2 grades");
    if (n_per_class.size() != static_cast<std::size_t>(classes)) {
        throw std::invalid_argument("SynthSpec: n_per_class needs one entry per grade");
    }
    for (auto n : n_per_class)
        if (n < 2) throw std::invalid_argument("SynthSpec: every grade needs at least 2 samples");
    if (dims < 1) throw std::invalid_argument("SynthSpec: dims must be >= 1");
    if (!(class_separation > 0.0)) throw std::invalid_argument("SynthSpec: class_separation must be positive");
    if (!(noise_sd >= 0.0)) throw std::invalid_argument("SynthSpec: noise_sd must be non-negative");
    check_flip(adjacent_flip_prob);
}

std::vector<int> flip_adjacent(std::vector<int> labels, int classes, double prob, Rng& rng) {
    check_flip(prob);
    std::bernoulli_distribution flip(prob);
    std::bernoulli_distribution up(0.5);
    for (int& y : labels) {
        if (!flip(rng)) continue;
        if (y == 0) {
            y = 1;
        } else if (y == classes - 1) {
            y = classes - 2;
        } else {
            y += up(rng) ? 1 : -1;
        }
    }
    return labels;
}

GeneratedSamples generate_with_truth(const SynthSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, Stream::Synth));
    const auto axis = random_unit(spec.dims, rng);
    std::vector<int> clean;
    for (int k = 0; k < spec.classes; ++k) clean.insert(clean.end(), spec.n_per_class[static_cast<std::size_t>(k)], k);
    std::shuffle(clean.begin(), clean.end(), rng);

    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> features;
    features.reserve(clean.size() * spec.dims);
    for (int k : clean) {
        const double pos = k * spec.class_separation;
        for (std::size_t j = 0; j < spec.dims; ++j) features.push_back(pos * axis[j] + spec.noise_sd * noise(rng));
    }
    Rng flip_rng(derive_seed(spec.seed, Stream::Noise));
    auto observed = flip_adjacent(clean, spec.classes, spec.adjacent_flip_prob, flip_rng);
    return {SampleSet(std::move(features), std::move(observed), spec.dims), std::move(clean)};
}

SampleSet generate(const SynthSpec& spec) {
    return generate_with_truth(spec).samples;
}

void PairedSynthSpec::validate() const {
    if (classes_a < 2 || classes_b < 2) throw std::invalid_argument("PairedSynthSpec: need at least 2 grades per axis");
    if (n < 1) throw std::invalid_argument("PairedSynthSpec: n must be >= 1");
    if (marginal_a.size() != static_cast<std::size_t>(classes_a)) {
        throw std::invalid_argument("PairedSynthSpec: marginal_a needs one weight per A grade");
    }
    double s = 0.0;
    for (double w : marginal_a) {
        if (!(w >= 0.0)) throw std::invalid_argument("PairedSynthSpec: negative marginal weight");
        s += w;
    }
    if (!(s > 0.0)) throw std::invalid_argument("PairedSynthSpec: marginal weights sum to zero");
    if (!(low_grade_concentration > 0.0 && low_grade_concentration <= 1.0)) {
        throw std::invalid_argument("PairedSynthSpec: low_grade_concentration must lie in (0, 1]");
    }
    if (!(high_grade_spread > 0.0 && high_grade_spread <= 1.0)) {
        throw std::invalid_argument("PairedSynthSpec: high_grade_spread must lie in (0, 1]");
    }
}

std::vector<double> conditional_b(const PairedSynthSpec& spec, int a) {
    if (a < 0 || a >= spec.classes_a) throw std::out_of_range("conditional_b: grade outside A axis");
    const auto jb = static_cast<std::size_t>(spec.classes_b);
    const double uniform = 1.0 / static_cast<double>(jb);
    std::vector<double> low(jb, (1.0 - spec.low_grade_concentration) * uniform);
    low[0] += spec.low_grade_concentration;
    std::vector<double> high(jb, spec.high_grade_spread * uniform);
    high[jb - 1] += 1.0 - spec.high_grade_spread;
    const double w = static_cast<double>(a) / static_cast<double>(spec.classes_a - 1);
    std::vector<double> row(jb);
    for (std::size_t j = 0; j < jb; ++j) row[j] = (1.0 - w) * low[j] + w * high[j];
    return row;
}

PairedGrades generate_paired(const PairedSynthSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, Stream::Synth, 1));
    std::discrete_distribution<int> draw_a(spec.marginal_a.begin(), spec.marginal_a.end());
    std::vector<std::discrete_distribution<int>> draw_b;
    for (int a = 0; a < spec.classes_a; ++a) {
        const auto row = conditional_b(spec, a);
        draw_b.emplace_back(row.begin(), row.end());
    }
    PairedGrades g;
    g.a.reserve(spec.n);
    g.b.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const int a = draw_a(rng);
        g.a.push_back(a);
        g.b.push_back(draw_b[static_cast<std::size_t>(a)](rng));
    }
    return g;
}

joint::ContingencyTable PairedGrades::table(int classes_a, int classes_b) const {
    return joint::ContingencyTable::from_pairs(a, b, classes_a, classes_b);
}

void PairedSampleSpec::validate() const {
    grades.validate();
    if (dims < 2) throw std::invalid_argument("PairedSampleSpec: need at least 2 feature dimensions");
    if (!(separation_a > 0.0) || !(separation_b > 0.0)) throw std::invalid_argument("PairedSampleSpec: separations must be positive");
    if (!(noise_sd >= 0.0)) throw std::invalid_argument("PairedSampleSpec: noise_sd must be non-negative");
    check_flip(adjacent_flip_prob);
}

PairedSamples generate_paired_samples(const PairedSampleSpec& spec) {
    spec.validate();
    auto grades_spec = spec.grades;
    grades_spec.seed = spec.seed;
    auto clean = generate_paired(grades_spec);

    Rng rng(derive_seed(spec.seed, Stream::Synth, 2));
    const auto axis_a = random_unit(spec.dims, rng);
    const auto axis_b = orthogonal_unit(axis_a, rng);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> features;
    features.reserve(clean.a.size() * spec.dims);
    for (std::size_t i = 0; i < clean.a.size(); ++i) {
        const double pa = clean.a[i] * spec.separation_a;
        const double pb = clean.b[i] * spec.separation_b;
        for (std::size_t j = 0; j < spec.dims; ++j) {
            features.push_back(pa * axis_a[j] + pb * axis_b[j] + spec.noise_sd * noise(rng));
        }
    }
    Rng flip_a(derive_seed(spec.seed, Stream::Noise, 1));
    Rng flip_b(derive_seed(spec.seed, Stream::Noise, 2));
    auto labels_a = flip_adjacent(clean.a, spec.grades.classes_a, spec.adjacent_flip_prob, flip_a);
    auto labels_b = flip_adjacent(clean.b, spec.grades.classes_b, spec.adjacent_flip_prob, flip_b);
    SampleSet task_a(features, std::move(labels_a), spec.dims);
    SampleSet task_b(std::move(features), std::move(labels_b), spec.dims);
    return {std::move(task_a), std::move(task_b), std::move(clean), spec.grades.classes_a, spec.grades.classes_b};
}

joint::ContingencyTable PairedSamples::observed_table() const {
    std::vector<int> a(task_a.labels().begin(), task_a.labels().end());
    std::vector<int> b(task_b.labels().begin(), task_b.labels().end());
    return joint::ContingencyTable::from_pairs(a, b, classes_a, classes_b);
}

double asymmetry_statistic(const joint::ContingencyTable& table) {
    auto row_entropy = [&](int i) {
        std::vector<double> row(static_cast<std::size_t>(table.cols()));
        double total = 0.0;
        for (int j = 0; j < table.cols(); ++j) total += static_cast<double>(table.at(i, j));
        if (total == 0.0) return 0.0;
        for (int j = 0; j < table.cols(); ++j) row[static_cast<std::size_t>(j)] = static_cast<double>(table.at(i, j)) / total;
        return loss::entropy(row);
    };
    return row_entropy(table.rows() - 1) - row_entropy(0);
}

}  // namespace ordsoft::synth
