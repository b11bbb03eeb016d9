// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion passes, or when the only failures are
// those named with --known-failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "oracles.hpp"
#include "ordsoft/benchmark.hpp"
#include "ordsoft/joint.hpp"
#include "ordsoft/loss.hpp"
#include "ordsoft/metrics.hpp"
#include "ordsoft/protocol.hpp"
#include "ordsoft/softlabel.hpp"
#include "ordsoft/stat_tests.hpp"
#include "ordsoft/synth.hpp"
#include "ordsoft/trainer.hpp"

using namespace ordsoft;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            details.push_back("violated: " + what);
        }
    }
    void note(const std::string& what) { details.push_back(what); }
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(double v) { return fmt("%.4g", v); }

std::vector<int> labels_from_counts(std::span<const std::size_t> counts) {
    std::vector<int> labels;
    for (std::size_t c = 0; c < counts.size(); ++c) labels.insert(labels.end(), counts[c], static_cast<int>(c));
    return labels;
}

ConfusionMatrix to_confusion(const oracle::Matrix& m) {
    ConfusionMatrix cm(static_cast<int>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) cm.add(static_cast<int>(i), static_cast<int>(j), m[i][j]);
    return cm;
}

joint::JointDistribution random_distribution(std::mt19937_64& rng, int rows, int cols, double zero_prob) {
    std::uniform_int_distribution<int> count(0, 50);
    std::bernoulli_distribution zero(zero_prob);
    joint::ContingencyTable t(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t.add(i, j, zero(rng) ? 0 : count(rng));
    t.add(0, 0, 1);
    return joint::normalise(t);
}

// ---------------------------------------------------------------- criteria

Outcome soft_target_validity() {
    Outcome o;
    const SearchSpace space;
    std::size_t matrices = 0;
    for (Strategy s : all_strategies()) {
        for (const auto& config : enumerate_grid(space, s, TrainConfig{})) {
            for (int J = 2; J <= 6; ++J) {
                const auto m = softlabel::build_target_matrix(LabelSpace(J), s, config.params);
                ++matrices;
                for (int k = 0; k < J; ++k) {
                    std::vector<double> row(static_cast<std::size_t>(J));
                    for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(j)] = m.at(k, j);
                    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
                    const std::string where = std::string(to_string(s)) + " J=" + std::to_string(J) +
                                              " k=" + std::to_string(k);
                    o.require(std::fabs(sum - 1.0) <= 1e-9, where + " row sum " + fmt("%.17g", sum));
                    o.require(std::all_of(row.begin(), row.end(), [](double v) { return v >= 0.0; }),
                              where + " negative entry");
                    o.require(softlabel::is_unimodal_at(row, static_cast<std::size_t>(k)), where + " not unimodal");
                    bool strict_max = true;
                    for (int j = 0; j < J; ++j)
                        if (j != k && row[static_cast<std::size_t>(j)] >= row[static_cast<std::size_t>(k)])
                            strict_max = false;
                    o.require(strict_max, where + " argmax is not the true grade");
                }
            }
        }
    }
    o.note(std::to_string(matrices) + " target matrices checked");
    return o;
}

Outcome gradient_correctness() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> classes(2, 6);
    std::normal_distribution<double> logit(0.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        const int J = classes(rng);
        std::vector<double> z(static_cast<std::size_t>(J)), t(static_cast<std::size_t>(J));
        for (auto& v : z) v = logit(rng);
        for (auto& v : t) v = unit(rng);
        const double s = std::accumulate(t.begin(), t.end(), 0.0);
        for (auto& v : t) v /= s;
        const auto g = loss::soft_ce_grad(z, t);
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            auto zp = z, zm = z;
            zp[i] += h;
            zm[i] -= h;
            const double fd = (loss::soft_ce_from_logits(zp, t) - loss::soft_ce_from_logits(zm, t)) / (2.0 * h);
            err = std::max(err, std::fabs(g[i] - fd));
            scale = std::max(scale, std::fabs(fd));
        }
        worst = std::max(worst, err / std::max(scale, 1e-12));
    }
    o.require(worst < 1e-5, "max relative error " + fmt(worst));
    o.note("max relative error " + fmt(worst) + " over 100 pairs");
    return o;
}

Outcome metric_oracles() {
    Outcome o;
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> classes(2, 6);
    double worst = 0.0;
    auto track = [&](double a, double b) { worst = std::max(worst, std::fabs(a - b)); };
    int compared = 0;
    while (compared < 1000) {
        const int J = classes(rng);
        const auto m = oracle::random_confusion(rng, J, 30);
        if (oracle::total(m) == 0) continue;
        const auto cm = to_confusion(m);
        const auto pairs = oracle::expand(m);
        const auto r = metrics::evaluate(cm);
        const auto maes = oracle::class_maes(pairs, J);
        const auto rec = oracle::recalls(pairs, J);
        const double q = oracle::qwk(m);
        if (std::isfinite(q)) {
            o.require(r.qwk.has_value(), "qwk undefined where the oracle is finite");
            if (r.qwk) track(*r.qwk, q);
        }
        track(r.mae, oracle::mae(pairs));
        track(r.amae, oracle::mean(maes));
        track(r.mmae, *std::max_element(maes.begin(), maes.end()));
        track(r.ms, *std::min_element(rec.begin(), rec.end()));
        track(r.ba, oracle::mean(rec));
        ++compared;
    }
    o.require(worst <= 1e-12, "max deviation " + fmt(worst));
    for (int J = 2; J <= 6; ++J) {
        ConfusionMatrix cm(J);
        for (int k = 0; k < J; ++k) cm.add(k, k, 3 + k);
        const auto r = metrics::evaluate(cm);
        o.require(r.qwk && *r.qwk == 1.0 && r.mae == 0.0 && r.amae == 0.0 && r.mmae == 0.0 && r.ms == 1.0 &&
                      r.ba == 1.0,
                  "diagonal matrix J=" + std::to_string(J));
    }
    o.note("1000 matrices, max deviation " + fmt(worst));
    return o;
}

Outcome split_fidelity() {
    Outcome o;
    const std::vector<std::size_t> five{146, 310, 207, 195, 112};
    const std::vector<std::size_t> expected{102, 217, 145, 137, 78};
    const auto split = stratified_split(labels_from_counts(five), 0.7, 1);
    std::vector<std::size_t> got(5, 0);
    const auto labels = labels_from_counts(five);
    for (auto i : split.train) ++got[static_cast<std::size_t>(labels[i])];
    o.require(got == expected, "five-grade per-class train counts");
    o.require(split.train.size() == 679 && split.holdout.size() == 291,
              "five-grade totals " + std::to_string(split.train.size()) + "/" +
                  std::to_string(split.holdout.size()));
    const std::vector<std::size_t> four{816, 372, 480, 502};
    const auto split4 = stratified_split(labels_from_counts(four), 0.7, 1);
    o.require(split4.train.size() == 1519 && split4.holdout.size() == 651,
              "four-grade totals " + std::to_string(split4.train.size()) + "/" +
                  std::to_string(split4.holdout.size()));
    o.note("679/291 and 1519/651");
    return o;
}

Outcome kld_residuals() {
    Outcome o;
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> dim(2, 6);
    double worst_sum = 0.0, worst_anti = 0.0, min_kld = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int rows = dim(rng), cols = dim(rng);
        const auto p = random_distribution(rng, rows, cols, 0.3);
        const auto q = random_distribution(rng, rows, cols, 0.3);
        o.require(joint::kld(p, p) == 0.0, "kld(P,P) != 0");
        const double d = joint::kld(p, q);
        min_kld = std::min(min_kld, d);
        const auto r = joint::residuals(p, q);
        const auto r_back = joint::residuals(q, p);
        double sum = 0.0;
        for (std::size_t c = 0; c < r.values.size(); ++c) {
            sum += r.values[c];
            worst_anti = std::max(worst_anti, std::fabs(r.values[c] + r_back.values[c]));
        }
        worst_sum = std::max(worst_sum, std::fabs(sum));
    }
    o.require(min_kld >= 0.0, "negative kld " + fmt(min_kld));
    o.require(worst_anti <= 1e-9, "antisymmetry " + fmt(worst_anti));
    o.require(worst_sum <= 1e-9, "residual sum " + fmt(worst_sum));
    o.note("1000 pairs, |sum R| <= " + fmt(worst_sum));
    return o;
}

Outcome statistical_tests() {
    Outcome o;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> magnitude(1, 6);
    std::bernoulli_distribution sign(0.5);
    double worst = 0.0;
    for (std::size_t n = stats::kWilcoxonMinPairs; n <= 12; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            // Small integer magnitudes produce ties; odd trials use continuous data.
            std::vector<double> x(n), y(n, 0.0), diffs(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double m = trial % 2 ? std::fabs(normal(rng)) + 1e-3 : magnitude(rng);
                x[i] = (sign(rng) ? 1.0 : -1.0) * m + (trial % 3 == 0 ? 0.5 : 0.0);
                if (x[i] == 0.0) x[i] = 1.0;
                diffs[i] = x[i] - y[i];
            }
            const auto r = stats::wilcoxon_signed_rank(x, y);
            worst = std::max(worst, std::fabs(r.p_value - oracle::wilcoxon_enumerated(diffs)));
        }
    }
    o.require(worst <= 1e-12, "Wilcoxon exact p deviates from enumeration by " + fmt(worst));

    int rejections = 0;
    for (int sim = 0; sim < 1000; ++sim) {
        std::vector<std::vector<double>> groups(3, std::vector<double>(20));
        for (auto& g : groups)
            for (auto& v : g) v = normal(rng);
        if (stats::kruskal_wallis(groups).p_value < 0.05) ++rejections;
    }
    const double rate = rejections / 1000.0;
    o.require(rate >= 0.03 && rate <= 0.08, "Kruskal-Wallis null rejection rate " + fmt(rate));

    std::vector<double> values;
    std::vector<std::string> model, task;
    for (int m = 0; m < 5; ++m)
        for (int t = 0; t < 2; ++t)
            for (int s = 0; s < 20; ++s) {
                values.push_back(normal(rng) + 0.1 * m);
                model.push_back("m" + std::to_string(m));
                task.push_back("t" + std::to_string(t));
            }
    const auto table = stats::two_way_anova(values, model, task, "model", "task");
    std::vector<double> dfs;
    for (const auto& row : table.rows) dfs.push_back(row.df);
    o.require(dfs == std::vector<double>{4, 1, 4, 190}, "ANOVA degrees of freedom");
    o.note("Wilcoxon n=5..12 max |dp| " + fmt(worst) + ", KW rejection rate " + fmt(rate) + ", ANOVA df 4/1/4/190");
    return o;
}

struct BenchmarkRuns {
    std::map<std::string, std::vector<RunResult>> by_task;
};

void amae_direction(Outcome& o, BenchmarkRuns& store, int workers) {
    std::vector<double> soft_mean, nominal, non_binomial_mean;
    const auto strategies = all_strategies();
    for (const auto& [name, spec] : {std::pair{std::string("five_grade"), benchmark::five_grade_spec()},
                                     std::pair{std::string("four_grade"), benchmark::four_grade_spec()}}) {
        const auto data = synth::generate(spec);
        auto options = benchmark::protocol_options(name);
        options.workers = workers;
        const auto t0 = std::chrono::steady_clock::now();
        auto runs = run_protocol(data, spec.classes, strategies, options);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;

        std::map<Strategy, std::vector<double>> amae;
        std::map<std::uint64_t, std::pair<double, std::vector<double>>> per_seed;
        std::map<std::uint64_t, std::vector<double>> per_seed_non_binomial;
        for (const auto& r : runs) {
            amae[r.strategy].push_back(r.metrics.amae);
            if (r.strategy == Strategy::Nominal) {
                per_seed[r.seed].first = r.metrics.amae;
            } else {
                per_seed[r.seed].second.push_back(r.metrics.amae);
                if (r.strategy != Strategy::Binomial) per_seed_non_binomial[r.seed].push_back(r.metrics.amae);
            }
        }
        const double nominal_mean = mean_std(amae[Strategy::Nominal]).mean;
        std::string line = name + " (" + fmt("%.0f", dt.count()) + " s) mean AMAE:";
        for (Strategy s : strategies) {
            const double m = mean_std(amae[s]).mean;
            line += " " + std::string(to_string(s)) + "=" + fmt("%.4f", m);
            if (s != Strategy::Nominal) {
                o.require(m <= nominal_mean, name + ": " + std::string(to_string(s)) + " mean AMAE " +
                                                 fmt("%.4f", m) + " > nominal " + fmt("%.4f", nominal_mean));
            }
        }
        o.note(line);
        for (const auto& [seed, v] : per_seed) {
            nominal.push_back(v.first);
            soft_mean.push_back(std::accumulate(v.second.begin(), v.second.end(), 0.0) /
                                static_cast<double>(v.second.size()));
            const auto& nb = per_seed_non_binomial[seed];
            non_binomial_mean.push_back(std::accumulate(nb.begin(), nb.end(), 0.0) / static_cast<double>(nb.size()));
        }
        store.by_task[name] = std::move(runs);
    }
    const auto w = stats::wilcoxon_signed_rank(soft_mean, nominal);
    const double diff = std::accumulate(soft_mean.begin(), soft_mean.end(), 0.0) -
                        std::accumulate(nominal.begin(), nominal.end(), 0.0);
    o.note("pooled soft-vs-nominal Wilcoxon over " + std::to_string(nominal.size()) + " (task, seed) pairs: p=" +
           fmt(w.p_value) + ", mean soft - nominal = " + fmt(diff / static_cast<double>(nominal.size())));
    // Diagnostic only: the verdict above always uses every soft strategy.
    const auto w_nb = stats::wilcoxon_signed_rank(non_binomial_mean, nominal);
    o.note("diagnostic, binomial excluded: pooled p=" + fmt(w_nb.p_value));
    o.require(w.p_value < 0.05 && diff < 0.0, "pooled soft-vs-nominal Wilcoxon p=" + fmt(w.p_value) +
                                                  (diff < 0.0 ? "" : " with soft not below nominal"));
}

Outcome joint_direction(int workers) {
    Outcome o;
    const auto spec = benchmark::paired_spec();
    const auto samples = synth::generate_paired_samples(spec);
    auto options = benchmark::protocol_options("five_grade");
    options.workers = workers;
    const std::vector<Strategy> strategies{Strategy::Nominal, Strategy::Beta, Strategy::Triangular};
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_joint_protocol(samples.task_a, samples.task_b, samples.classes_a, samples.classes_b,
                                        strategies, options, "four_grade");
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    const auto truth = joint::normalise(samples.observed_table());

    std::map<Strategy, std::map<std::uint64_t, double>> kld;
    for (const auto& t : res.tables) kld[t.strategy][t.seed] = joint::kld(truth, joint::normalise(t.predicted));
    auto values = [&](Strategy s) {
        std::vector<double> v;
        for (const auto& [seed, d] : kld[s]) v.push_back(d);
        return v;
    };
    const auto nominal = values(Strategy::Nominal);
    const double nominal_mean = mean_std(nominal).mean;
    std::string line = "paired (" + fmt("%.0f", dt.count()) + " s) mean KLD: nominal=" + fmt("%.4f", nominal_mean);
    for (Strategy s : {Strategy::Beta, Strategy::Triangular}) {
        const auto v = values(s);
        const double m = mean_std(v).mean;
        const auto w = stats::wilcoxon_signed_rank(v, nominal);
        line += " " + std::string(to_string(s)) + "=" + fmt("%.4f", m) + " (p=" + fmt(w.p_value) + ")";
        o.require(m <= nominal_mean, std::string(to_string(s)) + " mean KLD above nominal");
        o.require(w.p_value < 0.05, std::string(to_string(s)) + " vs nominal Wilcoxon p=" + fmt(w.p_value));
    }
    o.note(line);
    return o;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism(const BenchmarkRuns& store, int workers) {
    Outcome o;
    // A full CLI sweep, twice, with different worker counts.
    const fs::path dir = fs::temp_directory_path() / "ordsoft_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto spec = benchmark::five_grade_spec();
    spec.n_per_class = {30, 40, 40, 40, 30};
    spec.dims = 8;
    std::ostringstream csv;
    synth::generate(spec).write_csv(csv);
    cli::write_file_atomic(dir / "data.csv", csv.str());
    cli::write_file_atomic(dir / "config.json",
                           R"({"task":"five_grade","dataset":"data.csv","n_seeds":3,"root_seed":9,)"
                           R"("search_space":{"max_configs":3},"train":{"max_epochs":15,"patience":5,"batch_size":8}})");
    std::ostringstream out, err;
    for (const auto& [sub, threads] : {std::pair{"a", "1"}, std::pair{"b", "2"}}) {
        const int code = cli::run_cli({"sweep", "--config", (dir / "config.json").string(), "--output-dir",
                                       (dir / sub).string(), "--workers", threads},
                                      out, err);
        o.require(code == 0, std::string("sweep exit code ") + std::to_string(code) + ": " + err.str());
    }
    for (const char* f : {"results.jsonl", "summary.json", "summary.txt"}) {
        const auto a = read_bytes(dir / "a" / f), b = read_bytes(dir / "b" / f);
        o.require(!a.empty() && a == b, std::string(f) + " differs between reruns");
    }
    fs::remove_all(dir);

    // One seed of the five-grade benchmark, recomputed and compared record by record.
    auto it = store.by_task.find("five_grade");
    if (it != store.by_task.end()) {
        const auto data = synth::generate(benchmark::five_grade_spec());
        auto options = benchmark::protocol_options("five_grade");
        options.workers = workers;
        const auto strategies = all_strategies();
        const auto again = run_seed(data, 5, strategies, options, benchmark::kRootSeed);
        std::vector<RunResult> first(it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(again.size()));
        o.require(cli::to_jsonl(first) == cli::to_jsonl(again), "benchmark seed records differ on rerun");
        o.note("CLI sweep rerun and benchmark seed " + std::to_string(benchmark::kRootSeed) + " rerun byte-identical");
    } else {
        o.note("CLI sweep rerun byte-identical (benchmark rerun skipped: criterion 7 not run)");
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only, known;
    int workers = 0;
    app.add_option("--only", only, "Run only these criteria")->delimiter(',')->check(CLI::Range(1, 9));
    app.add_option("--known-failure", known, "Criteria whose failure does not change the exit status")
        ->delimiter(',')
        ->check(CLI::Range(1, 9));
    app.add_option("--workers", workers, "Worker threads for the benchmark sweeps (0: default)");
    CLI11_PARSE(app, argc, argv);
    const std::set<int> selected(only.begin(), only.end()), tolerated(known.begin(), known.end());

    BenchmarkRuns store;
    const std::vector<std::tuple<int, std::string, double, std::function<Outcome()>>> criteria{
        {1, "soft-target validity", 1.0, soft_target_validity},
        {2, "gradient correctness", 1.0, gradient_correctness},
        {3, "metric oracles", 5.0, metric_oracles},
        {4, "split fidelity", 1.0, split_fidelity},
        {5, "KLD and residuals", 1.0, kld_residuals},
        {6, "statistical tests", 60.0, statistical_tests},
        {7, "AMAE direction", 0.0,
         [&] {
             Outcome o;
             amae_direction(o, store, workers);
             return o;
         }},
        {8, "joint KLD direction", 0.0, [&] { return joint_direction(workers); }},
        {9, "determinism", 0.0, [&] { return determinism(store, workers); }},
    };

    int unexpected = 0;
    for (const auto& [id, name, budget, fn] : criteria) {
        if (!selected.empty() && !selected.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        if (budget > 0.0) o.require(dt.count() < budget, "runtime over " + fmt("%.0f", budget) + " s");
        std::printf("criterion %d %-22s %s  (%.2f s)%s\n", id, name.c_str(), o.pass ? "PASS" : "FAIL", dt.count(),
                    !o.pass && tolerated.count(id) ? "  [known failure]" : "");
        for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        if (!o.pass && !tolerated.count(id)) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
