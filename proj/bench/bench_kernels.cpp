// Times the chunked OpenMP kernels against the serial reference on a
// synthetic batch and checks that both agree.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include <CLI11.hpp>

#include "ordsoft/kernels.hpp"
#include "ordsoft/synth.hpp"

using namespace ordsoft;

namespace {

template <class Fn>
double best_seconds(int reps, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        best = std::min(best, dt.count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel benchmark: OpenMP chunks vs serial reference"};
    std::size_t rows = 20000, dims = 64, hidden = 32;
    int classes = 5, reps = 5, threads = 0;
    app.add_option("--rows", rows, "Samples in the batch")->check(CLI::PositiveNumber);
    app.add_option("--dims", dims, "Feature dimensions")->check(CLI::PositiveNumber);
    app.add_option("--hidden", hidden, "Hidden width")->check(CLI::PositiveNumber);
    app.add_option("--classes", classes, "Grades")->check(CLI::Range(2, 64));
    app.add_option("--reps", reps, "Repetitions; the fastest is reported")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");
    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    synth::SynthSpec spec;
    spec.classes = classes;
    spec.n_per_class.assign(static_cast<std::size_t>(classes), rows / static_cast<std::size_t>(classes));
    spec.dims = dims;
    spec.seed = 1;
    const auto data = synth::generate(spec);
    ClassifierModel model(Architecture::Mlp, dims, hidden, classes);
    model.fit_scaler(data);
    model.initialise(2);
    softlabel::SmoothingParams params;
    const auto targets = softlabel::build_target_matrix(LabelSpace(classes), Strategy::Beta, params);

    std::vector<std::size_t> batch(data.size());
    std::iota(batch.begin(), batch.end(), std::size_t{0});
    std::vector<double> g_par(model.parameter_count()), g_ref(model.parameter_count());
    double l_par = 0.0, l_ref = 0.0;
    std::vector<double> p_par, p_ref;

    const double t_grad_ref = best_seconds(reps, [&] {
        l_ref = kernels::reference::loss_and_gradient(model, data, batch, targets, g_ref);
    });
    const double t_grad_par = best_seconds(reps, [&] {
        l_par = kernels::loss_and_gradient(model, data, batch, targets, g_par);
    });
    const double t_pred_ref = best_seconds(reps, [&] { p_ref = kernels::reference::predict_proba(model, data); });
    const double t_pred_par = best_seconds(reps, [&] { p_par = kernels::predict_proba(model, data); });

    double grad_diff = 0.0, prob_diff = 0.0;
    for (std::size_t i = 0; i < g_par.size(); ++i) {
        grad_diff = std::max(grad_diff, std::fabs(g_par[i] - g_ref[i]) / std::max(1.0, std::fabs(g_ref[i])));
    }
    for (std::size_t i = 0; i < p_par.size(); ++i) prob_diff = std::max(prob_diff, std::fabs(p_par[i] - p_ref[i]));

    std::printf("rows=%zu dims=%zu hidden=%zu classes=%d threads=%d\n", data.size(), dims, hidden, classes,
                omp_get_max_threads());
    std::printf("%-20s %12s %12s %8s\n", "kernel", "serial_ms", "openmp_ms", "speedup");
    std::printf("%-20s %12.3f %12.3f %8.2f\n", "loss_and_gradient", 1e3 * t_grad_ref, 1e3 * t_grad_par,
                t_grad_ref / t_grad_par);
    std::printf("%-20s %12.3f %12.3f %8.2f\n", "predict_proba", 1e3 * t_pred_ref, 1e3 * t_pred_par,
                t_pred_ref / t_pred_par);
    std::printf("loss rel diff %.3g, max grad rel diff %.3g, max prob diff %.3g\n",
                std::fabs(l_par - l_ref) / std::max(1.0, std::fabs(l_ref)), grad_diff, prob_diff);
    return grad_diff < 1e-9 && prob_diff < 1e-12 ? 0 : 1;
}
