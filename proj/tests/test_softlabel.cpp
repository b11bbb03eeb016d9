#include <doctest.h>

#include <cmath>
#include <vector>

#include "ordsoft/softlabel.hpp"

using namespace ordsoft;
using namespace ordsoft::softlabel;

namespace {

void check_row(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-15) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

// Composite Simpson integral of the Beta(a, b) density over [lo, hi]; the
// normalising constant comes from a separate integral over [0, 1].
double simpson_beta_mass(double a, double b, double lo, double hi) {
    auto f = [&](double x) { return std::pow(x, a - 1) * std::pow(1 - x, b - 1); };
    auto integrate = [&](double l, double h) {
        const int n = 20000;
        const double step = (h - l) / n;
        double s = f(l) + f(h);
        for (int i = 1; i < n; ++i) s += f(l + i * step) * (i % 2 ? 4 : 2);
        return s * step / 3;
    };
    return integrate(lo, hi) / integrate(0.0, 1.0);
}

}  // namespace

TEST_SUITE("softlabel") {
TEST_CASE("triangular rows") {
    check_row(triangular_row(4, 1, 0.10), {0.10, 0.80, 0.10, 0.0});
    check_row(triangular_row(4, 0, 0.05), {0.95, 0.05, 0.0, 0.0});
    check_row(triangular_row(5, 2, 0.01), {0.0, 0.01, 0.98, 0.01, 0.0});
    check_row(triangular_row(4, 3, 0.10), {0.0, 0.0, 0.10, 0.90});
    CHECK_THROWS(triangular_row(4, 1, 0.5));
    CHECK_THROWS(triangular_row(4, 1, 0.0));
    CHECK_THROWS(triangular_row(4, 4, 0.1));
}

TEST_CASE("binomial rows") {
    check_row(binomial_row(4, 0), {1, 0, 0, 0});
    check_row(binomial_row(4, 1), {8.0 / 27, 12.0 / 27, 6.0 / 27, 1.0 / 27}, 1e-15);
    check_row(binomial_row(2, 1), {0, 1});
    CHECK_THROWS(binomial_row(1, 0));
}

TEST_CASE("exponential rows") {
    // Scalar oracle: exp(-d) normalised.
    double z = 0.0;
    for (int d = 0; d < 4; ++d) z += std::exp(-d);
    std::vector<double> want;
    for (int d = 0; d < 4; ++d) want.push_back(std::exp(-d) / z);
    check_row(exponential_row(4, 0, 1.0), want, 1e-15);
    CHECK(want[0] == doctest::Approx(0.6439).epsilon(1e-4));
    const auto sym = exponential_row(3, 1, 2.0);
    CHECK(sym[0] == sym[2]);
    CHECK(sym[1] > sym[0]);
    const double e = std::exp(1.0);
    check_row(exponential_row(2, 0, 1.0), {e / (e + 1), 1 / (e + 1)}, 1e-15);
    CHECK_THROWS(exponential_row(4, 0, 0.0));
}

TEST_CASE("beta rows") {
    for (int J = 2; J <= 6; ++J)
        for (int k = 0; k < J; ++k)
            for (double s : {0.5, 5.0, 10.0, 40.0}) {
                const auto row = beta_row(J, k, s);
                double sum = 0.0;
                for (double v : row) sum += v;
                CHECK(std::abs(sum - 1.0) < 1e-12);
            }
    const auto flat = beta_row(2, 0, 1e-12);
    CHECK(flat[0] == doctest::Approx(0.5).epsilon(1e-9));
    // Mode segment confirmed by numerical integration of the density.
    const double m = 3.0 / 8.0, s = 10.0;
    const double a = 1 + s * m, b = 1 + s * (1 - m);
    const auto row = beta_row(4, 1, s);
    std::size_t best = 0;
    for (std::size_t j = 0; j < 4; ++j) {
        const double mass = simpson_beta_mass(a, b, j / 4.0, (j + 1) / 4.0);
        CHECK(std::abs(row[j] - mass) < 1e-9);
        if (mass > simpson_beta_mass(a, b, best / 4.0, (best + 1) / 4.0)) best = j;
    }
    CHECK(best == 1);
    CHECK(argmax(row) == 1);
}

TEST_CASE("nominal smoothing") {
    check_row(nominal_smooth_row(4, 1, 0.8), {0.2, 0.4, 0.2, 0.2}, 1e-15);
    check_row(nominal_smooth_row(4, 1, 0.0), {0, 1, 0, 0});
    check_row(nominal_smooth_row(4, 1, 1.0), {0.25, 0.25, 0.25, 0.25});
    CHECK_THROWS(nominal_smooth_row(4, 1, 1.5));
}

TEST_CASE("ordinal blending") {
    const std::vector<double> soft{0.1, 0.8, 0.1, 0.0};
    check_row(blend_ordinal_row(1, soft, 1.0), soft);
    check_row(blend_ordinal_row(1, soft, 0.8), {0.08, 0.84, 0.08, 0.0}, 1e-15);
    check_row(blend_ordinal_row(1, soft, 0.0), {0, 1, 0, 0});
    CHECK_THROWS(blend_ordinal_row(1, std::vector<double>{0.1, 0.8, 0.2, 0.0}, 0.5));
    // Linearity holds exactly element-wise.
    const auto ex = exponential_row(5, 2, 1.5);
    const auto blended = blend_ordinal_row(2, ex, 0.37);
    for (std::size_t j = 0; j < 5; ++j) CHECK(blended[j] == (1 - 0.37) * (j == 2 ? 1.0 : 0.0) + 0.37 * ex[j]);
}

TEST_CASE("target matrices") {
    const auto nominal = build_target_matrix(LabelSpace(5), Strategy::Nominal, {});
    for (int k = 0; k < 5; ++k)
        for (int j = 0; j < 5; ++j) CHECK(nominal.at(k, j) == (k == j ? 1.0 : 0.0));
    SmoothingParams tri;
    tri.alpha = 0.10;
    tri.eta = 1.0;
    const auto t = build_target_matrix(LabelSpace(4), Strategy::Triangular, tri);
    for (int k = 0; k < 4; ++k) check_row({t.row(k).begin(), t.row(k).end()}, triangular_row(4, k, 0.10));
    SmoothingParams bp;
    bp.concentration = 10.0;
    bp.eta = 0.8;
    const auto b = build_target_matrix(LabelSpace(4), Strategy::Beta, bp);
    for (int k = 0; k < 4; ++k) {
        CHECK(is_probability_vector(b.row(k)));
        CHECK(is_unimodal_at(b.row(k), static_cast<std::size_t>(k)));
        CHECK(argmax(b.row(k)) == static_cast<std::size_t>(k));
    }
    SmoothingParams ns;
    ns.eta = 0.8;
    const auto smoothed = build_target_matrix(LabelSpace(4), Strategy::NominalSmoothed, ns);
    check_row({smoothed.row(1).begin(), smoothed.row(1).end()}, {0.2, 0.4, 0.2, 0.2}, 1e-15);
}

TEST_CASE("parameter validation") {
    SmoothingParams p;
    p.eta = 1.2;
    CHECK_THROWS(validate(Strategy::Beta, p));
    p = {};
    p.concentration = -1;
    CHECK_THROWS(validate(Strategy::Beta, p));
    CHECK_NOTHROW(validate(Strategy::Triangular, p));  // concentration is irrelevant here
}

TEST_CASE("vector checks") {
    CHECK(is_probability_vector(std::vector<double>{0.5, 0.5}));
    CHECK_FALSE(is_probability_vector(std::vector<double>{0.6, 0.5}));
    CHECK_FALSE(is_probability_vector(std::vector<double>{1.1, -0.1}));
    CHECK(is_unimodal_at(std::vector<double>{0.1, 0.2, 0.5, 0.2}, 2));
    CHECK_FALSE(is_unimodal_at(std::vector<double>{0.3, 0.1, 0.5, 0.1}, 2));
}
}
