#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "oracles.hpp"
#include "ordsoft/stat_tests.hpp"

using namespace ordsoft::stats;

TEST_SUITE("stats") {
TEST_CASE("average ranks share ties") {
    const std::vector<double> v{3.0, 1.0, 3.0, 2.0};
    CHECK(average_ranks(v) == std::vector<double>{3.5, 1.0, 3.5, 2.0});
}

TEST_CASE("exact signed-rank p-values match enumeration") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> small(-4, 4);
    for (int n = 5; n <= 12; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> x(n), y(n, 0.0), d(n);
            for (int i = 0; i < n; ++i) {
                // Integer differences produce ties; zeros are dropped by both sides.
                x[i] = small(rng);
                d[i] = x[i];
            }
            int nonzero = 0;
            for (double v : d) nonzero += v != 0.0;
            if (nonzero < 5) continue;
            const auto r = wilcoxon_signed_rank(x, y);
            CHECK(r.method == TestMethod::WilcoxonExact);
            CHECK(std::abs(r.p_value - oracle::wilcoxon_enumerated(d)) < 1e-12);
        }
    }
}

TEST_CASE("signed-rank extremes and degenerate input") {
    std::vector<double> x(20), y(20);
    for (int i = 0; i < 20; ++i) {
        x[i] = 1.0 + i;
        y[i] = 0.5 * i;
    }
    const auto r = wilcoxon_signed_rank(x, y);
    CHECK(r.p_value == doctest::Approx(2.0 / std::pow(2.0, 20)).epsilon(1e-12));
    CHECK(r.statistic == 210.0);
    const auto same = wilcoxon_signed_rank(x, x);
    CHECK(same.p_value == 1.0);
    CHECK_FALSE(same.warning.empty());
    CHECK_THROWS(wilcoxon_signed_rank(std::vector<double>{1, 2, 3}, std::vector<double>{0, 0, 0}));
    CHECK_THROWS(wilcoxon_signed_rank(std::vector<double>{1, 2}, std::vector<double>{0}));
}

TEST_CASE("signed-rank normal approximation for large samples") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.3, 1.0);
    std::vector<double> x(60), y(60, 0.0);
    for (auto& v : x) v = g(rng);
    const auto r = wilcoxon_signed_rank(x, y);
    CHECK(r.method == TestMethod::WilcoxonNormal);
    CHECK(r.p_value > 0.0);
    CHECK(r.p_value < 0.1);
}

TEST_CASE("kruskal-wallis") {
    // Hand-checked: three groups without ties.
    const std::vector<std::vector<double>> groups{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
    const auto r = kruskal_wallis(groups);
    // H = 12/(9*10) * (6^2/3 + 15^2/3 + 24^2/3) - 3*10 = 7.2
    CHECK(r.statistic == doctest::Approx(7.2));
    CHECK(r.p_value == doctest::Approx(std::exp(-3.6)));
    CHECK(*r.df == 2.0);
    const std::vector<std::vector<double>> flat{{1, 1}, {1, 1}};
    const auto f = kruskal_wallis(flat);
    CHECK(f.p_value == 1.0);
    CHECK_FALSE(f.warning.empty());
    CHECK_THROWS(kruskal_wallis(std::vector<std::vector<double>>{{1, 2}}));
}

TEST_CASE("holm adjustment") {
    const std::vector<double> p{0.01, 0.04, 0.03, 0.5};
    const auto adj = holm_adjust(p);
    CHECK(adj[0] == doctest::Approx(0.04));
    CHECK(adj[2] == doctest::Approx(0.09));
    CHECK(adj[1] == doctest::Approx(0.09));  // monotone step-down
    CHECK(adj[3] == doctest::Approx(0.5));
}

TEST_CASE("two-way anova on the 5x2x20 design") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v;
    std::vector<std::string> a, b;
    for (int s = 0; s < 5; ++s)
        for (int t = 0; t < 2; ++t)
            for (int r = 0; r < 20; ++r) {
                v.push_back(g(rng) + 0.5 * s);
                a.push_back("s" + std::to_string(s));
                b.push_back(t ? "kl" : "cppd");
            }
    const auto table = two_way_anova(v, a, b, "strategy", "task");
    CHECK(table.row("strategy").df == 4);
    CHECK(table.row("task").df == 1);
    CHECK(table.row("strategy x task").df == 4);
    CHECK(table.row("Residual").df == 190);
    double ss = 0.0;
    for (const auto& row : table.rows) ss += row.ss;
    CHECK(ss == doctest::Approx(table.ss_total).epsilon(1e-10));
    CHECK(*table.row("strategy").p_value < 1e-6);
    CHECK(table.tests().size() == 3);
    v.pop_back();
    a.pop_back();
    b.pop_back();
    CHECK_THROWS(two_way_anova(v, a, b));
}

TEST_CASE("anova matches a hand-computed 2x2 design") {
    // Cells: (a0,b0)={1,3} (a0,b1)={5,7} (a1,b0)={2,4} (a1,b1)={10,12}
    const std::vector<double> v{1, 3, 5, 7, 2, 4, 10, 12};
    const std::vector<std::string> a{"x", "x", "x", "x", "y", "y", "y", "y"};
    const std::vector<std::string> b{"p", "p", "q", "q", "p", "p", "q", "q"};
    const auto t = two_way_anova(v, a, b);
    // Grand mean 5.5; A means 4, 7; B means 2.5, 8.5; cell means 2, 6, 3, 11.
    CHECK(t.row("A").ss == doctest::Approx(18.0));
    CHECK(t.row("B").ss == doctest::Approx(72.0));
    CHECK(t.row("A x B").ss == doctest::Approx(8.0));
    CHECK(t.row("Residual").ss == doctest::Approx(8.0));
    CHECK(*t.row("A").f == doctest::Approx(9.0));
}
}
