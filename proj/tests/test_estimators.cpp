#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "hfm/estimators.hpp"
#include "oracles.hpp"

using namespace hfm;

namespace {

GridPath path_from_returns(const std::vector<double>& r) {
    GridPath g{"2012-01-03", 36000, 60, {0.0}};
    for (double v : r) g.log_prices.push_back(g.log_prices.back() + v);
    return g;
}

std::vector<double> random_returns(std::uint64_t seed, std::size_t n, double sd = 0.001) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, sd);
    std::vector<double> r(n);
    for (auto& v : r) v = z(rng);
    return r;
}

}  // namespace

TEST_CASE("naive moments are power sums") {
    const std::vector<double> r = {0.01, -0.02, 0.03};
    auto m = naive_moments(r);
    CHECK(m.rvar == doctest::Approx(0.0014));
    CHECK(m.rskew == doctest::Approx(0.000001 - 0.000008 + 0.000027));
    CHECK(m.rkurt == doctest::Approx(1e-8 + 16e-8 + 81e-8));
    CHECK(*m.nrskew == doctest::Approx(m.rskew / std::pow(0.0014, 1.5)));
    CHECK(*m.nrkurt == doctest::Approx(m.rkurt / (0.0014 * 0.0014)));
    CHECK(m.kind == EstimatorKind::naive);

    auto g = naive_moments(path_from_returns(r));
    CHECK(g.rvar == doctest::Approx(m.rvar));
    CHECK_THROWS_AS(naive_moments(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("normalized moments are missing without positive variance") {
    auto n = normalize_moments(0.0, 0.0, 0.0);
    CHECK_FALSE(n.nrskew);
    CHECK_FALSE(n.nrkurt);
    CHECK_FALSE(normalize_moments(-1e-6, 1e-9, 1e-12).nrkurt);
    auto zero = naive_moments(std::vector<double>{0.0, 0.0});
    CHECK_FALSE(zero.nrkurt);
}

TEST_CASE("normalized moments are scale and order invariant") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        auto r = random_returns(100 + rep, 50 + rep);
        auto base = naive_moments(r);
        for (double c : {0.001, 3.0, 250.0}) {
            std::vector<double> s(r);
            for (auto& v : s) v *= c;
            auto m = naive_moments(s);
            CHECK(*m.nrskew == doctest::Approx(*base.nrskew).epsilon(1e-9));
            CHECK(*m.nrkurt == doctest::Approx(*base.nrkurt).epsilon(1e-9));
        }
        std::shuffle(r.begin(), r.end(), rng);
        auto p = naive_moments(r);
        CHECK(p.rvar == doctest::Approx(base.rvar).epsilon(1e-12));
        CHECK(*p.nrkurt == doctest::Approx(*base.nrkurt).epsilon(1e-12));
        CHECK(*base.nrkurt > 0.0);
        CHECK(*base.nrkurt <= 1.0);
    }
    // A single non-zero return puts all mass in one term.
    CHECK(*naive_moments(std::vector<double>{0.0, 0.05, 0.0}).nrkurt == doctest::Approx(1.0));
}

TEST_CASE("gbar of the triangular weight matches quadrature") {
    const auto& w = triangular_weight();
    CHECK(w(0.25) == 0.25);
    CHECK(w(0.75) == 0.25);
    CHECK(w(0.0) == 0.0);
    CHECK(w(1.0) == 0.0);
    CHECK(w(-0.5) == 0.0);
    for (int p = 2; p <= 4; ++p) {
        auto f = [p](double x) { return std::pow(std::min(x, 1.0 - x), p); };
        const double ref = oracle::simpson(f, 0.0, 0.5, 2000) + oracle::simpson(f, 0.5, 1.0, 2000);
        CHECK(std::abs(gbar(w, p) - ref) < 1e-10);
    }
    CHECK(std::abs(gbar(w, 2) - 1.0 / 12.0) < 1e-10);
    CHECK(std::abs(gbar(w, 3) - 1.0 / 32.0) < 1e-10);
    CHECK(std::abs(gbar(w, 4) - 1.0 / 80.0) < 1e-10);
    CHECK_THROWS_AS(w.gbar(1), std::invalid_argument);
    CHECK_THROWS_AS(w.gbar(5), std::invalid_argument);
}

TEST_CASE("weights without a closed form are integrated numerically") {
    Weight sine("sine", [](double x) { return std::sin(std::numbers::pi * x); });
    auto f = [](double x) { return std::pow(std::sin(std::numbers::pi * x), 2); };
    CHECK(std::abs(sine.gbar(2) - 0.5) < 1e-10);
    CHECK(std::abs(sine.gbar(2) - oracle::simpson(f, 0, 1, 2000)) < 1e-10);
    CHECK(std::abs(sine.gbar(4) - 3.0 / 8.0) < 1e-10);
}

TEST_CASE("weight registry") {
    CHECK(&weight_by_name("min(x,1-x)") == &triangular_weight());
    CHECK(&weight_by_name("triangular") == &triangular_weight());
    CHECK_THROWS_AS(weight_by_name("gaussian"), std::invalid_argument);
    CHECK(estimator_from_string("naive") == EstimatorKind::naive);
    CHECK(to_string(EstimatorKind::preavg) == "preavg");
    CHECK_THROWS_AS(estimator_from_string("other"), std::invalid_argument);
}

TEST_CASE("pre-averaged block return") {
    // k = 4: weights g(1/4..4/4) = 0.25, 0.5, 0.25, 0.
    auto path = path_from_returns({1, 2, 3, 4, 5, 6});
    PreAvgConfig cfg{4, "min(x,1-x)"};
    auto b = preavg_return(path, cfg, 1);
    CHECK(b.weighted == doctest::Approx(0.25 * 2 + 0.5 * 3 + 0.25 * 4));
    // Weight differences: 0.25, 0.25, -0.25, -0.25.
    CHECK(b.weighted_sq == doctest::Approx(0.0625 * (4 + 9 + 16 + 25)));
    CHECK_THROWS_AS(preavg_return(path, cfg, 0), std::out_of_range);
    CHECK_THROWS_AS(preavg_return(path, cfg, 3), std::out_of_range);
    CHECK_NOTHROW(preavg_return(path, cfg, 2));
}

TEST_CASE("pre-averaged moments against the block formulas") {
    auto r = random_returns(21, 200);
    auto path = path_from_returns(r);
    for (int k : {2, 5, 10}) {
        PreAvgConfig cfg{k, "min(x,1-x)"};
        const std::size_t n = r.size();
        double s2 = 0, s3 = 0, s4 = 0, corr = 0;
        for (std::size_t i = 1; i + k <= n; ++i) {
            double y = 0, ybar = 0;
            for (int j = 1; j <= k; ++j) {
                const double gj = std::min(double(j) / k, 1.0 - double(j) / k);
                const double gp = std::min(double(j - 1) / k, 1.0 - double(j - 1) / k);
                const double ret = r[i + j - 1];
                y += gj * ret;
                ybar += (gj - gp) * (gj - gp) * ret * ret;
            }
            s2 += y * y;
            s3 += y * y * y;
            s4 += y * y * y * y;
            corr += ybar;
        }
        auto m = preavg_moments(path, cfg);
        CHECK(m.kind == EstimatorKind::preavg);
        CHECK(m.rvar == doctest::Approx(12.0 * (s2 / k - corr / (2.0 * k))).epsilon(1e-10));
        CHECK(m.rskew == doctest::Approx(32.0 * s3 / k).epsilon(1e-10));
        CHECK(m.rkurt == doctest::Approx(80.0 * s4 / k).epsilon(1e-10));
    }
}

TEST_CASE("pre-averaged moments scale with the path") {
    auto r = random_returns(33, 300);
    auto base = preavg_moments(path_from_returns(r), PreAvgConfig{});
    for (auto& v : r) v *= 2.0;
    auto m = preavg_moments(path_from_returns(r), PreAvgConfig{});
    CHECK(m.rvar == doctest::Approx(4.0 * base.rvar).epsilon(1e-10));
    CHECK(m.rskew == doctest::Approx(8.0 * base.rskew).epsilon(1e-10));
    CHECK(m.rkurt == doctest::Approx(16.0 * base.rkurt).epsilon(1e-10));
    CHECK(*m.nrkurt == doctest::Approx(*base.nrkurt).epsilon(1e-10));
}

TEST_CASE("pre-averaged moments preconditions") {
    CHECK_THROWS_AS(preavg_moments(path_from_returns(std::vector<double>(10, 0.001)), PreAvgConfig{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(preavg_moments(path_from_returns(std::vector<double>(50, 0.001)), PreAvgConfig{1, "min(x,1-x)"}),
                    std::invalid_argument);
    CHECK_NOTHROW(preavg_moments(path_from_returns(std::vector<double>(11, 0.001)), PreAvgConfig{}));
    // A bias correction larger than the squared sum leaves normalized moments missing.
    auto alt = preavg_moments(path_from_returns({0.0, 0.001, 0.001, 0.001, 0.001, 0.001, 0.001, 0.05}),
                              PreAvgConfig{2, "min(x,1-x)"});
    CHECK(alt.rvar < 0.0);
    CHECK_FALSE(alt.nrkurt);
}

TEST_CASE("bipower variation") {
    CHECK(bipower_variation(std::vector<double>{0.01, -0.02, 0.03}) ==
          doctest::Approx(std::numbers::pi / 2 * (0.0002 + 0.0006)));
    CHECK(bipower_variation(std::vector<double>(5, -0.01)) == doctest::Approx(std::numbers::pi / 2 * 4 * 1e-4));
    CHECK_THROWS_AS(bipower_variation(std::vector<double>{0.01}), std::invalid_argument);
    auto path = path_from_returns({0.01, -0.02, 0.03});
    CHECK(bipower_variation(path) == doctest::Approx(bipower_variation(std::vector<double>{0.01, -0.02, 0.03})));
    // One large return touches only two products.
    std::vector<double> r(100, 0.001);
    const double base = bipower_variation(r);
    r[50] = 0.05;
    CHECK(bipower_variation(r) - base == doctest::Approx(std::numbers::pi / 2 * 2 * (0.05 - 0.001) * 0.001));
}
