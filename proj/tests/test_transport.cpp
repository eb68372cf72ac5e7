#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ergomet/transport.hpp"
#include "ergomet/util.hpp"
#include "oracles.hpp"

using namespace ergomet;

namespace {

BlockDistribution random_dist(int alphabet, int k, std::uint64_t seed) {
    const std::size_t n = BlockDistribution::word_count(alphabet, k);
    std::vector<double> p(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = 0.05 + uniform_at(seed, 7, i);
        s += p[i];
    }
    for (double& x : p) x /= s;
    return BlockDistribution(alphabet, k, std::move(p));
}

const auto kM9 = MeasureSpec::markov({{0.9, 0.1}, {0.1, 0.9}}, {0.5, 0.5});
const auto kM8 = MeasureSpec::markov({{0.8, 0.2}, {0.2, 0.8}}, {0.5, 0.5});

}  // namespace

TEST_CASE("ot_block basics") {
    const auto u = random_dist(2, 2, 1);
    const auto r0 = ot_block(u, u, BlockCost::HammingRate);
    CHECK(r0.value == doctest::Approx(0.0).epsilon(1e-12));
    for (const auto& [a, b, w] : r0.plan.weights)
        if (w > 1e-12) CHECK(a == b);

    // point masses at distinct symbols
    const BlockDistribution d0(2, 1, {1.0, 0.0});
    const BlockDistribution d1(2, 1, {0.0, 1.0});
    CHECK(ot_block(d0, d1, BlockCost::HammingRate).value == doctest::Approx(1.0));
    CHECK(ot_block(d0, d1, BlockCost::Cantor).value == doctest::Approx(1.0));

    CHECK_THROWS_AS(ot_block(random_dist(2, 1, 2), random_dist(2, 2, 3), BlockCost::Cantor),
                    std::invalid_argument);
}

TEST_CASE("ot_block agrees with the vertex-enumeration oracle") {
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const int alphabet = trial % 2 ? 4 : 2;
        const int k = trial % 2 ? 1 : 2;
        const auto a = random_dist(alphabet, k, 100 + trial);
        const auto b = random_dist(alphabet, k, 200 + trial);
        for (const auto cost : {BlockCost::HammingRate, BlockCost::Cantor}) {
            std::vector<std::vector<double>> cm(a.probs().size(),
                                                std::vector<double>(b.probs().size()));
            for (std::size_t i = 0; i < a.probs().size(); ++i)
                for (std::size_t j = 0; j < b.probs().size(); ++j)
                    cm[i][j] = block_pair_cost(i, j, alphabet, k, cost);
            const double oracle = oracles::brute_force_ot(a.probs(), b.probs(), cm);
            const auto res = ot_block(a, b, cost);
            CHECK(std::abs(res.value - oracle) <= 1e-9);
            CHECK(res.plan.marginal_defect(a, b) <= 1e-8);
            CHECK(res.plan.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("dbar_lower on Bernoulli pairs is |p-q|") {
    for (int t = 0; t < 10; ++t) {
        const double p = 0.05 + 0.09 * t;
        const double q = 0.95 - 0.04 * t;
        const auto a = MeasureSpec::bernoulli({1.0 - p, p});
        const auto b = MeasureSpec::bernoulli({1.0 - q, q});
        for (const auto& [k, v] : dbar_lower(a, b, 4))
            CHECK(v == doctest::Approx(std::abs(p - q)).epsilon(1e-9));
    }
    for (const auto& [k, v] : dbar_lower(kM9, kM9, 3)) CHECK(v == doctest::Approx(0.0));
    CHECK(dbar_lower(MeasureSpec::periodic({0, 1}), MeasureSpec::periodic({1, 0}), 1)[0].second ==
          doctest::Approx(0.0));
}

TEST_CASE("superadditivity of block OT values") {
    const std::vector<std::pair<MeasureSpec, MeasureSpec>> pairs = {
        {MeasureSpec::bernoulli({0.5, 0.5}), MeasureSpec::bernoulli({0.2, 0.8})},
        {kM9, kM8},
        {MeasureSpec::periodic({0, 1, 1}), MeasureSpec::bernoulli({0.5, 0.5})}};
    for (const auto& [a, b] : pairs) {
        const auto vals = dbar_lower(a, b, 8);
        for (int m = 1; m < 8; ++m)
            for (int n = 1; m + n <= 8; ++n) {
                const double vmn = vals[static_cast<std::size_t>(m + n - 1)].second;
                const double vm = vals[static_cast<std::size_t>(m - 1)].second;
                const double vn = vals[static_cast<std::size_t>(n - 1)].second;
                CHECK((m + n) * vmn >= m * vm + n * vn - 1e-8);
            }
    }
}

TEST_CASE("dbar_upper") {
    CHECK(dbar_upper(kM9, kM9, CouplingRule::MaximalPerStep, 1, 10000) == 0.0);
    const auto a = MeasureSpec::bernoulli({0.5, 0.5});
    const auto b = MeasureSpec::bernoulli({0.2, 0.8});
    CHECK(std::abs(dbar_upper(a, b, CouplingRule::Monotone, 2, 100000) - 0.3) <= 0.01);
    const double u = dbar_upper(kM9, kM8, CouplingRule::MaximalPerStep, 3, 100000);
    CHECK(u >= dbar_lower(kM9, kM8, 4).back().second - 0.01);
    CHECK_THROWS_AS(dbar_upper(a, b, CouplingRule::Monotone, 1, 100), std::invalid_argument);
}

TEST_CASE("rho_bar_bounds") {
    const auto self = rho_bar_bounds(kM9, kM9, 3, 4, 10000);
    CHECK(self.lower == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(self.upper <= 0.01);

    // point masses at 0^inf and 1^inf, as degenerate Bernoulli specs
    const auto pm = rho_bar_bounds(MeasureSpec::bernoulli({1.0, 0.0}),
                                   MeasureSpec::bernoulli({0.0, 1.0}), 2, 5, 10000);
    CHECK(pm.lower == doctest::Approx(1.0));
    CHECK(pm.upper == doctest::Approx(1.0));
    CHECK(!pm.lower_method.empty());
    CHECK(!pm.upper_method.empty());
}

TEST_CASE("stationarity cost sandwich over seeded pairs") {
    for (std::uint64_t t = 0; t < 10; ++t) {
        const double p = 0.1 + 0.08 * static_cast<double>(t);
        const auto a = MeasureSpec::bernoulli({1.0 - p, p});
        const auto b = t % 2 ? MeasureSpec::bernoulli({0.5, 0.5}) : kM9;
        const double dl = dbar_lower(a, b, 4).back().second;
        const double du = dbar_upper(a, b, CouplingRule::Monotone, 10 + t, 100000);
        const auto rb = rho_bar_bounds(a, b, 4, 10 + t, 100000);
        CHECK(dl <= rb.upper + 1e-9);
        CHECK(rb.lower <= rb.upper + 1e-9);
        CHECK(rb.upper <= 2.0 * du + 0.02);
    }
}

TEST_CASE("fano entropy-gap lower bound") {
    CHECK(fano_dbar_lower(kM9, kM9, 4) == 0.0);
    CHECK(fano_dbar_lower(MeasureSpec::periodic({0, 1, 1}), MeasureSpec::bernoulli({0.5, 0.5}), 6) ==
          doctest::Approx(0.5).epsilon(1e-9));

    const auto a = MeasureSpec::bernoulli({0.5, 0.5});
    const auto b = MeasureSpec::bernoulli({0.4, 0.6});
    const double gap = std::abs(entropy_estimate(a, 2) - entropy_estimate(b, 2));
    CHECK(gap == doctest::Approx(0.0201).epsilon(0.01));
    const double fano = fano_dbar_lower(a, b, 2);
    CHECK(std::abs(fano - oracles::fano_scan(gap)) <= 2e-6);
    CHECK(fano <= dbar_upper(a, b, CouplingRule::Monotone, 6, 100000) + 0.02);
}

TEST_CASE("dbar_lower metric axioms at fixed order") {
    std::vector<MeasureSpec> specs;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const double p = 0.1 + 0.07 * static_cast<double>(s);
        const double q = 0.3 + 0.1 * static_cast<double>(s);
        const double r = std::max(0.0, 1.0 - p - q);
        const double z = p + q + r;
        specs.push_back(MeasureSpec::bernoulli({p / z, q / z, r / z}));
    }
    const auto d = [](const MeasureSpec& x, const MeasureSpec& y) {
        return dbar_lower(x, y, 2).back().second;
    };
    for (const auto& x : specs)
        for (const auto& y : specs) {
            CHECK(d(x, y) == doctest::Approx(d(y, x)).epsilon(1e-9));
            for (const auto& z : specs) CHECK(d(x, z) <= d(x, y) + d(y, z) + 1e-9);
        }
}
