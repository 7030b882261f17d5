#include "catch_amalgamated.hpp"

#include <cmath>
#include <map>
#include <set>

#include "rislab/baselines.hpp"
#include "rislab/search.hpp"
#include "support.hpp"

using namespace rislab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double level_sum(const PhaseConfig& c) {
    double s = 0.0;
    for (int m = 0; m < c.size(); ++m) s += c.level(m);
    return s;
}

// Pseudo-random objective keyed by the configuration's mixed-radix code.
FunctionObjective table_objective(int M, int N, std::uint64_t seed) {
    return FunctionObjective(
        [seed, N](const PhaseConfig& c) {
            std::uint64_t code = 0;
            for (int m = c.size() - 1; m >= 0; --m) code = code * static_cast<std::uint64_t>(N) + c.level(m);
            return static_cast<double>(splitmix64(seed ^ splitmix64(code)) >> 11) * 0x1.0p-52 - 1.0;
        },
        M, N);
}

double exhaustive_min(FunctionObjective f) {
    const int M = f.elements(), N = f.resolution();
    double best = INFINITY;
    std::vector<int> k(M, 0);
    for (long code = 0; code < std::lround(std::pow(N, M)); ++code) {
        long c = code;
        for (int m = 0; m < M; ++m, c /= N) k[m] = static_cast<int>(c % N);
        best = std::min(best, f.value(PhaseConfig(k, N)));
    }
    return best;
}

}  // namespace

TEST_CASE("neighborhoods") {
    CHECK(neighbors(PhaseConfig({0}, 2)).size() == 2);
    CHECK(neighbors(PhaseConfig({1, 3}, 4)).size() == 7);
    const PhaseConfig c({5, 0, 7}, 8);
    const auto nb = neighbors(c);
    CHECK(nb.size() == 22);
    CHECK(nb.front() == c);
    std::set<std::vector<int>> seen;
    for (const auto& n : nb) {
        seen.insert({n.levels().begin(), n.levels().end()});
        int diff = 0;
        for (int m = 0; m < 3; ++m) diff += n.level(m) != c.level(m);
        CHECK(diff <= 1);
    }
    CHECK(seen.size() == 22);
    // every configuration at Hamming distance one is present
    int expected = 0;
    for (int m = 0; m < 3; ++m)
        for (int k = 0; k < 8; ++k)
            if (k != c.level(m)) {
                ++expected;
                auto v = std::vector<int>(c.levels().begin(), c.levels().end());
                v[m] = k;
                CHECK(seen.count(v) == 1);
            }
    CHECK(expected == 21);
}

TEST_CASE("local search") {
    SECTION("one coordinate per round on the level sum") {
        FunctionObjective f(level_sum, 2, 4);
        auto r = local_search(f, PhaseConfig({3, 3}, 4), 1);
        CHECK(r.config == PhaseConfig({0, 3}, 4));
        r = local_search(f, PhaseConfig({3, 3}, 4), 2);
        CHECK(r.config == PhaseConfig({0, 0}, 4));
        CHECK(r.value == 0.0);
    }
    SECTION("a local minimizer costs one scan") {
        FunctionObjective f(level_sum, 5, 4);
        const auto r = local_search(f, PhaseConfig::zeros(5, 4), 5);
        CHECK(r.config == PhaseConfig::zeros(5, 4));
        CHECK(f.evaluations() == 5u * 3u + 1u);
        CHECK(r.rounds == 1);
    }
    SECTION("output is a neighborhood minimum") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto f = table_objective(3, 2, seed);
            const auto r = local_search(f, PhaseConfig::zeros(3, 2), 8);
            for (const auto& n : neighbors(r.config)) CHECK(r.value <= f.value(n));
        }
    }
    SECTION("counted evaluations") {
        auto f = table_objective(4, 4, 3);
        CountingObjective counted(f);
        const auto e0 = f.evaluations();
        local_search(counted, PhaseConfig::zeros(4, 4), 4);
        CHECK(counted.calls() == f.evaluations() - e0);
    }
}

TEST_CASE("filled function values") {
    const double r = 0.7;
    const PhaseConfig c({1, 2, 3}, 4);
    CHECK(filled_value(0.0, c, c, r) == 2.0);
    CHECK(filled_value(-r, 5.0, r) == 0.0);
    CHECK(filled_branch(-r, r) == 0.0);
    CHECK_THAT(filled_branch(-r / 2.0, r), WithinAbs(0.5, 1e-15));
    CHECK_THROWS_AS(filled_branch(0.0, 0.0), std::domain_error);

    double prev = -INFINITY;
    for (int i = 0; i <= 1000; ++i) {
        const double dq = -3.0 * r + 4.0 * r * i / 1000.0;
        const double v = filled_branch(dq, r);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("phase distance") {
    const PhaseConfig a({0, 0}, 4), b({3, 1}, 4);
    const double q = std::numbers::pi / 2.0;
    CHECK_THAT(phase_distance2(a, b), WithinRel(9 * q * q + q * q, 1e-14));
    CHECK_THAT(phase_distance2(a, b, true), WithinRel(2 * q * q, 1e-14));
}

TEST_CASE("global search") {
    SECTION("separable objective reaches the origin") {
        FunctionObjective f(level_sum, 6, 4);
        Rng rng(3);
        const auto r = global_search(f, random_config(6, 4, rng), SearchBudget{});
        CHECK(r.config == PhaseConfig::zeros(6, 4));
        CHECK(r.value == 0.0);
    }
    SECTION("random tables against enumeration") {
        int hits = 0;
        for (std::uint64_t seed = 100; seed < 120; ++seed) {
            auto f = table_objective(4, 2, seed);
            const auto r = global_search(f, PhaseConfig::zeros(4, 2), SearchBudget::ogs());
            hits += r.value == exhaustive_min(table_objective(4, 2, seed));
        }
        CHECK(hits >= 19);
    }
    SECTION("evaluation accounting and the complexity bound") {
        for (int M : {1, 2, 3, 6, 10}) {
            for (int N : {2, 4, 8}) {
                for (int tau : {1, 3, 10}) {
                    auto f = table_objective(M, N, static_cast<std::uint64_t>(M * 100 + N * 10 + tau));
                    CountingObjective counted(f);
                    SearchBudget b;
                    b.tau = tau;
                    Rng rng(M + N);
                    const auto r = global_search(counted, random_config(M, N, rng), b);
                    CHECK(r.evals == counted.calls());
                    CHECK(r.evals <= complexity_bound(N, M, b));
                }
            }
        }
    }
    SECTION("trace is monotone") {
        auto f = table_objective(5, 4, 9);
        const auto r = global_search(f, PhaseConfig::zeros(5, 4), SearchBudget{}, true);
        REQUIRE_FALSE(r.trace.empty());
        for (std::size_t k = 1; k < r.trace.size(); ++k) {
            CHECK(r.trace[k].value < r.trace[k - 1].value);
            CHECK(r.trace[k].evals >= r.trace[k - 1].evals);
        }
        CHECK(r.trace.back().value == r.value);
    }
    SECTION("budget validation") {
        SearchBudget b;
        b.eps = 20;
        FunctionObjective f(level_sum, 2, 2);
        CHECK_THROWS(global_search(f, PhaseConfig::zeros(2, 2), b));
    }
}

TEST_CASE("complexity bound") {
    CHECK(complexity_bound(4, 32, 10, 10.0, 0.01, 32) == 5247591u);
    const double ratio = static_cast<double>(complexity_bound(4, 64, SearchBudget{})) /
                         static_cast<double>(complexity_bound(4, 32, SearchBudget{}));
    CHECK(ratio >= 7.0);
    CHECK(ratio <= 9.0);
    // tau -> infinity leaves the unit coefficient on the second term
    const double big = static_cast<double>(complexity_bound(4, 8, 1000000, 10.0, 0.01, 8));
    const double nm = 24.0;
    CHECK_THAT(big, WithinRel(nm * 8 + 4 * nm * (nm + 1) * 4 * 8, 1e-4));
    CHECK(SearchBudget{}.filled_cap(32, 4) == 1552u);
    CHECK_THROWS(complexity_bound(1, 4, 1, 10, 0.01, 4));
}

TEST_CASE("network objective incremental values match full evaluation") {
    const CsiView v(testsupport::random_channels(3, 6, 4));
    RadioParams r = RadioParams::uniform(3, 0);
    r.noise_dbm = 0;
    for (auto kind : {ObjectiveKind::sum_rate, ObjectiveKind::max_min}) {
        NetworkObjective f(v, r, kind, 4);
        const PhaseConfig base({1, 2, 3, 0, 1, 2}, 4);
        f.anchor(base);
        const auto e = testsupport::scalar_gains(v.channels(), {base});
        const auto want = testsupport::scalar_rates(e, 3, r.powers_watts(), r.noise_watts());
        double sum = 0.0, worst = INFINITY;
        for (double x : want) {
            sum += x;
            worst = std::min(worst, x);
        }
        CHECK_THAT(f.value_at_anchor(), WithinRel(kind == ObjectiveKind::sum_rate ? -sum : -worst, 1e-12));
        for (int m = 0; m < 6; ++m)
            for (int k = 0; k < 4; ++k) {
                const double inc = f.value_with(m, k);
                NetworkObjective g(v, r, kind, 4);
                CHECK_THAT(inc, WithinRel(g.value(base.with(m, k)), 1e-10));
            }
    }
}

TEST_CASE("score objective incremental values match the metric") {
    const CsiView v(testsupport::random_channels(3, 5, 8, true));
    const RadioParams r = RadioParams::uniform(3, 0);
    const auto local = restrict(v, 2);
    ScoreObjective f(local, 2, r, 4);
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto c = random_config(5, 4, rng);
        f.anchor(c);
        CHECK_THAT(-f.value_at_anchor(), WithinRel(score(v, 2, c, r), 1e-10));
        CHECK_THAT(-f.value_with(1, 3), WithinRel(score(v, 2, c.with(1, 3), r), 1e-10));
        CHECK_THAT(-f.value(c), WithinRel(score(v, 2, c, r), 1e-10));
    }
}

TEST_CASE("distributed optimization") {
    SECTION("single transmitter equals centralized score optimization") {
        auto ch = testsupport::random_channels(1, 4, 3, true);
        const RadioParams r = RadioParams::uniform(1, 0);
        const PhaseConfig start({1, 1, 0, 2}, 4);
        const auto d = optimize_distributed(CsiView(ch), r, {start}, SearchBudget{});
        ch.distributed = false;
        ScoreObjective f(CsiView(ch), 0, r, 4);
        const auto c = global_search(f, start, SearchBudget{});
        CHECK(d[0].config == c.config);
        CHECK(d[0].value == c.value);
    }
    SECTION("without interference the score is the SNR") {
        auto ch = testsupport::random_channels(2, 4, 5, true);
        for (int tx = 0; tx < 2; ++tx) {
            ch.direct[tx * 2 + (1 - tx)] = {};
            for (auto& g : ch.reflective[tx][1 - tx]) g = {};
        }
        const RadioParams r = RadioParams::uniform(2, 0);
        const CsiView v(ch);
        const auto res = optimize_distributed(v, r, {PhaseConfig::zeros(4, 4), PhaseConfig::zeros(4, 4)}, SearchBudget{});
        for (int tx = 0; tx < 2; ++tx)
            CHECK_THAT(res[tx].metric, WithinRel(snr_only(v, tx, res[tx].config, r), 1e-12));
    }
    SECTION("per-transmitter brute force") {
        const CsiView v(testsupport::random_channels(2, 4, 12, true));
        const RadioParams r = RadioParams::uniform(2, 0);
        const auto res = optimize_distributed(v, r, {PhaseConfig::zeros(4, 2), PhaseConfig::zeros(4, 2)}, SearchBudget{});
        for (int tx = 0; tx < 2; ++tx) {
            ScoreObjective f(restrict(v, tx), tx, r, 2);
            CHECK_THAT(res[tx].value, WithinRel(brute_force(f).value, 1e-10));
        }
    }
    SECTION("centralized topology is refused") {
        const CsiView v(testsupport::random_channels(2, 4, 12, false));
        CHECK_THROWS_AS(optimize_distributed(v, RadioParams::uniform(2, 0), {PhaseConfig::zeros(4, 2), PhaseConfig::zeros(4, 2)},
                                             SearchBudget{}),
                        UnsupportedMode);
    }
}
