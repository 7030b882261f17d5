#include "catch_amalgamated.hpp"

#include <cmath>

#include "rislab/baselines.hpp"
#include "support.hpp"

using namespace rislab;
using Catch::Matchers::WithinRel;

namespace {

double level_sum(const PhaseConfig& c) {
    double s = 0.0;
    for (int m = 0; m < c.size(); ++m) s += (c.level(m) - 1) * (c.level(m) - 1);
    return s;
}

std::vector<double> random_table(int M, int N, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> t(static_cast<std::size_t>(std::lround(std::pow(N, M))));
    for (auto& v : t) v = u(rng);
    return t;
}

FunctionObjective table_objective(const std::vector<double>& t, int M, int N) {
    return FunctionObjective(
        [t, N](const PhaseConfig& c) {
            std::size_t code = 0;
            for (int m = c.size() - 1; m >= 0; --m) code = code * N + c.level(m);
            return t[code];
        },
        M, N);
}

bool coordinate_optimal(FunctionObjective& f, const PhaseConfig& c) {
    const double v = f.value(c);
    for (int m = 0; m < c.size(); ++m)
        for (int k = 0; k < c.resolution(); ++k)
            if (f.value(c.with(m, k)) < v) return false;
    return true;
}

}  // namespace

TEST_CASE("brute force") {
    SECTION("one binary element") {
        FunctionObjective f([](const PhaseConfig& c) { return c.level(0) ? -1.0 : 2.0; }, 1, 2);
        const auto r = brute_force(f);
        CHECK(r.evals == 2u);
        CHECK(r.value == -1.0);
    }
    SECTION("enumeration by a second route") {
        const auto t = random_table(4, 2, 7);
        auto f = table_objective(t, 4, 2);
        const auto r = brute_force(f);
        CHECK(r.value == *std::min_element(t.begin(), t.end()));
        CHECK(r.evals == 16u);
    }
    SECTION("large lattices are refused") {
        FunctionObjective f(level_sum, 32, 4);
        CHECK_THROWS_AS(brute_force(f), BudgetExceeded);
        CHECK(f.evaluations() == 0u);
    }
}

TEST_CASE("successive refinement") {
    SECTION("separable objective in one sweep") {
        FunctionObjective f(level_sum, 5, 4);
        CountingObjective counted(f);
        const auto r = coordinate_sweeps(counted, PhaseConfig({3, 0, 2, 3, 0}, 4), 1, false);
        CHECK(r.value == 0.0);
        CHECK(r.config == PhaseConfig({1, 1, 1, 1, 1}, 4));
        CHECK(r.evals == 20u);
        CHECK(counted.calls() == r.evals);
    }
    SECTION("coordinate optimal on random tables") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto t = random_table(4, 2, seed);
            auto f = table_objective(t, 4, 2);
            const auto r = successive_refinement(f, PhaseConfig::zeros(4, 2));
            CHECK(r.evals % 8 == 0);
            auto g = table_objective(t, 4, 2);
            CHECK(coordinate_optimal(g, r.config));
            CHECK(g.value(r.config) == r.value);
        }
    }
}

TEST_CASE("modified successive refinement") {
    for (int M : {32, 64}) {
        FunctionObjective f(level_sum, M, 4);
        CountingObjective counted(f);
        const auto r = modified_sr(counted, PhaseConfig::zeros(M, 4));
        CHECK(r.evals == 100u * 4u * static_cast<unsigned>(M));
        CHECK(counted.calls() == r.evals);
    }
    CHECK(100 * 4 * 32 == 12800);
    CHECK(100 * 4 * 64 == 25600);

    const auto ch = testsupport::random_channels(3, 8, 4);
    NetworkObjective a(CsiView(ch), RadioParams::uniform(3, 0), ObjectiveKind::sum_rate, 4);
    NetworkObjective b(CsiView(ch), RadioParams::uniform(3, 0), ObjectiveKind::sum_rate, 4);
    const PhaseConfig start({0, 1, 2, 3, 0, 1, 2, 3}, 4);
    CHECK(modified_sr(a, start).value <= coordinate_sweeps(b, start, 1, false).value);
}

TEST_CASE("genetic algorithm") {
    SECTION("fixed budget independent of M") {
        for (int M : {32, 64}) {
            FunctionObjective f(level_sum, M, 4);
            CountingObjective counted(f);
            Rng rng(1);
            const auto r = genetic(counted, rng);
            CHECK(r.evals == 20100u);
            CHECK(counted.calls() == r.evals);
        }
    }
    SECTION("identical population without mutation never moves") {
        FunctionObjective f(level_sum, 6, 4);
        Rng rng(2);
        GeneticSpec spec;
        spec.population = 10;
        spec.generations = 20;
        spec.mutation_rate = 0.0;
        const PhaseConfig c({3, 0, 2, 3, 0, 2}, 4);
        const auto r = genetic(f, rng, spec, std::vector<PhaseConfig>(10, c));
        CHECK(r.config == c);
        CHECK(r.value == level_sum(c));
    }
    SECTION("small lattices against enumeration") {
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto t = random_table(4, 2, 1000 + seed);
            auto f = table_objective(t, 4, 2);
            Rng rng(seed);
            hits += genetic(f, rng).value == *std::min_element(t.begin(), t.end());
        }
        CHECK(hits >= 18);
    }
    SECTION("parameter validation") {
        GeneticSpec s;
        s.population = 3;
        CHECK_THROWS(s.validate());
        s.population = 4;
        s.mutation_rate = 2.0;
        CHECK_THROWS(s.validate());
    }
}

TEST_CASE("simplified exhaustive search") {
    SECTION("one restart is one local search") {
        const auto t = random_table(5, 4, 3);
        auto f = table_objective(t, 5, 4);
        auto g = table_objective(t, 5, 4);
        Rng a(9), b(9);
        const auto r = simplified_exhaustive(f, a, 1);
        const auto l = local_search(g, random_config(5, 4, b), 5);
        CHECK(r.config == l.config);
        CHECK(r.value == l.value);
        CHECK(r.evals == g.evaluations());
    }
    SECTION("more restarts never hurt") {
        const auto t = random_table(6, 4, 5);
        double prev = INFINITY;
        for (int restarts : {1, 2, 5, 20}) {
            auto f = table_objective(t, 6, 4);
            Rng rng(4);
            const double v = simplified_exhaustive(f, rng, restarts).value;
            CHECK(v <= prev);
            prev = v;
        }
    }
    SECTION("100 restarts find the optimum") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto t = random_table(4, 2, 500 + seed);
            auto f = table_objective(t, 4, 2);
            CountingObjective counted(f);
            Rng rng(seed);
            const auto r = simplified_exhaustive(counted, rng, 100);
            CHECK(r.value == *std::min_element(t.begin(), t.end()));
            CHECK(r.evals == counted.calls());
        }
    }
}

TEST_CASE("random configuration costs one evaluation") {
    FunctionObjective f(level_sum, 8, 4);
    Rng rng(1);
    const auto r = random_configuration(f, rng);
    CHECK(r.evals == 1u);
    CHECK(r.value == level_sum(r.config));
}
