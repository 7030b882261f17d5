#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>

#include "rislab/bounds.hpp"
#include "support.hpp"

using namespace rislab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SymmetricScenario fig_bound_geometry(double p_dbm) {
    return SymmetricScenario::from_distances(3, 8, dbm_to_watts(p_dbm), dbm_to_watts(-80), -30, 25.0, 3.9,
                                             std::sqrt(2.0), 2.0, 24.02, 2.1);
}

SymmetricScenario strong_direct() {
    SymmetricScenario s;
    s.K = 3;
    s.N = 4;
    s.P = 0.1;
    s.noise = 1e-11;
    s.sigma_hd2 = 1e-8;
    s.nu_prime = 1e-14;
    return s;
}

}  // namespace

TEST_CASE("Gaussian tail") {
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_inverse(0.5) == 0.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
    for (int t = 0; t < 10; ++t) {
        const double p = u(rng);
        CHECK_THAT(q_function(q_inverse(p)), WithinAbs(p, 1e-12));
    }
    CHECK_THROWS(q_inverse(0.0));
    CHECK_THROWS(q_inverse(1.0));
}

TEST_CASE("cascaded gain variance") {
    CHECK(cascaded_variance(16, 1.0, 1.0) == 16.0);
    CHECK(cascaded_variance(0, 1.0, 1.0) == 0.0);

    const int M = 8, N = 4;
    const double sg2 = 0.5, mh = 1.5;
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> level(0, N - 1);
    std::normal_distribution<double> n(0.0, std::sqrt(sg2 / 2.0));
    const int draws = 100000;
    cplx mean{};
    double power = 0.0;
    for (int t = 0; t < draws; ++t) {
        cplx acc{};
        for (int m = 0; m < M; ++m) {
            const cplx g(n(rng), n(rng));
            acc += g * std::polar(1.0, 2.0 * std::numbers::pi * level(rng) / N) * mh;
        }
        mean += acc;
        power += std::norm(acc);
    }
    mean /= draws;
    CHECK_THAT(power / draws - std::norm(mean), WithinRel(cascaded_variance(M, sg2, mh), 0.05));
}

TEST_CASE("small gain probability") {
    CHECK(small_gain_probability(0.0, 1.0) == 0.0);
    CHECK_THAT(small_gain_probability(0.2, 3.0), WithinRel(4.0 * small_gain_probability(0.1, 3.0), 1e-14));
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    int hits = 0;
    const int draws = 1000000;
    for (int t = 0; t < draws; ++t) {
        const double re = n(rng);
        hits += std::abs(cplx(re, n(rng))) < 0.05;
    }
    CHECK(static_cast<double>(hits) / draws > small_gain_probability(0.1, 1.0));
    CHECK_THROWS(small_gain_probability(0.1, 0.0));
}

TEST_CASE("centralized bound") {
    const auto s = strong_direct();

    SECTION("tiny target clamps to M- + 1") {
        const auto r = min_elements_centralized(s, 1e-12);
        REQUIRE(r.feasible);
        CHECK(r.m_min == 11);
        CHECK(r.clamped);
    }
    SECTION("result is the ceiling of the minimized bracket") {
        for (double target : {5.0, 20.0, 60.0}) {
            const auto r = min_elements_centralized(s, target);
            REQUIRE(r.feasible);
            CHECK(r.m_min >= r.value);
            if (!r.clamped) CHECK(r.m_min - 1 < r.value);
            const auto b = centralized_bracket(s, target, r.a_star);
            REQUIRE(b);
            CHECK_THAT(std::max(*b, r.a_star), WithinRel(r.value, 1e-12));
        }
    }
    SECTION("monotone in target and in 1/P") {
        int prev = 0;
        for (double target : {1.0, 5.0, 20.0, 40.0, 60.0}) {
            const auto r = min_elements_centralized(s, target);
            REQUIRE(r.feasible);
            CHECK(r.m_min >= prev);
            prev = r.m_min;
        }
        prev = 1 << 30;
        for (double p : {0.01, 0.03, 0.1, 0.3, 1.0}) {
            auto sp = s;
            sp.P = p;
            const auto r = min_elements_centralized(sp, 20.0);
            if (!r.feasible) continue;
            CHECK(r.m_min <= prev);
            prev = r.m_min;
        }
    }
    SECTION("unreachable target is infeasible") {
        const auto r = min_elements_centralized(s, 1e9);
        CHECK_FALSE(r.feasible);
        CHECK(std::isnan(r.value));
    }
    SECTION("grid records every a") {
        const auto r = min_elements_centralized(s, 5.0, AGrid{0, 10, 0.5});
        CHECK(r.grid.size() == 21);
    }
    SECTION("the published validity interval leaves the fig-bound geometry infeasible") {
        CHECK_FALSE(min_elements_centralized(fig_bound_geometry(20), 0.5).feasible);
    }
}

TEST_CASE("implicit centralized bound") {
    const auto lo = min_elements_centralized_implicit(fig_bound_geometry(20), 0.5);
    REQUIRE(lo.feasible);
    const auto hi = min_elements_centralized_implicit(fig_bound_geometry(20), 1.0);
    REQUIRE(hi.feasible);
    CHECK(hi.m_min >= lo.m_min);
    CHECK(centralized_sinr_form(fig_bound_geometry(20), lo.m_min, lo.a_star, lo.m_min, lo.m_min) >= 0.5);
    const auto more_power = min_elements_centralized_implicit(fig_bound_geometry(30), 1.0);
    REQUIRE(more_power.feasible);
    CHECK(more_power.m_min <= hi.m_min);
}

TEST_CASE("distributed bound") {
    SymmetricScenario s = strong_direct();

    SECTION("single user needs no extra elements") {
        s.K = 1;
        const auto r = min_elements_distributed(s, 10.0);
        REQUIRE(r.feasible);
        CHECK(r.m_min == 11);
        CHECK(r.clamped);
    }
    SECTION("strict inequality") {
        for (double target : {50.0, 200.0, 800.0}) {
            const auto r = min_elements_distributed(s, target);
            REQUIRE(r.feasible);
            CHECK(r.m_min > r.value);
            if (!r.clamped) CHECK(r.m_min - 1 <= r.value);
        }
    }
    SECTION("monotone in the score target") {
        int prev = 0;
        for (double target : {1.0, 10.0, 100.0, 400.0, 800.0}) {
            const auto r = min_elements_distributed(s, target);
            if (!r.feasible) break;
            CHECK(r.m_min >= prev);
            prev = r.m_min;
        }
    }
    SECTION("log coefficient is smaller than the centralized one") {
        std::mt19937_64 rng(9);
        std::uniform_int_distribution<int> k(2, 6);
        for (int t = 0; t < 5; ++t) {
            auto p = s;
            p.K = k(rng);
            // same log argument on both sides: coefficient ratio is (K-1)/K^2
            const double arg = 37.0;
            CHECK((p.K - 1) * log_base(arg, p.N) < p.K * p.K * log_base(arg, p.N));
        }
    }
}

TEST_CASE("scenario helpers") {
    LinkStats st;
    st.sigma_hd2 = 2.0;
    st.sigma_g2 = 3.0;
    st.m_h = 0.5;
    st.sigma_h_tilde2 = 0.25;
    CHECK(SymmetricScenario::from_stats(st, false, 2, 4, 1, 1).nu_prime == 0.75);
    CHECK(SymmetricScenario::from_stats(st, true, 2, 4, 1, 1).nu_prime == 0.75);
    st.sigma_h_tilde2 = 1.0;
    CHECK(SymmetricScenario::from_stats(st, true, 2, 4, 1, 1).nu_prime == 3.0);
    SymmetricScenario bad;
    CHECK_THROWS(bad.validate());
}
