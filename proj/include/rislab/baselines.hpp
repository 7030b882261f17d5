#pragma once

// Reference optimizers: exhaustive enumeration, successive refinement and its
// fixed-budget variant, a generational GA, multi-start descent and a single
// random configuration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rislab/model.hpp"
#include "rislab/objective.hpp"
#include "rislab/random.hpp"
#include "rislab/search.hpp"

namespace rislab {

inline constexpr double brute_force_default_cap = 16777216.0;  // 2^24

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every point of the lattice in odometer order; evals = N^M.
template <LatticeObjective F>
OptResult brute_force(F& f, double cap = brute_force_default_cap) {
    const int M = f.elements();
    const int N = f.resolution();
    const double total = std::pow(static_cast<double>(N), M);
    if (total > cap) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "brute_force: N^M = %.3g configurations exceeds the cap of %.3g", total, cap);
        throw BudgetExceeded(buf);
    }
    const std::uint64_t e0 = f.evaluations();
    PhaseConfig cur = PhaseConfig::zeros(M, N);
    PhaseConfig best = cur;
    double best_q = f.value(cur);
    while (true) {
        int m = 0;
        while (m < M && cur.level(m) == N - 1) cur.set(m++, 0);
        if (m == M) break;
        cur.set(m, cur.level(m) + 1);
        const double q = f.value(cur);
        if (q < best_q) {
            best_q = q;
            best = cur;
        }
    }
    return make_result(std::move(best), best_q, f.evaluations() - e0);
}

/// Sweeps the elements in order; each element tries all N levels with the
/// others fixed (N evaluations) and keeps a strictly better one. Stops after
/// a sweep without improvement when `until_converged`, else after exactly
/// max_sweeps sweeps.
template <LatticeObjective F>
OptResult coordinate_sweeps(F& f, PhaseConfig theta, int max_sweeps, bool until_converged) {
    if (max_sweeps < 1) throw std::invalid_argument("successive refinement: need at least one sweep");
    const int M = f.elements();
    const int N = f.resolution();
    const std::uint64_t e0 = f.evaluations();
    double current = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool improved = false;
        for (int m = 0; m < M; ++m) {
            f.anchor(theta);
            const int here = theta.level(m);
            double best = std::numeric_limits<double>::infinity();
            int best_k = here;
            double at_here = 0.0;
            for (int k = 0; k < N; ++k) {
                const double v = k == here ? f.value_at_anchor() : f.value_with(m, k);
                if (k == here) at_here = v;
                if (v < best) {
                    best = v;
                    best_k = k;
                }
            }
            if (best < at_here) {
                theta.set(m, best_k);
                current = best;
                improved = true;
            } else {
                current = at_here;
            }
        }
        if (until_converged && !improved) break;
    }
    return make_result(std::move(theta), current, f.evaluations() - e0);
}

template <LatticeObjective F>
OptResult successive_refinement(F& f, const PhaseConfig& theta0, int max_sweeps = 100) {
    return coordinate_sweeps(f, theta0, max_sweeps, true);
}

/// 100 sweeps, no convergence test: evals = 100 N M.
template <LatticeObjective F>
OptResult modified_sr(F& f, const PhaseConfig& theta0, int sweeps = 100) {
    return coordinate_sweeps(f, theta0, sweeps, false);
}

struct GeneticSpec {
    int population = 100;
    int generations = 200;
    std::optional<double> mutation_rate;  // default 1/M
    int tournament_k = 2;
    int elitism = 1;

    void validate() const {
        if (population < 2 || population % 2 != 0) throw std::invalid_argument("GeneticSpec: population must be even and >= 2");
        if (generations < 0) throw std::invalid_argument("GeneticSpec: generations must be >= 0");
        if (tournament_k < 1) throw std::invalid_argument("GeneticSpec: tournament_k must be >= 1");
        if (elitism < 0 || elitism > population) throw std::invalid_argument("GeneticSpec: elitism out of range");
        if (mutation_rate && (*mutation_rate < 0.0 || *mutation_rate > 1.0))
            throw std::invalid_argument("GeneticSpec: mutation_rate must lie in [0, 1]");
    }
};

/// Generational GA: tournament selection, uniform crossover, per-gene
/// uniform-random mutation; the best individuals found so far replace the
/// worst children. evals = population (generations + 1).
template <LatticeObjective F>
OptResult genetic(F& f, Rng& rng, const GeneticSpec& spec = {}, std::vector<PhaseConfig> initial = {}) {
    spec.validate();
    const int M = f.elements();
    const int N = f.resolution();
    const auto P = static_cast<std::size_t>(spec.population);
    const double mut = spec.mutation_rate.value_or(1.0 / M);
    const std::uint64_t e0 = f.evaluations();

    struct Ind {
        PhaseConfig c;
        double q;
    };
    std::vector<Ind> pop;
    pop.reserve(P);
    for (std::size_t i = 0; i < P; ++i) {
        PhaseConfig c = i < initial.size() ? initial[i] : random_config(M, N, rng);
        const double q = f.value(c);
        pop.push_back({std::move(c), q});
    }

    auto by_value = [](const Ind& a, const Ind& b) { return a.q < b.q; };
    std::uniform_int_distribution<std::size_t> pick(0, P - 1);
    std::uniform_int_distribution<int> level(0, N - 1);
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution mutate(mut);
    auto tournament = [&]() -> const Ind& {
        const Ind* best = &pop[pick(rng)];
        for (int t = 1; t < spec.tournament_k; ++t) {
            const Ind* other = &pop[pick(rng)];
            if (other->q < best->q) best = other;
        }
        return *best;
    };

    std::vector<Ind> elite(pop.begin(), pop.end());
    std::partial_sort(elite.begin(), elite.begin() + spec.elitism, elite.end(), by_value);
    elite.erase(elite.begin() + spec.elitism, elite.end());

    for (int g = 0; g < spec.generations; ++g) {
        std::vector<Ind> next;
        next.reserve(P);
        while (next.size() < P) {
            const Ind& a = tournament();
            const Ind& b = tournament();
            std::vector<int> x(static_cast<std::size_t>(M));
            std::vector<int> y(static_cast<std::size_t>(M));
            for (int m = 0; m < M; ++m) {
                const bool swap = coin(rng);
                x[static_cast<std::size_t>(m)] = swap ? b.c.level(m) : a.c.level(m);
                y[static_cast<std::size_t>(m)] = swap ? a.c.level(m) : b.c.level(m);
            }
            for (auto* child : {&x, &y}) {
                for (auto& k : *child)
                    if (mutate(rng)) k = level(rng);
                PhaseConfig c(std::move(*child), N);
                const double q = f.value(c);
                next.push_back({std::move(c), q});
            }
        }
        std::sort(next.begin(), next.end(), by_value);
        // best-ever individuals take the places of the worst children
        for (std::size_t e = 0; e < elite.size(); ++e) next[P - 1 - e] = elite[e];
        pop = std::move(next);
        std::vector<Ind> merged(pop.begin(), pop.end());
        std::partial_sort(merged.begin(), merged.begin() + spec.elitism, merged.end(), by_value);
        merged.erase(merged.begin() + spec.elitism, merged.end());
        elite = std::move(merged);
    }
    const Ind& best = *std::min_element(pop.begin(), pop.end(), by_value);
    return make_result(best.c, best.q, f.evaluations() - e0);
}

/// Multi-start descent: `restarts` uniform random starts, each followed by
/// local_search, best kept.
template <LatticeObjective F>
OptResult simplified_exhaustive(F& f, Rng& rng, int restarts = 100, std::optional<int> i_max_loc = std::nullopt) {
    if (restarts < 1) throw std::invalid_argument("simplified_exhaustive: need at least one restart");
    const int M = f.elements();
    const int N = f.resolution();
    const int L = i_max_loc.value_or(std::max(M, 1));
    const std::uint64_t e0 = f.evaluations();
    std::optional<LocalResult> best;
    for (int r = 0; r < restarts; ++r) {
        auto res = local_search(f, random_config(M, N, rng), std::nullopt, L);
        if (!best || res.value < best->value) best = std::move(res);
    }
    return make_result(std::move(best->config), best->value, f.evaluations() - e0);
}

template <LatticeObjective F>
OptResult random_configuration(F& f, Rng& rng) {
    const std::uint64_t e0 = f.evaluations();
    PhaseConfig c = random_config(f.elements(), f.resolution(), rng);
    const double q = f.value(c);
    return make_result(std::move(c), q, f.evaluations() - e0);
}

}  // namespace rislab
