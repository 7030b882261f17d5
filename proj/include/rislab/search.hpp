#pragma once

// Neighborhood local search, the sigmoid filled function and the filled
// function global search (OGS when tau = 1, accelerated otherwise).

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "rislab/model.hpp"
#include "rislab/objective.hpp"
#include "rislab/random.hpp"

namespace rislab {

/// Uniformly random point of the lattice.
inline PhaseConfig random_config(int elements, int resolution, Rng& rng) {
    std::uniform_int_distribution<int> level(0, resolution - 1);
    std::vector<int> k(static_cast<std::size_t>(elements));
    for (auto& v : k) v = level(rng);
    return PhaseConfig(std::move(k), resolution);
}

/// theta itself followed by every single-element move, element-major and
/// level-ascending: M(N-1) + 1 configurations.
inline std::vector<PhaseConfig> neighbors(const PhaseConfig& theta) {
    std::vector<PhaseConfig> out;
    const int N = theta.resolution();
    out.reserve(static_cast<std::size_t>(theta.size() * (N - 1) + 1));
    out.push_back(theta);
    for (int m = 0; m < theta.size(); ++m)
        for (int k = 0; k < N; ++k)
            if (k != theta.level(m)) out.push_back(theta.with(m, k));
    return out;
}

/// Squared difference of the phases of one element at two levels.
inline double element_phase_distance2(int a, int b, int resolution, bool circular = false) {
    int d = std::abs(a - b);
    if (circular) d = std::min(d, resolution - d);
    const double x = 2.0 * std::numbers::pi * d / resolution;
    return x * x;
}

/// ||theta - center||^2 over phases in radians.
inline double phase_distance2(const PhaseConfig& a, const PhaseConfig& b, bool circular = false) {
    if (a.size() != b.size() || a.resolution() != b.resolution())
        throw std::invalid_argument("phase_distance2: shape mismatch");
    double s = 0.0;
    for (int m = 0; m < a.size(); ++m) s += element_phase_distance2(a.level(m), b.level(m), a.resolution(), circular);
    return s;
}

/// f_r(dq): dq + r below -r, a sigmoid on (-r, 0), and 1 from 0 on.
inline double filled_branch(double dq, double r) {
    if (!(r > 0.0)) throw std::domain_error("filled function: r must be positive");
    if (dq <= -r) return dq + r;
    if (dq < 0.0) return 1.0 / (1.0 + std::exp((-6.0 / r) * (dq + r / 2.0)));
    return 1.0;
}

/// Q_r = (1 + 1/(1 + beta d2)) f_r(dq) with beta = 0 when dq <= -r.
inline double filled_value(double dq, double distance2, double r) {
    const double f = filled_branch(dq, r);
    const double beta = dq <= -r ? 0.0 : 1.0;
    return (1.0 + 1.0 / (1.0 + beta * distance2)) * f;
}

inline double filled_value(double dq, const PhaseConfig& theta, const PhaseConfig& center, double r,
                           bool circular = false) {
    return filled_value(dq, phase_distance2(theta, center, circular), r);
}

struct LocalResult {
    PhaseConfig config;
    double value;
    int rounds;
};

/// Algorithm-1 style descent. Each round scans every single-element move of
/// the current point and takes the best strict improvement (first one found
/// on ties). Stops on a round without improvement or after max_rounds rounds.
/// When start_value is supplied it is trusted and no evaluation is spent on
/// the start point.
template <LatticeObjective F>
LocalResult local_search(F& f, PhaseConfig start, std::optional<double> start_value, int max_rounds) {
    if (max_rounds < 1) throw std::invalid_argument("local_search: need at least one round");
    const int M = f.elements();
    const int N = f.resolution();
    if (start.size() != M || start.resolution() != N)
        throw std::invalid_argument("local_search: start does not match the objective");
    f.anchor(start);
    double best = start_value ? *start_value : f.value_at_anchor();
    int rounds = 0;
    while (rounds < max_rounds) {
        if (rounds > 0) f.anchor(start);
        int bm = -1;
        int bk = -1;
        double bv = best;
        for (int m = 0; m < M; ++m) {
            const int cur = start.level(m);
            for (int k = 0; k < N; ++k) {
                if (k == cur) continue;
                const double v = f.value_with(m, k);
                if (v < bv) {
                    bv = v;
                    bm = m;
                    bk = k;
                }
            }
        }
        ++rounds;
        if (bm < 0) break;
        start.set(bm, bk);
        best = bv;
    }
    return {std::move(start), best, rounds};
}

template <LatticeObjective F>
LocalResult local_search(F& f, const PhaseConfig& start, int max_rounds) {
    return local_search(f, start, std::nullopt, max_rounds);
}

/// The auxiliary objective Q_r(., center) built on top of a true objective.
/// Every auxiliary evaluation is one true evaluation; true values seen since
/// the last anchor are remembered so the caller can read q of the auxiliary
/// minimizer for free. Moves around the center itself are cached in
/// `center_moves` across radii, since q does not depend on r.
template <LatticeObjective F>
class FilledObjective {
public:
    FilledObjective(F& inner, PhaseConfig center, double q_center, double r, bool circular = false,
                    std::vector<double>* center_moves = nullptr)
        : inner_(&inner),
          center_(std::move(center)),
          q_center_(q_center),
          r_(r),
          circular_(circular),
          center_moves_(center_moves),
          anchor_(center_),
          moved_q_(static_cast<std::size_t>(center_.size() * center_.resolution()), nan()) {
        if (!(r > 0.0)) throw std::domain_error("FilledObjective: r must be positive");
        if (center_moves_ && center_moves_->size() != moved_q_.size())
            throw std::invalid_argument("FilledObjective: center cache has the wrong size");
    }

    int elements() const { return center_.size(); }
    int resolution() const { return center_.resolution(); }
    std::uint64_t evaluations() const { return inner_->evaluations(); }
    double radius() const { return r_; }

    double value(const PhaseConfig& c) {
        return filled_value(inner_->value(c) - q_center_, phase_distance2(c, center_, circular_), r_);
    }

    void anchor(const PhaseConfig& c) {
        if (c == anchor_ && anchored_) return;
        inner_->anchor(c);
        anchored_ = true;
        anchor_ = c;
        at_center_ = c == center_;
        anchor_d2_ = phase_distance2(c, center_, circular_);
        anchor_q_.reset();
        if (at_center_) anchor_q_ = q_center_;
        std::fill(moved_q_.begin(), moved_q_.end(), nan());
    }

    double value_at_anchor() {
        if (!anchored_) anchor(anchor_);
        anchor_q_ = inner_->value_at_anchor();
        return filled_value(*anchor_q_ - q_center_, anchor_d2_, r_);
    }

    double value_with(int m, int k) {
        if (!anchored_) anchor(anchor_);
        const std::size_t idx = static_cast<std::size_t>(m * resolution() + k);
        double q;
        if (at_center_ && center_moves_ && !std::isnan((*center_moves_)[idx])) {
            q = (*center_moves_)[idx];
        } else {
            q = inner_->value_with(m, k);
            if (at_center_ && center_moves_) (*center_moves_)[idx] = q;
        }
        moved_q_[idx] = q;
        const int old = anchor_.level(m);
        const double d2 = anchor_d2_ - element_phase_distance2(old, center_.level(m), resolution(), circular_) +
                          element_phase_distance2(k, center_.level(m), resolution(), circular_);
        return filled_value(q - q_center_, d2, r_);
    }

    /// True objective value of c, from memory when c is the anchor or one
    /// move away from it; otherwise one counted evaluation.
    double true_value(const PhaseConfig& c) {
        if (c == center_) return q_center_;
        if (anchored_ && c == anchor_ && anchor_q_) return *anchor_q_;
        if (anchored_) {
            int diff_m = -1;
            int diffs = 0;
            for (int m = 0; m < c.size() && diffs < 2; ++m)
                if (c.level(m) != anchor_.level(m)) {
                    ++diffs;
                    diff_m = m;
                }
            if (diffs == 1) {
                const double q = moved_q_[static_cast<std::size_t>(diff_m * resolution() + c.level(diff_m))];
                if (!std::isnan(q)) return q;
            }
        }
        return inner_->value(c);
    }

private:
    static double nan() { return std::numeric_limits<double>::quiet_NaN(); }

    F* inner_;
    PhaseConfig center_;
    double q_center_;
    double r_;
    bool circular_;
    std::vector<double>* center_moves_;
    PhaseConfig anchor_;
    bool anchored_ = false;
    bool at_center_ = false;
    double anchor_d2_ = 0.0;
    std::optional<double> anchor_q_;
    std::vector<double> moved_q_;
};

struct SearchBudget {
    double r0 = 10.0;
    double eps = 0.01;
    int tau = 10;
    std::optional<int> i_max_loc;                  // default M
    std::optional<std::uint64_t> i_max_filled;     // default N((N-1)M+1)(log10(r0/eps)+1)
    bool circular_distance = false;

    static SearchBudget ogs() {
        SearchBudget b;
        b.tau = 1;
        return b;
    }

    void validate() const {
        if (!(eps > 0.0) || !(r0 > eps)) throw std::invalid_argument("SearchBudget: need r0 > eps > 0");
        if (tau < 1) throw std::invalid_argument("SearchBudget: tau must be >= 1");
        if (i_max_loc && *i_max_loc < 1) throw std::invalid_argument("SearchBudget: i_max_loc must be >= 1");
        if (i_max_filled && *i_max_filled < 1) throw std::invalid_argument("SearchBudget: i_max_filled must be >= 1");
    }

    int local_rounds(int M) const { return i_max_loc.value_or(std::max(M, 1)); }

    std::uint64_t filled_cap(int M, int N) const {
        if (i_max_filled) return *i_max_filled;
        const double levels = std::log10(r0 / eps) + 1.0;
        return static_cast<std::uint64_t>(std::ceil(N * ((N - 1.0) * M + 1.0) * levels - 1e-9));
    }
};

struct TracePoint {
    std::uint64_t evals;
    double value;
};

struct OptResult {
    PhaseConfig config;
    double value;    // minimized objective
    double metric;   // -value, e.g. the sum-rate
    std::uint64_t evals;
    std::vector<TracePoint> trace;
};

inline OptResult make_result(PhaseConfig config, double value, std::uint64_t evals) {
    return {std::move(config), value, -value, evals, {}};
}

/// (N-1)M L + ((tau+1)/tau) N(N-1)M((N-1)M+1)(log10(r0/eps)+1) L, rounded up.
inline std::uint64_t complexity_bound(int N, int M, int tau, double r0, double eps, int i_max_loc) {
    if (N < 2 || M < 1 || tau < 1 || i_max_loc < 1 || !(eps > 0.0) || !(r0 > eps))
        throw std::domain_error("complexity_bound: invalid arguments");
    const double nm = (N - 1.0) * M;
    const double L = i_max_loc;
    const double v = nm * L + (tau + 1.0) / tau * N * nm * (nm + 1.0) * (std::log10(r0 / eps) + 1.0) * L;
    return static_cast<std::uint64_t>(std::ceil(v - 1e-9));
}

inline std::uint64_t complexity_bound(int N, int M, const SearchBudget& b) {
    return complexity_bound(N, M, b.tau, b.r0, b.eps, b.local_rounds(M));
}

/// Filled function global search from theta0.
///
/// The incumbent starts as the local minimizer of q from theta0. Each round
/// runs the auxiliary descent on Q_r around the current center, and every
/// tau-th round also descends q from the auxiliary minimizer. An improvement
/// becomes the new center and resets r. Otherwise the next auxiliary descent
/// starts from the next single-element perturbation of the center; once all
/// (N-1)M are used up, r shrinks by 10 until it falls to eps.
template <LatticeObjective F>
OptResult global_search(F& f, const PhaseConfig& theta0, const SearchBudget& budget, bool record_trace = false) {
    budget.validate();
    const int M = f.elements();
    const int N = f.resolution();
    const int L = budget.local_rounds(M);
    const std::uint64_t cap = budget.filled_cap(M, N);
    const std::uint64_t e0 = f.evaluations();

    std::vector<TracePoint> trace;
    auto first = local_search(f, theta0, std::nullopt, L);
    PhaseConfig center = std::move(first.config);
    double best_q = first.value;
    if (record_trace) trace.push_back({f.evaluations() - e0, best_q});

    const int P = (N - 1) * M;
    std::vector<double> center_moves(static_cast<std::size_t>(M * N), std::numeric_limits<double>::quiet_NaN());
    double r = budget.r0;
    int perturb = 0;
    PhaseConfig start = center;
    double start_q = best_q;
    std::uint64_t filled_runs = 0;
    std::uint64_t round = 0;

    while (filled_runs < cap) {
        FilledObjective<F> aux(f, center, best_q, r, budget.circular_distance, &center_moves);
        const double start_Q =
            filled_value(start_q - best_q, phase_distance2(start, center, budget.circular_distance), r);
        auto a = local_search(aux, start, start_Q, L);
        ++filled_runs;
        ++round;
        double q = aux.true_value(a.config);
        PhaseConfig cand = std::move(a.config);
        if (round % static_cast<std::uint64_t>(budget.tau) == 0) {
            auto t = local_search(f, cand, q, L);
            cand = std::move(t.config);
            q = t.value;
        }

        if (q < best_q) {
            center = std::move(cand);
            best_q = q;
            std::fill(center_moves.begin(), center_moves.end(), std::numeric_limits<double>::quiet_NaN());
            r = budget.r0;
            perturb = 0;
            start = center;
            start_q = best_q;
            if (record_trace) trace.push_back({f.evaluations() - e0, best_q});
            continue;
        }
        if (perturb < P) {
            const int m = perturb / (N - 1);
            const int k = (center.level(m) + perturb % (N - 1) + 1) % N;
            ++perturb;
            start = center.with(m, k);
            const double cached = center_moves[static_cast<std::size_t>(m * N + k)];
            start_q = std::isnan(cached) ? f.value(start) : cached;
            continue;
        }
        if (r < budget.eps * (1.0 + 1e-12) || filled_runs > cap) break;
        r /= 10.0;
        perturb = 0;
        start = center;
        start_q = best_q;
    }

    OptResult out = make_result(std::move(center), best_q, f.evaluations() - e0);
    out.trace = std::move(trace);
    return out;
}

/// Runs `solve(objective, tx)` on -score_tx for every transmitter, each on its
/// own local view only.
template <class Solver>
std::vector<OptResult> optimize_per_tx(const CsiView& view, const RadioParams& radio, int resolution, Solver&& solve,
                                       ScoreVariant variant = ScoreVariant::full) {
    if (!view.distributed()) throw UnsupportedMode("optimize_distributed: topology is centralized");
    std::vector<OptResult> out;
    for (int tx = 0; tx < view.users(); ++tx) {
        const CsiView local = restrict(view, tx);
        ScoreObjective obj(local, tx, radio, resolution, variant);
        out.push_back(solve(obj, tx));
    }
    return out;
}

inline std::vector<OptResult> optimize_distributed(const CsiView& view, const RadioParams& radio,
                                                   const std::vector<PhaseConfig>& theta0, const SearchBudget& budget,
                                                   ScoreVariant variant = ScoreVariant::full) {
    if (static_cast<int>(theta0.size()) != view.users())
        throw std::invalid_argument("optimize_distributed: need one start configuration per transmitter");
    const int N = theta0.front().resolution();
    return optimize_per_tx(
        view, radio, N,
        [&](ScoreObjective& obj, int tx) { return global_search(obj, theta0[static_cast<std::size_t>(tx)], budget); },
        variant);
}

}  // namespace rislab
