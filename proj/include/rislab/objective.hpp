#pragma once

// Objectives over the phase lattice, all posed as minimization.
//
// Every optimizer talks to an objective through one small protocol:
//   value(c)            q(c) for an arbitrary configuration
//   anchor(c)           make c the base point for value_with (free)
//   value_at_anchor()   q(base)
//   value_with(m, k)    q(base with element m set to level k)
// Each of the three value calls counts as exactly one evaluation. The anchor
// lets network objectives score a single-element move in O(K^2). value(c)
// may move the anchor, so callers re-anchor before using value_with.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "rislab/channel.hpp"
#include "rislab/metrics.hpp"
#include "rislab/model.hpp"

namespace rislab {

template <class F>
concept LatticeObjective = requires(F& f, const F& cf, const PhaseConfig& c, int m, int k) {
    { cf.elements() } -> std::convertible_to<int>;
    { cf.resolution() } -> std::convertible_to<int>;
    { cf.evaluations() } -> std::convertible_to<std::uint64_t>;
    { f.value(c) } -> std::convertible_to<double>;
    f.anchor(c);
    { f.value_at_anchor() } -> std::convertible_to<double>;
    { f.value_with(m, k) } -> std::convertible_to<double>;
};

/// Wraps an arbitrary callable. Used for objective tables in tests and for
/// anything that has no incremental structure.
class FunctionObjective {
public:
    using Fn = std::function<double(const PhaseConfig&)>;

    FunctionObjective(Fn fn, int elements, int resolution)
        : fn_(std::move(fn)), base_(PhaseConfig::zeros(elements, resolution)) {}

    int elements() const { return base_.size(); }
    int resolution() const { return base_.resolution(); }
    std::uint64_t evaluations() const { return evals_; }

    double value(const PhaseConfig& c) {
        ++evals_;
        return fn_(c);
    }
    void anchor(const PhaseConfig& c) { base_ = c; }
    double value_at_anchor() { return value(base_); }
    double value_with(int m, int k) {
        const int old = base_.level(m);
        base_.set(m, k);
        const double v = value(base_);
        base_.set(m, old);
        return v;
    }

private:
    Fn fn_;
    PhaseConfig base_;
    std::uint64_t evals_ = 0;
};

enum class ObjectiveKind { sum_rate, max_min };

/// q = -sum_i log2(1 + SINR_i)  or  q = -min_i log2(1 + SINR_i)
inline double network_value(std::span<const cplx> e, int K, std::span<const double> powers, double noise,
                            ObjectiveKind kind) {
    double sum = 0.0;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < K; ++i) {
        const double r = std::log2(1.0 + sinr_at(e, K, i, powers, noise));
        sum += r;
        worst = std::min(worst, r);
    }
    return kind == ObjectiveKind::sum_rate ? -sum : -worst;
}

/// Network objective over one surface of a globally known channel set. For a
/// centralized network this is the only surface; for a distributed network
/// the other surfaces stay at `others`.
class NetworkObjective {
public:
    NetworkObjective(const CsiView& view, const RadioParams& radio, ObjectiveKind kind, int resolution,
                     int surface = 0, std::vector<PhaseConfig> others = {})
        : kind_(kind),
          surface_(surface),
          powers_(radio.powers_watts()),
          noise_(radio.noise_watts()),
          gains_(view.channels(), initial_configs(view, resolution, surface, std::move(others))),
          scratch_(static_cast<std::size_t>(view.users() * view.users())) {
        radio.validate(view.users());
    }

    int elements() const { return gains_.elements(surface_); }
    int resolution() const { return gains_.resolution(); }
    std::uint64_t evaluations() const { return evals_; }
    ObjectiveKind kind() const { return kind_; }

    double value(const PhaseConfig& c) {
        gains_.assign(surface_, c);
        return value_at_anchor();
    }
    void anchor(const PhaseConfig& c) {
        gains_.assign(surface_, c);
        if (++anchors_ % 4096 == 0) gains_.refresh();
    }
    double value_at_anchor() {
        ++evals_;
        return network_value(gains_.values(), gains_.users(), powers_, noise_, kind_);
    }
    double value_with(int m, int k) {
        ++evals_;
        gains_.preview(surface_, m, k, scratch_);
        return network_value(scratch_, gains_.users(), powers_, noise_, kind_);
    }

private:
    static std::vector<PhaseConfig> initial_configs(const CsiView& view, int resolution, int surface,
                                                    std::vector<PhaseConfig> others) {
        const int S = view.surfaces();
        if (surface < 0 || surface >= S) throw std::out_of_range("NetworkObjective: surface index");
        if (others.empty())
            for (int s = 0; s < S; ++s) others.push_back(PhaseConfig::zeros(view.elements(s), resolution));
        if (static_cast<int>(others.size()) != S)
            throw std::invalid_argument("NetworkObjective: need one configuration per surface");
        return others;
    }

    ObjectiveKind kind_;
    int surface_;
    std::vector<double> powers_;
    double noise_;
    EffectiveGains gains_;
    std::vector<cplx> scratch_;
    std::uint64_t evals_ = 0;
    std::uint64_t anchors_ = 0;
};

/// q = -score_tx, computed from the local view of `tx` only.
class ScoreObjective {
public:
    ScoreObjective(const CsiView& view, int tx, const RadioParams& radio, int resolution,
                   ScoreVariant variant = ScoreVariant::full)
        : tx_(tx),
          K_(view.users()),
          resolution_(resolution),
          variant_(variant),
          power_(radio.power_watts(tx)),
          noise_(radio.noise_watts()),
          phasor_(lattice_phasors(resolution)),
          base_(PhaseConfig::zeros(view.elements(view.distributed() ? tx : 0), resolution)) {
        const int s = view.distributed() ? tx : 0;
        const int M = base_.size();
        const auto h = view.incident(s, tx);
        direct_.resize(static_cast<std::size_t>(K_));
        cascade_.resize(static_cast<std::size_t>(M * K_));
        for (int j = 0; j < K_; ++j) {
            direct_[static_cast<std::size_t>(j)] = view.direct(tx, j);
            const auto g = view.reflective(s, j);
            for (int m = 0; m < M; ++m)
                cascade_[static_cast<std::size_t>(m * K_ + j)] = g[static_cast<std::size_t>(m)] * h[static_cast<std::size_t>(m)];
        }
        base_c_.resize(static_cast<std::size_t>(K_));
        scratch_.resize(static_cast<std::size_t>(K_));
        rebuild();
    }

    int elements() const { return base_.size(); }
    int resolution() const { return resolution_; }
    std::uint64_t evaluations() const { return evals_; }
    int tx() const { return tx_; }

    double value(const PhaseConfig& c) {
        ++evals_;
        std::vector<cplx> coeff = direct_;
        for (int m = 0; m < c.size(); ++m) {
            const cplx p = phasor_[static_cast<std::size_t>(c.level(m))];
            for (int j = 0; j < K_; ++j) coeff[static_cast<std::size_t>(j)] += p * cascade_[static_cast<std::size_t>(m * K_ + j)];
        }
        return -score_from_coefficients(coeff, tx_, power_, noise_, variant_);
    }
    void anchor(const PhaseConfig& c) {
        int diff = 0;
        for (int m = 0; m < c.size(); ++m) diff += c.level(m) != base_.level(m);
        if (diff == 0) return;
        if (diff * 4 > c.size() || ++moves_ % 4096 == 0) {
            base_ = c;
            rebuild();
            return;
        }
        for (int m = 0; m < c.size(); ++m) {
            const int old = base_.level(m);
            const int k = c.level(m);
            if (old == k) continue;
            const cplx delta = phasor_[static_cast<std::size_t>(k)] - phasor_[static_cast<std::size_t>(old)];
            for (int j = 0; j < K_; ++j) base_c_[static_cast<std::size_t>(j)] += delta * cascade_[static_cast<std::size_t>(m * K_ + j)];
        }
        base_ = c;
    }
    double value_at_anchor() {
        ++evals_;
        return -score_from_coefficients(base_c_, tx_, power_, noise_, variant_);
    }
    double value_with(int m, int k) {
        ++evals_;
        const cplx delta = phasor_[static_cast<std::size_t>(k)] - phasor_[static_cast<std::size_t>(base_.level(m))];
        for (int j = 0; j < K_; ++j)
            scratch_[static_cast<std::size_t>(j)] = base_c_[static_cast<std::size_t>(j)] + delta * cascade_[static_cast<std::size_t>(m * K_ + j)];
        return -score_from_coefficients(scratch_, tx_, power_, noise_, variant_);
    }

private:
    void rebuild() {
        base_c_ = direct_;
        for (int m = 0; m < base_.size(); ++m) {
            const cplx p = phasor_[static_cast<std::size_t>(base_.level(m))];
            for (int j = 0; j < K_; ++j) base_c_[static_cast<std::size_t>(j)] += p * cascade_[static_cast<std::size_t>(m * K_ + j)];
        }
    }

    int tx_;
    int K_;
    int resolution_;
    ScoreVariant variant_;
    double power_;
    double noise_;
    std::vector<cplx> phasor_;
    std::vector<cplx> direct_;
    std::vector<cplx> cascade_;  // [m*K + j] = g^{[s j]}_m h^{[tx s]}_m
    PhaseConfig base_;
    std::vector<cplx> base_c_;
    std::vector<cplx> scratch_;
    std::uint64_t evals_ = 0;
    std::uint64_t moves_ = 0;
};

/// Forwards to another objective and keeps its own tally of value calls,
/// independent of the wrapped objective's counter.
template <LatticeObjective F>
class CountingObjective {
public:
    explicit CountingObjective(F& inner) : inner_(&inner) {}

    int elements() const { return inner_->elements(); }
    int resolution() const { return inner_->resolution(); }
    std::uint64_t evaluations() const { return inner_->evaluations(); }
    std::uint64_t calls() const { return calls_; }

    double value(const PhaseConfig& c) {
        ++calls_;
        return inner_->value(c);
    }
    void anchor(const PhaseConfig& c) { inner_->anchor(c); }
    double value_at_anchor() {
        ++calls_;
        return inner_->value_at_anchor();
    }
    double value_with(int m, int k) {
        ++calls_;
        return inner_->value_with(m, k);
    }

private:
    F* inner_;
    std::uint64_t calls_ = 0;
};

}  // namespace rislab
