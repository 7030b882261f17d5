#pragma once

// End-to-end gains, SINR, rates, the per-transmitter score and outage
// capacity. All arithmetic is in linear watts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rislab/channel.hpp"
#include "rislab/model.hpp"

namespace rislab {

/// Phasors e^{j 2 pi k / N} for k = 0..N-1.
inline std::vector<cplx> lattice_phasors(int resolution) {
    std::vector<cplx> out(static_cast<std::size_t>(resolution));
    for (int k = 0; k < resolution; ++k)
        out[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / resolution);
    return out;
}

/// End-to-end coefficients e[j][i] (Tx_j -> Rx_i) for the current phase
/// configuration of every surface, with per-surface partial sums so that a
/// single-element change costs O(K^2).
class EffectiveGains {
public:
    EffectiveGains(const ChannelSet& ch, std::vector<PhaseConfig> configs)
        : K_(ch.users), configs_(std::move(configs)) {
        const int S = ch.surfaces();
        if (static_cast<int>(configs_.size()) != S)
            throw std::invalid_argument("EffectiveGains: need one phase configuration per surface");
        N_ = configs_.front().resolution();
        for (const auto& c : configs_)
            if (c.resolution() != N_) throw std::invalid_argument("EffectiveGains: mixed resolutions");
        phasor_ = lattice_phasors(N_);
        const std::size_t KK = static_cast<std::size_t>(K_ * K_);
        direct_ = ch.direct;
        cascade_.resize(static_cast<std::size_t>(S));
        partial_.assign(static_cast<std::size_t>(S), std::vector<cplx>(KK));
        for (int s = 0; s < S; ++s) {
            const int M = ch.elements(s);
            if (configs_[static_cast<std::size_t>(s)].size() != M)
                throw std::invalid_argument("EffectiveGains: configuration length does not match surface");
            auto& cas = cascade_[static_cast<std::size_t>(s)];
            cas.resize(static_cast<std::size_t>(M) * KK);
            for (int m = 0; m < M; ++m)
                for (int j = 0; j < K_; ++j)
                    for (int i = 0; i < K_; ++i)
                        cas[static_cast<std::size_t>(m) * KK + static_cast<std::size_t>(j * K_ + i)] =
                            ch.g(s, i)[static_cast<std::size_t>(m)] * ch.h(s, j)[static_cast<std::size_t>(m)];
        }
        e_.resize(KK);
        refresh();
    }

    int users() const { return K_; }
    int surfaces() const { return static_cast<int>(configs_.size()); }
    int resolution() const { return N_; }
    int elements(int s) const { return configs_.at(static_cast<std::size_t>(s)).size(); }
    const PhaseConfig& config(int s) const { return configs_.at(static_cast<std::size_t>(s)); }
    cplx operator()(int j, int i) const { return e_[static_cast<std::size_t>(j * K_ + i)]; }
    std::span<const cplx> values() const { return e_; }

    /// e[j][i] += g_m^{[s,i]} (e^{j theta_new} - e^{j theta_old}) h_m^{[j,s]}
    void update_one_element(int s, int m, int new_level) {
        PhaseConfig& c = configs_.at(static_cast<std::size_t>(s));
        const int old_level = c.level(m);
        c.set(m, new_level);
        if (old_level == new_level) return;
        const cplx delta = phasor_[static_cast<std::size_t>(new_level)] - phasor_[static_cast<std::size_t>(old_level)];
        const std::size_t KK = e_.size();
        const cplx* cas = cascade_[static_cast<std::size_t>(s)].data() + static_cast<std::size_t>(m) * KK;
        cplx* part = partial_[static_cast<std::size_t>(s)].data();
        for (std::size_t k = 0; k < KK; ++k) {
            const cplx d = delta * cas[k];
            part[k] += d;
            e_[k] += d;
        }
    }

    /// Gains as they would be after update_one_element(s, m, new_level).
    void preview(int s, int m, int new_level, std::span<cplx> out) const {
        const int old_level = configs_[static_cast<std::size_t>(s)].level(m);
        const cplx delta = phasor_[static_cast<std::size_t>(new_level)] - phasor_[static_cast<std::size_t>(old_level)];
        const std::size_t KK = e_.size();
        const cplx* cas = cascade_[static_cast<std::size_t>(s)].data() + static_cast<std::size_t>(m) * KK;
        for (std::size_t k = 0; k < KK; ++k) out[k] = e_[k] + delta * cas[k];
    }

    /// Moves surface s to `target`, incrementally when few elements change.
    void assign(int s, const PhaseConfig& target) {
        const PhaseConfig& cur = configs_.at(static_cast<std::size_t>(s));
        if (target.size() != cur.size() || target.resolution() != N_)
            throw std::invalid_argument("EffectiveGains::assign: shape mismatch");
        int diff = 0;
        for (int m = 0; m < cur.size(); ++m) diff += cur.level(m) != target.level(m);
        if (diff == 0) return;
        if (diff * 4 <= cur.size()) {
            for (int m = 0; m < cur.size(); ++m)
                if (cur.level(m) != target.level(m)) update_one_element(s, m, target.level(m));
        } else {
            configs_[static_cast<std::size_t>(s)] = target;
            refresh_surface(s);
            sum_partials();
        }
    }

    /// From-scratch evaluation of the current configuration.
    std::vector<cplx> recompute() const {
        std::vector<cplx> out = direct_;
        for (int s = 0; s < surfaces(); ++s) {
            const auto sum = surface_sum(s);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] += sum[k];
        }
        return out;
    }

    /// Discards accumulated rounding by recomputing the partial sums.
    void refresh() {
        for (int s = 0; s < surfaces(); ++s) refresh_surface(s);
        sum_partials();
    }

private:
    std::vector<cplx> surface_sum(int s) const {
        const std::size_t KK = e_.size();
        std::vector<cplx> sum(KK);
        const auto& c = configs_[static_cast<std::size_t>(s)];
        const auto& cas = cascade_[static_cast<std::size_t>(s)];
        for (int m = 0; m < c.size(); ++m) {
            const cplx p = phasor_[static_cast<std::size_t>(c.level(m))];
            for (std::size_t k = 0; k < KK; ++k) sum[k] += p * cas[static_cast<std::size_t>(m) * KK + k];
        }
        return sum;
    }

    void refresh_surface(int s) { partial_[static_cast<std::size_t>(s)] = surface_sum(s); }

    void sum_partials() {
        e_ = direct_;
        for (const auto& part : partial_)
            for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += part[k];
    }

    int K_ = 0;
    int N_ = 2;
    std::vector<PhaseConfig> configs_;
    std::vector<cplx> phasor_;
    std::vector<cplx> direct_;
    std::vector<std::vector<cplx>> cascade_;
    std::vector<std::vector<cplx>> partial_;
    std::vector<cplx> e_;
};

inline EffectiveGains effective_centralized(const ChannelSet& ch, const PhaseConfig& theta) {
    if (ch.distributed) throw std::invalid_argument("effective_centralized: channel set is distributed");
    return EffectiveGains(ch, {theta});
}

inline EffectiveGains effective_distributed(const ChannelSet& ch, std::vector<PhaseConfig> thetas) {
    if (!ch.distributed) throw std::invalid_argument("effective_distributed: channel set is centralized");
    return EffectiveGains(ch, std::move(thetas));
}

struct RateReport {
    std::vector<double> sinr;
    std::vector<double> rates;
    double sum_rate = 0.0;
    double min_rate = 0.0;
};

/// SINR_i = P_i |e_ii|^2 / (sigma^2 + sum_{j != i} P_j |e_ji|^2) for K x K gains
/// laid out as e[j*K + i].
inline double sinr_at(std::span<const cplx> e, int K, int i, std::span<const double> powers, double noise) {
    double interference = 0.0;
    for (int j = 0; j < K; ++j)
        if (j != i) interference += powers[static_cast<std::size_t>(j)] * std::norm(e[static_cast<std::size_t>(j * K + i)]);
    return powers[static_cast<std::size_t>(i)] * std::norm(e[static_cast<std::size_t>(i * K + i)]) / (noise + interference);
}

inline RateReport rates(std::span<const cplx> e, int K, std::span<const double> powers, double noise) {
    RateReport r;
    r.sinr.resize(static_cast<std::size_t>(K));
    r.rates.resize(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        r.sinr[static_cast<std::size_t>(i)] = sinr_at(e, K, i, powers, noise);
        r.rates[static_cast<std::size_t>(i)] = std::log2(1.0 + r.sinr[static_cast<std::size_t>(i)]);
    }
    r.sum_rate = std::accumulate(r.rates.begin(), r.rates.end(), 0.0);
    r.min_rate = K > 0 ? *std::min_element(r.rates.begin(), r.rates.end()) : 0.0;
    return r;
}

inline RateReport rates(const EffectiveGains& gains, const RadioParams& radio) {
    const auto powers = radio.powers_watts();
    return rates(gains.values(), gains.users(), powers, radio.noise_watts());
}

enum class ScoreVariant { full, snr_only, sir_only };

/// Desired power of `tx` over noise plus the interference it causes at the
/// other receivers through its own surface, all weighted by P_tx:
/// P|c_tx|^2 / (sigma^2 + sum_{j != tx} P|c_j|^2), with
/// c_j = g^{[s j]} Theta h^{[tx s]} + h_d^{[tx j]} and s the surface of tx.
inline double score_from_coefficients(std::span<const cplx> c, int tx, double power, double noise,
                                      ScoreVariant variant = ScoreVariant::full) {
    double interference = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j)
        if (static_cast<int>(j) != tx) interference += power * std::norm(c[j]);
    const double desired = power * std::norm(c[static_cast<std::size_t>(tx)]);
    switch (variant) {
        case ScoreVariant::snr_only: return desired / noise;
        case ScoreVariant::sir_only: return desired / interference;
        case ScoreVariant::full: break;
    }
    return desired / (noise + interference);
}

/// Coefficients c_j seen by transmitter `tx` through its own surface only.
inline std::vector<cplx> score_coefficients(const CsiView& view, int tx, const PhaseConfig& theta) {
    const int K = view.users();
    const int s = view.distributed() ? tx : 0;
    const auto h = view.incident(s, tx);
    if (static_cast<int>(h.size()) != theta.size())
        throw std::invalid_argument("score: configuration length does not match surface");
    std::vector<cplx> c(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
        const auto g = view.reflective(s, j);
        cplx acc = view.direct(tx, j);
        for (int m = 0; m < theta.size(); ++m)
            acc += g[static_cast<std::size_t>(m)] * std::polar(1.0, theta.phase(m)) * h[static_cast<std::size_t>(m)];
        c[static_cast<std::size_t>(j)] = acc;
    }
    return c;
}

inline double score(const CsiView& view, int tx, const PhaseConfig& theta, const RadioParams& radio,
                    ScoreVariant variant = ScoreVariant::full) {
    const auto c = score_coefficients(view, tx, theta);
    return score_from_coefficients(c, tx, radio.power_watts(tx), radio.noise_watts(), variant);
}

inline double snr_only(const CsiView& view, int tx, const PhaseConfig& theta, const RadioParams& radio) {
    return score(view, tx, theta, radio, ScoreVariant::snr_only);
}

inline double sir_only(const CsiView& view, int tx, const PhaseConfig& theta, const RadioParams& radio) {
    return score(view, tx, theta, radio, ScoreVariant::sir_only);
}

/// Largest sample R0 such that at least ceil((1 - gamma) n) samples are >= R0.
inline double outage_capacity(std::span<const double> samples, double gamma) {
    if (samples.empty()) throw std::invalid_argument("outage_capacity: no samples");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("outage_capacity: gamma must lie in (0, 1)");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double n = static_cast<double>(sorted.size());
    auto need = static_cast<std::size_t>(std::ceil((1.0 - gamma) * n - 1e-9));
    need = std::clamp<std::size_t>(need, 1, sorted.size());
    return sorted[need - 1];
}

}  // namespace rislab
