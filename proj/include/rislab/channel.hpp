#pragma once

// Ground-truth channel realizations for one coherence block, and the CSI
// views (noisy, local) that the optimizers are allowed to see.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "rislab/model.hpp"
#include "rislab/random.hpp"

namespace rislab {

using cplx = std::complex<double>;

/// Deterministic LoS on Tx->RIS (centralized) or Rayleigh (distributed);
/// Rayleigh on the direct and RIS->Rx links.
struct LosRayleigh {};

/// LoS/scatter mix on the Tx->RIS links with linear factor kappa.
struct Rician {
    double kappa = 2.0;
};

/// Nakagami magnitudes with uniform phases on every link. The direct
/// distance is the cosine-law distance through the surface with angle psi.
struct Nakagami {
    double m_direct = 3.0;
    double m_tx_ris = 1.5;
    double m_ris_rx = 2.5;
    double psi = 86.0 * std::numbers::pi / 180.0;
};

using FadingSpec = std::variant<LosRayleigh, Rician, Nakagami>;

inline void validate(const FadingSpec& f) {
    if (const auto* r = std::get_if<Rician>(&f); r && !(r->kappa >= 0.0))
        throw std::invalid_argument("Rician: kappa must be >= 0");
    if (const auto* n = std::get_if<Nakagami>(&f)) {
        if (n->m_direct < 0.5 || n->m_tx_ris < 0.5 || n->m_ris_rx < 0.5)
            throw std::invalid_argument("Nakagami: shape parameters must be >= 0.5");
        if (!(n->psi > 0.0 && n->psi < std::numbers::pi))
            throw std::invalid_argument("Nakagami: psi must lie in (0, pi)");
    }
}

/// Second-order summary of the links, averaged over coefficients.
struct LinkStats {
    double m_h = 0.0;             // mean LoS amplitude Tx->RIS (centralized)
    double sigma_hd2 = 0.0;       // direct-link variance
    double sigma_g2 = 0.0;        // RIS->Rx per-element variance
    double sigma_h_tilde2 = 0.0;  // Tx->own-RIS variance (distributed)
};

/// Channels of one realization.
///   direct[j*K + i]      Tx_j -> Rx_i
///   incident[s][j][m]    Tx_j -> element m of surface s
///   reflective[s][i][m]  element m of surface s -> Rx_i
/// The *_var arrays hold the generation variance of each coefficient.
struct ChannelSet {
    int users = 0;
    bool distributed = false;
    bool incident_los = false;  // incident links carry a deterministic LoS part
    std::vector<cplx> direct;
    std::vector<double> direct_var;
    std::vector<std::vector<std::vector<cplx>>> incident;
    std::vector<std::vector<std::vector<double>>> incident_var;
    std::vector<std::vector<std::vector<cplx>>> reflective;
    std::vector<std::vector<std::vector<double>>> reflective_var;
    LinkStats stats;

    int surfaces() const { return static_cast<int>(incident.size()); }
    int elements(int s) const {
        return static_cast<int>(incident.at(static_cast<std::size_t>(s)).at(0).size());
    }
    cplx h_d(int j, int i) const { return direct.at(static_cast<std::size_t>(j * users + i)); }
    std::span<const cplx> h(int s, int j) const {
        return incident.at(static_cast<std::size_t>(s)).at(static_cast<std::size_t>(j));
    }
    std::span<const cplx> g(int s, int i) const {
        return reflective.at(static_cast<std::size_t>(s)).at(static_cast<std::size_t>(i));
    }

    /// Surface whose phases transmitter `tx` controls.
    int surface_of(int tx) const { return distributed ? tx : 0; }
};

namespace detail {

inline cplx circular_gaussian(Rng& rng, double variance) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    const double im = n(rng);
    return cplx(re, im) * std::sqrt(variance / 2.0);
}

inline cplx nakagami(Rng& rng, double shape, double omega) {
    std::gamma_distribution<double> power(shape, omega / shape);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double mag = std::sqrt(power(rng));
    return std::polar(mag, phase(rng));
}

inline cplx los_phasor(double d, double lambda) {
    return std::polar(1.0, -2.0 * std::numbers::pi * d / lambda);
}

inline double cosine_law(double d1, double d2, double psi) {
    return std::sqrt(d1 * d1 + d2 * d2 - 2.0 * d1 * d2 * std::cos(psi));
}

template <class T>
double mean_of(const std::vector<std::vector<std::vector<T>>>& v, auto&& f) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& a : v)
        for (const auto& b : a)
            for (const auto& x : b) {
                sum += f(x);
                ++n;
            }
    return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace detail

/// Draws one realization. Each link group has its own substream derived from
/// `seed`, so links are reproducible independently of M and of each other.
inline ChannelSet generate(const Topology& topo, const RadioParams& radio, const FadingSpec& fading,
                           std::uint64_t seed) {
    validate(fading);
    radio.validate(topo.users());
    const int K = topo.users();
    const int S = topo.surface_count();
    const double lambda = radio.lambda();
    const auto* rician = std::get_if<Rician>(&fading);
    const auto* naka = std::get_if<Nakagami>(&fading);

    ChannelSet ch;
    ch.users = K;
    ch.distributed = topo.distributed();
    ch.incident_los = rician != nullptr || (!naka && !topo.distributed());

    ch.direct.resize(static_cast<std::size_t>(K * K));
    ch.direct_var.resize(ch.direct.size());
    for (int j = 0; j < K; ++j) {
        for (int i = 0; i < K; ++i) {
            Rng rng = make_stream(seed, {stream_tag::direct, std::uint64_t(j), std::uint64_t(i)});
            double d = distance(topo.tx()[j], topo.rx()[i]);
            if (naka) {
                const Position c = topo.surface(topo.distributed() ? j : 0).center();
                d = detail::cosine_law(distance(topo.tx()[j], c), distance(c, topo.rx()[i]), naka->psi);
            }
            const double v = path_gain(radio.c0_db, d, radio.alpha_direct);
            const auto idx = static_cast<std::size_t>(j * K + i);
            ch.direct_var[idx] = v;
            ch.direct[idx] = naka ? detail::nakagami(rng, naka->m_direct, v) : detail::circular_gaussian(rng, v);
        }
    }

    ch.incident.resize(static_cast<std::size_t>(S));
    ch.incident_var.resize(static_cast<std::size_t>(S));
    ch.reflective.resize(static_cast<std::size_t>(S));
    ch.reflective_var.resize(static_cast<std::size_t>(S));
    for (int s = 0; s < S; ++s) {
        const SurfaceSpec& surf = topo.surface(s);
        const int M = surf.element_count();
        auto& inc = ch.incident[static_cast<std::size_t>(s)];
        auto& inc_var = ch.incident_var[static_cast<std::size_t>(s)];
        inc.assign(static_cast<std::size_t>(K), std::vector<cplx>(static_cast<std::size_t>(M)));
        inc_var.assign(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(M)));
        for (int j = 0; j < K; ++j) {
            Rng rng = make_stream(seed, {stream_tag::incident, std::uint64_t(s), std::uint64_t(j)});
            for (int m = 0; m < M; ++m) {
                const double d = distance(topo.tx()[j], surf.element(m));
                const double v = path_gain(radio.c0_db, d, radio.alpha_tx_ris);
                cplx h;
                if (naka) {
                    h = detail::nakagami(rng, naka->m_tx_ris, v);
                } else if (rician) {
                    const double k = rician->kappa;
                    h = std::sqrt(v) * (std::sqrt(k / (k + 1.0)) * detail::los_phasor(d, lambda) +
                                        std::sqrt(1.0 / (k + 1.0)) * detail::circular_gaussian(rng, 1.0));
                } else if (topo.distributed()) {
                    h = detail::circular_gaussian(rng, v);
                } else {
                    h = std::sqrt(v) * detail::los_phasor(d, lambda);
                }
                inc[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = h;
                inc_var[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = v;
            }
        }
        auto& ref = ch.reflective[static_cast<std::size_t>(s)];
        auto& ref_var = ch.reflective_var[static_cast<std::size_t>(s)];
        ref.assign(static_cast<std::size_t>(K), std::vector<cplx>(static_cast<std::size_t>(M)));
        ref_var.assign(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(M)));
        for (int i = 0; i < K; ++i) {
            Rng rng = make_stream(seed, {stream_tag::reflective, std::uint64_t(s), std::uint64_t(i)});
            for (int m = 0; m < M; ++m) {
                const double d = distance(surf.element(m), topo.rx()[i]);
                const double v = path_gain(radio.c0_db, d, radio.alpha_ris_rx);
                ref[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] =
                    naka ? detail::nakagami(rng, naka->m_ris_rx, v) : detail::circular_gaussian(rng, v);
                ref_var[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] = v;
            }
        }
    }

    double hd = 0.0;
    for (double v : ch.direct_var) hd += v;
    ch.stats.sigma_hd2 = hd / static_cast<double>(ch.direct_var.size());
    ch.stats.sigma_g2 = detail::mean_of(ch.reflective_var, [](double v) { return v; });
    const double inc_mean = detail::mean_of(ch.incident_var, [](double v) { return v; });
    if (ch.distributed)
        ch.stats.sigma_h_tilde2 = inc_mean;
    else
        ch.stats.m_h = detail::mean_of(ch.incident_var, [](double v) { return std::sqrt(v); });
    return ch;
}

/// CSI fidelity: noiseless when p_db is +infinity.
struct CsiFidelity {
    double p_db = std::numeric_limits<double>::infinity();

    static CsiFidelity noiseless() { return {}; }
    static CsiFidelity noisy(double p) { return {p}; }
    bool is_noiseless() const { return std::isinf(p_db) && p_db > 0; }
};

/// Raised when a local view is asked for a coefficient outside its scope.
class ScopeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class UnsupportedMode : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// What a node knows: a (possibly corrupted) copy of the channels, and
/// optionally a restriction to one transmitter's outgoing links.
class CsiView {
public:
    explicit CsiView(ChannelSet channels, CsiFidelity fidelity = {}, std::optional<int> local_tx = {})
        : ch_(std::move(channels)), fidelity_(fidelity), local_tx_(local_tx) {}

    int users() const { return ch_.users; }
    bool distributed() const { return ch_.distributed; }
    int surfaces() const { return ch_.surfaces(); }
    int elements(int s) const { return ch_.elements(s); }
    const LinkStats& stats() const { return ch_.stats; }
    CsiFidelity fidelity() const { return fidelity_; }
    std::optional<int> local_tx() const { return local_tx_; }

    cplx direct(int j, int i) const {
        if (local_tx_ && j != *local_tx_) throw ScopeError("CsiView: direct link outside local scope");
        return ch_.h_d(j, i);
    }
    std::span<const cplx> incident(int s, int j) const {
        if (local_tx_ && (s != *local_tx_ || j != *local_tx_))
            throw ScopeError("CsiView: incident link outside local scope");
        return ch_.h(s, j);
    }
    std::span<const cplx> reflective(int s, int i) const {
        if (local_tx_ && s != *local_tx_) throw ScopeError("CsiView: reflective link outside local scope");
        return ch_.g(s, i);
    }

    /// Full channel set; only available for global views.
    const ChannelSet& channels() const {
        if (local_tx_) throw ScopeError("CsiView: local view has no global channel set");
        return ch_;
    }

private:
    ChannelSet ch_;
    CsiFidelity fidelity_;
    std::optional<int> local_tx_;
};

struct CorruptOptions {
    bool include_los_links = true;
};

/// Adds CN(0, Var(c) * 10^(-p/10)) to every coefficient c. The underlying
/// standard draws depend only on `seed`, so two fidelities with the same seed
/// differ only in the error scale.
inline CsiView corrupt(const ChannelSet& truth, CsiFidelity fidelity, std::uint64_t seed,
                       CorruptOptions opts = {}) {
    if (fidelity.is_noiseless()) return CsiView(truth, fidelity);
    if (std::isnan(fidelity.p_db)) throw std::invalid_argument("corrupt: p must not be NaN");
    const double scale = std::pow(10.0, -fidelity.p_db / 10.0);
    ChannelSet noisy = truth;

    {
        Rng rng = make_stream(seed, {stream_tag::csi, stream_tag::direct});
        for (std::size_t k = 0; k < noisy.direct.size(); ++k)
            noisy.direct[k] += detail::circular_gaussian(rng, noisy.direct_var[k] * scale);
    }
    for (int s = 0; s < noisy.surfaces(); ++s) {
        for (int j = 0; j < noisy.users; ++j) {
            Rng rng = make_stream(seed, {stream_tag::csi, stream_tag::incident, std::uint64_t(s), std::uint64_t(j)});
            if (noisy.incident_los && !opts.include_los_links) continue;
            auto& h = noisy.incident[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)];
            const auto& v = noisy.incident_var[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)];
            for (std::size_t m = 0; m < h.size(); ++m) h[m] += detail::circular_gaussian(rng, v[m] * scale);
        }
        for (int i = 0; i < noisy.users; ++i) {
            Rng rng = make_stream(seed, {stream_tag::csi, stream_tag::reflective, std::uint64_t(s), std::uint64_t(i)});
            auto& g = noisy.reflective[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
            const auto& v = noisy.reflective_var[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
            for (std::size_t m = 0; m < g.size(); ++m) g[m] += detail::circular_gaussian(rng, v[m] * scale);
        }
    }
    return CsiView(std::move(noisy), fidelity);
}

/// Local CSIT of transmitter `tx` in a distributed network: its direct links,
/// Tx_tx -> RIS_tx and RIS_tx -> every receiver. Hidden coefficients are
/// zeroed; only their statistics remain.
inline CsiView restrict(const CsiView& view, int tx) {
    if (!view.distributed()) throw UnsupportedMode("restrict: local CSIT needs a distributed topology");
    if (tx < 0 || tx >= view.users()) throw std::out_of_range("restrict: transmitter index");
    if (view.local_tx()) {
        if (*view.local_tx() != tx) throw ScopeError("restrict: view is already local to another transmitter");
        return view;
    }
    ChannelSet ch = view.channels();
    const int K = ch.users;
    for (int j = 0; j < K; ++j)
        if (j != tx)
            for (int i = 0; i < K; ++i) ch.direct[static_cast<std::size_t>(j * K + i)] = {};
    for (int s = 0; s < K; ++s) {
        for (int j = 0; j < K; ++j)
            if (s != tx || j != tx)
                for (auto& c : ch.incident[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)]) c = {};
        if (s != tx)
            for (auto& row : ch.reflective[static_cast<std::size_t>(s)])
                for (auto& c : row) c = {};
    }
    return CsiView(std::move(ch), view.fidelity(), tx);
}

/// CSV dump: link_type,surface,tx,rx,element,re,im (-1 marks "not applicable").
inline void write_channel_csv(std::ostream& out, const ChannelSet& ch) {
    out << "link_type,surface,tx,rx,element,re,im\n";
    char buf[96];
    auto row = [&](const char* type, int s, int j, int i, int m, cplx c) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.17g,%.17g\n", s, j, i, m, c.real(), c.imag());
        out << type << ',' << buf;
    };
    for (int j = 0; j < ch.users; ++j)
        for (int i = 0; i < ch.users; ++i) row("direct", -1, j, i, -1, ch.h_d(j, i));
    for (int s = 0; s < ch.surfaces(); ++s) {
        for (int j = 0; j < ch.users; ++j) {
            auto h = ch.h(s, j);
            for (std::size_t m = 0; m < h.size(); ++m) row("incident", s, j, -1, static_cast<int>(m), h[m]);
        }
        for (int i = 0; i < ch.users; ++i) {
            auto g = ch.g(s, i);
            for (std::size_t m = 0; m < g.size(); ++m) row("reflective", s, -1, i, static_cast<int>(m), g[m]);
        }
    }
}

}  // namespace rislab
