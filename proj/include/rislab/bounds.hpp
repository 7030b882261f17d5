#pragma once

// Analytic side: Gaussian tail utilities, the cascaded-gain variance, small
// gain probabilities and lower bounds on the number of surface elements for
// a symmetric network.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rislab/channel.hpp"

namespace rislab {

inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// x with Q(x) = p, by Newton steps kept inside a shrinking bracket.
inline double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inverse: p must lie in (0, 1)");
    if (p == 0.5) return 0.0;
    double lo = -40.0;
    double hi = 40.0;
    double x = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double fx = q_function(x) - p;
        if (std::abs(fx) < 1e-15 * std::max(p, 1e-300) || hi - lo < 1e-15) break;
        // Q is decreasing
        if (fx > 0.0) lo = x;
        else hi = x;
        const double slope = -std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        double next = x - fx / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    return x;
}

/// nu = M sigma_g^2 m_h^2
inline double cascaded_variance(int M, double sigma_g2, double m_h) {
    if (M < 0) throw std::domain_error("cascaded_variance: negative M");
    return M * sigma_g2 * m_h * m_h;
}

/// Pr(|g Theta h| < delta / 2) is approximately at least delta^2 / (2 pi nu).
inline double small_gain_probability(double delta, double nu) {
    if (!(delta >= 0.0) || !(nu > 0.0)) throw std::domain_error("small_gain_probability: need delta >= 0, nu > 0");
    return delta * delta / (2.0 * std::numbers::pi * nu);
}

/// Pr(|h_d| < delta / 2) lower approximation (delta / (sigma_hd sqrt(2 pi)))^2.
inline double direct_small_probability(double delta, double sigma_hd) {
    const double x = delta / (sigma_hd * std::sqrt(2.0 * std::numbers::pi));
    return x * x;
}

/// Pr(|h_d| > Delta) lower bound [2 Q(Delta / sigma_hd)]^2.
inline double direct_large_probability(double Delta, double sigma_hd) {
    const double x = 2.0 * q_function(Delta / sigma_hd);
    return x * x;
}

inline constexpr double default_m_minus = 10.0;
inline constexpr double default_m_plus = 512.0;

/// Symmetric network: common power, equal distances per link class.
struct SymmetricScenario {
    int K = 3;
    int N = 8;
    double P = 1.0;         // W
    double noise = 1e-11;   // W
    double sigma_hd2 = 0.0; // direct-link variance
    double nu_prime = 0.0;  // per-element cascaded variance
    double m_minus = default_m_minus;
    double m_plus = default_m_plus;

    double sigma_hd() const { return std::sqrt(sigma_hd2); }

    void validate() const {
        if (K < 1 || N < 2) throw std::invalid_argument("SymmetricScenario: need K >= 1, N >= 2");
        if (!(P > 0) || !(noise > 0) || !(sigma_hd2 > 0) || !(nu_prime > 0))
            throw std::invalid_argument("SymmetricScenario: powers and variances must be positive");
        if (!(m_plus > m_minus) || !(m_minus > 0)) throw std::invalid_argument("SymmetricScenario: need 0 < M- < M+");
    }

    /// nu' = sigma_g^2 m_h^2 with LoS amplitude m_h (centralized) or
    /// sigma_g^2 sigma~_h^2 (distributed).
    static SymmetricScenario from_stats(const LinkStats& st, bool distributed, int K, int N, double P, double noise) {
        SymmetricScenario s;
        s.K = K;
        s.N = N;
        s.P = P;
        s.noise = noise;
        s.sigma_hd2 = st.sigma_hd2;
        s.nu_prime = st.sigma_g2 * (distributed ? st.sigma_h_tilde2 : st.m_h * st.m_h);
        return s;
    }

    /// Path gains for symmetric distances d_direct, d_tx_ris, d_ris_rx.
    static SymmetricScenario from_distances(int K, int N, double P, double noise, double c0_db, double d_direct,
                                            double alpha_direct, double d_tx_ris, double alpha_tx_ris, double d_ris_rx,
                                            double alpha_ris_rx) {
        SymmetricScenario s;
        s.K = K;
        s.N = N;
        s.P = P;
        s.noise = noise;
        s.sigma_hd2 = path_gain(c0_db, d_direct, alpha_direct);
        s.nu_prime = path_gain(c0_db, d_ris_rx, alpha_ris_rx) * path_gain(c0_db, d_tx_ris, alpha_tx_ris);
        return s;
    }
};

inline double log_base(double x, int N) { return std::log(x) / std::log(static_cast<double>(N)); }

/// Delta = sigma_hd Q^{-1}(1 / (2 N^{a/(2K)})) - N^{-(M- - a)/(2K^2)} sqrt(pi/2 M+ nu')
inline double centralized_margin(const SymmetricScenario& s, double a, double m_minus, double m_plus) {
    const double K = s.K;
    const double qi = q_inverse(0.5 * std::pow(static_cast<double>(s.N), -a / (2.0 * K)));
    return s.sigma_hd() * qi -
           std::pow(static_cast<double>(s.N), -(m_minus - a) / (2.0 * K * K)) *
               std::sqrt(std::numbers::pi / 2.0 * m_plus * s.nu_prime);
}

/// Lower bound on SINR_i before the logarithm is taken:
/// Delta^2 / (sigma^2/P + 2 pi (K-1) N^{-(M-a)/K^2} M+ nu'), zero if Delta <= 0.
inline double centralized_sinr_form(const SymmetricScenario& s, double M, double a, std::optional<double> m_minus = {},
                                    std::optional<double> m_plus = {}) {
    const double mm = m_minus.value_or(s.m_minus);
    const double mp = m_plus.value_or(s.m_plus);
    const double K = s.K;
    const double Delta = centralized_margin(s, a, mm, mp);
    if (!(Delta > 0.0)) return 0.0;
    const double interference =
        2.0 * std::numbers::pi * (K - 1.0) * std::pow(static_cast<double>(s.N), -(M - a) / (K * K)) * mp * s.nu_prime;
    return Delta * Delta / (s.noise / s.P + interference);
}

/// K^2 log_N[SINR~ 2 pi (K-1) M+ nu' / (Delta^2 - SINR~ sigma^2/P)] + a, or
/// nothing where Delta <= 0 or the denominator is not positive.
inline std::optional<double> centralized_bracket(const SymmetricScenario& s, double target, double a) {
    const double K = s.K;
    const double Delta = centralized_margin(s, a, s.m_minus, s.m_plus);
    if (!(Delta > 0.0)) return std::nullopt;
    const double den = Delta * Delta - target * s.noise / s.P;
    if (!(den > 0.0)) return std::nullopt;
    const double num = target * 2.0 * std::numbers::pi * (K - 1.0) * s.m_plus * s.nu_prime;
    if (num <= 0.0) return -std::numeric_limits<double>::infinity();
    return K * K * log_base(num / den, s.N) + a;
}

/// (K-1) log_N[score~ (pi/2)(K-1)(sigma_hd^2 + M+ nu') /
///   ((sigma_hd^2 + M- nu') Q^{-1}(1/(2 N^{a/2}))^2 - (sigma^2/P) score~)] + a
inline std::optional<double> distributed_bracket(const SymmetricScenario& s, double target, double a) {
    const double K = s.K;
    const double qi = q_inverse(0.5 * std::pow(static_cast<double>(s.N), -a / 2.0));
    const double den = (s.sigma_hd2 + s.m_minus * s.nu_prime) * qi * qi - s.noise / s.P * target;
    if (!(den > 0.0)) return std::nullopt;
    if (s.K == 1) return a;
    const double num = target * std::numbers::pi / 2.0 * (K - 1.0) * (s.sigma_hd2 + s.m_plus * s.nu_prime);
    if (num <= 0.0) return -std::numeric_limits<double>::infinity();
    return (K - 1.0) * log_base(num / den, s.N) + a;
}

struct BoundPoint {
    double a;
    double bound;  // NaN where infeasible
};

struct BoundResult {
    int m_min = 0;
    double a_star = 0.0;
    double value = std::numeric_limits<double>::quiet_NaN();  // min over a of max(bracket(a), a)
    bool feasible = false;
    bool clamped = false;
    std::vector<BoundPoint> grid;
};

struct AGrid {
    double start = 0.0;
    double stop = default_m_plus;
    double step = 0.25;
    double refine_tol = 1e-3;
};

namespace detail {

template <class Bracket>
BoundResult minimize_bracket(Bracket&& bracket, const AGrid& g, double m_minus, bool strict) {
    if (!(g.step > 0.0) || g.stop < g.start) throw std::invalid_argument("AGrid: invalid grid");
    constexpr double inf = std::numeric_limits<double>::infinity();
    // a cannot exceed M, so M >= max(bracket(a), a)
    auto objective = [&](double a) {
        const auto b = bracket(a);
        return b ? std::max(*b, a) : inf;
    };
    BoundResult res;
    double best = inf;
    double best_a = g.start;
    const auto steps = static_cast<long>(std::floor((g.stop - g.start) / g.step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const double a = g.start + static_cast<double>(i) * g.step;
        const auto b = bracket(a);
        res.grid.push_back({a, b ? *b : std::numeric_limits<double>::quiet_NaN()});
        const double v = objective(a);
        if (v < best) {
            best = v;
            best_a = a;
        }
    }
    if (best == inf) return res;

    // golden section on the cell around the best grid point
    double lo = std::max(g.start, best_a - g.step);
    double hi = std::min(g.stop, best_a + g.step);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > g.refine_tol) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    const double mid = 0.5 * (lo + hi);
    const double fm = objective(mid);
    if (fm < best) {
        best = fm;
        best_a = mid;
    }

    res.feasible = true;
    res.a_star = best_a;
    res.value = best;
    const double floor_m = m_minus + 1.0;
    double m = -inf;
    if (std::isfinite(best)) m = strict ? std::floor(best) + 1.0 : std::ceil(best - 1e-12);
    if (m < floor_m) {
        m = floor_m;
        res.clamped = true;
    }
    res.m_min = static_cast<int>(m);
    return res;
}

}  // namespace detail

/// Smallest integer M >= min_a max(bracket(a), a), clamped to at least M- + 1.
inline BoundResult min_elements_centralized(const SymmetricScenario& s, double sinr_target, const AGrid& grid = {}) {
    s.validate();
    return detail::minimize_bracket([&](double a) { return centralized_bracket(s, sinr_target, a); }, grid,
                                    s.m_minus, false);
}

/// Smallest integer M > min_a max(bracket(a), a), clamped to at least M- + 1.
inline BoundResult min_elements_distributed(const SymmetricScenario& s, double score_target, const AGrid& grid = {}) {
    s.validate();
    return detail::minimize_bracket([&](double a) { return distributed_bracket(s, score_target, a); }, grid,
                                    s.m_minus, true);
}

/// The centralized condition with the validity interval collapsed onto M
/// itself (M- = M+ = M): smallest M in [1, max_m] for which some a in [0, M]
/// on the grid makes the SINR lower bound reach the target.
inline BoundResult min_elements_centralized_implicit(const SymmetricScenario& s, double sinr_target, int max_m = 1024,
                                                     double a_step = 0.25) {
    s.validate();
    BoundResult res;
    for (int M = 1; M <= max_m; ++M) {
        for (double a = 0.0; a <= M + 1e-9; a += a_step) {
            if (centralized_sinr_form(s, M, a, M, M) >= sinr_target) {
                res.feasible = true;
                res.m_min = M;
                res.a_star = a;
                res.value = M;
                return res;
            }
        }
    }
    return res;
}

}  // namespace rislab
