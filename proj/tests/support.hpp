#pragma once

#include <complex>
#include <random>
#include <vector>

#include "rislab/channel.hpp"
#include "rislab/model.hpp"

namespace testsupport {

using rislab::cplx;

inline cplx gaussian(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    return {re, n(rng)};
}

// Unit-variance channel set built without generate(); S surfaces of M elements.
inline rislab::ChannelSet random_channels(int K, int M, std::uint64_t seed, bool distributed = false) {
    std::mt19937_64 rng(seed);
    rislab::ChannelSet ch;
    ch.users = K;
    ch.distributed = distributed;
    const int S = distributed ? K : 1;
    for (int k = 0; k < K * K; ++k) {
        ch.direct.push_back(gaussian(rng));
        ch.direct_var.push_back(1.0);
    }
    ch.incident.assign(S, std::vector<std::vector<cplx>>(K, std::vector<cplx>(M)));
    ch.incident_var.assign(S, std::vector<std::vector<double>>(K, std::vector<double>(M, 1.0)));
    ch.reflective = ch.incident;
    ch.reflective_var = ch.incident_var;
    for (int s = 0; s < S; ++s)
        for (int j = 0; j < K; ++j)
            for (int m = 0; m < M; ++m) {
                ch.incident[s][j][m] = gaussian(rng);
                ch.reflective[s][j][m] = gaussian(rng);
            }
    ch.stats.sigma_hd2 = 1.0;
    ch.stats.sigma_g2 = 1.0;
    ch.stats.m_h = 1.0;
    ch.stats.sigma_h_tilde2 = 1.0;
    return ch;
}

// e[j][i] = h_d[j][i] + sum_s sum_m g[s][i][m] exp(j theta_s,m) h[s][j][m]
inline std::vector<cplx> scalar_gains(const rislab::ChannelSet& ch, const std::vector<rislab::PhaseConfig>& th) {
    const int K = ch.users;
    std::vector<cplx> e(K * K);
    for (int j = 0; j < K; ++j)
        for (int i = 0; i < K; ++i) {
            cplx acc = ch.direct[j * K + i];
            for (std::size_t s = 0; s < th.size(); ++s)
                for (int m = 0; m < th[s].size(); ++m)
                    acc += ch.reflective[s][i][m] * std::exp(cplx(0.0, th[s].phase(m))) * ch.incident[s][j][m];
            e[j * K + i] = acc;
        }
    return e;
}

inline std::vector<double> scalar_rates(const std::vector<cplx>& e, int K, const std::vector<double>& p, double noise) {
    std::vector<double> r;
    for (int i = 0; i < K; ++i) {
        double interf = 0.0;
        for (int j = 0; j < K; ++j)
            if (j != i) interf += p[j] * std::norm(e[j * K + i]);
        r.push_back(std::log2(1.0 + p[i] * std::norm(e[i * K + i]) / (noise + interf)));
    }
    return r;
}

}  // namespace testsupport
