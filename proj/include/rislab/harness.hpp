#pragma once

// Monte-Carlo runner: scenarios, named presets, per-trial execution on a
// small worker pool, aggregation and deterministic CSV output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "rislab/baselines.hpp"
#include "rislab/channel.hpp"
#include "rislab/metrics.hpp"
#include "rislab/model.hpp"
#include "rislab/objective.hpp"
#include "rislab/random.hpp"
#include "rislab/search.hpp"

namespace rislab {

enum class Method { filled, ogs, sr, msr, ga, ses, random, brute, no_ris };

inline const std::vector<std::pair<Method, std::string>>& method_names() {
    static const std::vector<std::pair<Method, std::string>> names = {
        {Method::filled, "filled"}, {Method::ogs, "ogs"},       {Method::sr, "sr"},
        {Method::msr, "msr"},       {Method::ga, "ga"},         {Method::ses, "ses"},
        {Method::random, "random"}, {Method::brute, "brute"},   {Method::no_ris, "no_ris"},
    };
    return names;
}

inline std::string to_string(Method m) {
    for (const auto& [k, v] : method_names())
        if (k == m) return v;
    return "unknown";
}

inline Method parse_method(const std::string& s) {
    for (const auto& [k, v] : method_names())
        if (v == s) return k;
    throw std::invalid_argument("unknown method '" + s + "'");
}

struct Room {
    double width = 100.0;
    double height = 100.0;
};

inline Position random_point(const Room& room, Rng& rng) {
    std::uniform_real_distribution<double> x(0.0, room.width);
    std::uniform_real_distribution<double> y(0.0, room.height);
    const double px = x(rng);
    return {px, y(rng)};
}

struct SurfaceLayout {
    enum class Kind { central, central_random, distributed, none };
    Kind kind = Kind::central;
    Position center{};              // central
    std::vector<Position> centers;  // distributed, one per transmitter
    Room room{};                    // central_random
    Position orientation{1.0, 0.0};

    static SurfaceLayout central_at(Position p) { return {Kind::central, p, {}, {}, {1.0, 0.0}}; }
    static SurfaceLayout central_random_in(Room r) { return {Kind::central_random, {}, {}, r, {1.0, 0.0}}; }
    static SurfaceLayout distributed_at(std::vector<Position> c) {
        return {Kind::distributed, {}, std::move(c), {}, {1.0, 0.0}};
    }
};

/// One curve of an experiment: a method on a surface layout, optionally with
/// its own CSI fidelity and node positions.
struct Arm {
    std::string label;
    Method method = Method::filled;
    SurfaceLayout layout;
    std::optional<CsiFidelity> csi;
    std::optional<std::vector<Position>> tx;
    std::optional<std::vector<Position>> rx;
    std::optional<Room> rx_room;
};

struct Scenario {
    std::string name;
    int K = 4;
    int N = 4;
    std::vector<Position> tx;
    std::vector<Position> rx;
    std::optional<Room> rx_room;  // receivers redrawn per trial when set
    RadioParams radio;
    FadingSpec fading = LosRayleigh{};
    CsiFidelity csi;
    ObjectiveKind objective = ObjectiveKind::sum_rate;
    std::vector<Arm> arms;
    std::vector<int> M_values{16};
    std::vector<double> P_dbm{20.0};
    int trials = 100;
    std::uint64_t seed = 1;
    SearchBudget budget;
    double outage_gamma = 0.1;
    bool split_distributed_budget = true;  // each distributed surface gets M/K
    int sr_max_sweeps = 100;
    int msr_sweeps = 100;
    GeneticSpec ga;
    int ses_restarts = 100;
    double brute_cap = brute_force_default_cap;

    void validate() const {
        if (K < 1) throw std::invalid_argument("scenario: K must be >= 1");
        if (!is_power_of_two(N) || N < 2) throw std::invalid_argument("scenario: N must be a power of two >= 2");
        if (trials < 1) throw std::invalid_argument("scenario: trials must be >= 1");
        if (arms.empty()) throw std::invalid_argument("scenario: no arms");
        if (M_values.empty() || P_dbm.empty()) throw std::invalid_argument("scenario: empty M or P list");
        for (int M : M_values)
            if (M < 1) throw std::invalid_argument("scenario: M must be >= 1");
        if (!(outage_gamma > 0.0 && outage_gamma < 1.0)) throw std::invalid_argument("scenario: outage_gamma in (0,1)");
        budget.validate();
        ga.validate();
        validate_fading(fading);
        for (const auto& a : arms) {
            const auto& t = a.tx ? *a.tx : tx;
            if (static_cast<int>(t.size()) != K) throw std::invalid_argument("scenario: arm '" + a.label + "' needs K transmitters");
            const bool random_rx = a.rx_room || (!a.rx && rx_room);
            const auto& r = a.rx ? *a.rx : rx;
            if (!random_rx && static_cast<int>(r.size()) != K)
                throw std::invalid_argument("scenario: arm '" + a.label + "' needs K receivers");
            if (a.layout.kind == SurfaceLayout::Kind::distributed && static_cast<int>(a.layout.centers.size()) != K)
                throw std::invalid_argument("scenario: arm '" + a.label + "' needs one surface per transmitter");
        }
    }

private:
    static void validate_fading(const FadingSpec& f) { rislab::validate(f); }
};

struct ResultRow {
    std::string scenario;
    int trial = -1;  // -1 marks an aggregate row
    std::uint64_t seed = 0;
    std::string method;
    int K = 0;
    int M = 0;
    int N = 0;
    double P_dbm = 0.0;
    std::string metric;
    double value = 0.0;
};

/// rate_i = log2(1 + P_i |h_d^{[ii]}|^2 / sigma^2): every link on its own.
inline RateReport no_ris_parallel_baseline(const ChannelSet& ch, const RadioParams& radio) {
    const int K = ch.users;
    RateReport r;
    for (int i = 0; i < K; ++i) {
        const double snr = radio.power_watts(i) * std::norm(ch.h_d(i, i)) / radio.noise_watts();
        r.sinr.push_back(snr);
        r.rates.push_back(std::log2(1.0 + snr));
    }
    r.sum_rate = 0.0;
    for (double v : r.rates) r.sum_rate += v;
    r.min_rate = *std::min_element(r.rates.begin(), r.rates.end());
    return r;
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t trial_seed(std::uint64_t master, int trial) {
    return derive_seed(master, {stream_tag::trial, static_cast<std::uint64_t>(trial)});
}

/// Threads to use: the request (0 = hardware), capped by RIS_LAB_THREADS.
inline unsigned resolve_threads(unsigned requested) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RIS_LAB_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, n);
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. The first
/// exception is rethrown after all workers stop.
inline void parallel_for(int n, unsigned threads, const std::function<void(int)>& body) {
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1)));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

struct ArmOutcome {
    RateReport rates;
    std::uint64_t evals = 0;
    std::optional<double> score;
};

namespace detail {

template <LatticeObjective F>
OptResult dispatch(Method method, F& obj, const PhaseConfig& theta0, Rng& rng, const Scenario& sc) {
    switch (method) {
        case Method::filled: return global_search(obj, theta0, sc.budget);
        case Method::ogs: {
            SearchBudget b = sc.budget;
            b.tau = 1;
            return global_search(obj, theta0, b);
        }
        case Method::sr: return successive_refinement(obj, theta0, sc.sr_max_sweeps);
        case Method::msr: return modified_sr(obj, theta0, sc.msr_sweeps);
        case Method::ga: return genetic(obj, rng, sc.ga);
        case Method::ses: return simplified_exhaustive(obj, rng, sc.ses_restarts, sc.budget.i_max_loc);
        case Method::random: return random_configuration(obj, rng);
        case Method::brute: return brute_force(obj, sc.brute_cap);
        case Method::no_ris: break;
    }
    throw std::logic_error("dispatch: method has no optimizer");
}

inline Topology build_topology(const Scenario& sc, const Arm& arm, int M, const std::vector<Position>& rx,
                               std::uint64_t tseed, double lambda) {
    const auto& tx = arm.tx ? *arm.tx : sc.tx;
    const auto& L = arm.layout;
    switch (L.kind) {
        case SurfaceLayout::Kind::distributed: {
            const int Ms = sc.split_distributed_budget ? std::max(1, M / sc.K) : M;
            std::vector<SurfaceSpec> s;
            for (const auto& c : L.centers) s.push_back(SurfaceSpec(c, Ms, lambda / 2.0, L.orientation));
            return Topology(tx, rx, Distributed{std::move(s)});
        }
        case SurfaceLayout::Kind::central_random: {
            Rng rng = make_stream(tseed, {stream_tag::layout, 2});
            return Topology(tx, rx, Centralized{SurfaceSpec(random_point(L.room, rng), M, lambda / 2.0, L.orientation)});
        }
        case SurfaceLayout::Kind::central:
        case SurfaceLayout::Kind::none: break;
    }
    return Topology(tx, rx, Centralized{SurfaceSpec(L.center, M, lambda / 2.0, L.orientation)});
}

inline std::vector<Position> trial_receivers(const Scenario& sc, const Arm& arm, std::uint64_t tseed) {
    std::optional<Room> room = arm.rx_room;
    if (!room && !arm.rx) room = sc.rx_room;
    if (!room) return arm.rx ? *arm.rx : sc.rx;
    Rng rng = make_stream(tseed, {stream_tag::layout, 1});
    std::vector<Position> out;
    for (int i = 0; i < sc.K; ++i) out.push_back(random_point(*room, rng));
    return out;
}

}  // namespace detail

/// Optimizes one arm on its CSI view and evaluates it on the true channels.
inline ArmOutcome run_arm(const Scenario& sc, const Arm& arm, const ChannelSet& truth, const CsiView& view,
                          const RadioParams& radio, int M, std::uint64_t tseed) {
    ArmOutcome out;
    if (arm.method == Method::no_ris) {
        out.rates = no_ris_parallel_baseline(truth, radio);
        return out;
    }
    const std::uint64_t tag = fnv1a(arm.label);
    if (!truth.distributed) {
        Rng init = make_stream(tseed, {stream_tag::init, static_cast<std::uint64_t>(M), 0});
        const PhaseConfig theta0 = random_config(truth.elements(0), sc.N, init);
        Rng rng = make_stream(tseed, {stream_tag::method, static_cast<std::uint64_t>(M), tag});
        NetworkObjective obj(view, radio, sc.objective, sc.N);
        const OptResult r = detail::dispatch(arm.method, obj, theta0, rng, sc);
        out.evals = r.evals;
        out.rates = rates(effective_centralized(truth, r.config), radio);
        return out;
    }
    std::vector<PhaseConfig> theta0;
    for (int tx = 0; tx < truth.users; ++tx) {
        Rng init = make_stream(tseed, {stream_tag::init, static_cast<std::uint64_t>(M), static_cast<std::uint64_t>(tx + 1)});
        theta0.push_back(random_config(truth.elements(tx), sc.N, init));
    }
    const auto results = optimize_per_tx(view, radio, sc.N, [&](ScoreObjective& obj, int tx) {
        Rng rng = make_stream(tseed, {stream_tag::method, static_cast<std::uint64_t>(M), tag,
                                      static_cast<std::uint64_t>(tx)});
        return detail::dispatch(arm.method, obj, theta0[static_cast<std::size_t>(tx)], rng, sc);
    });
    std::vector<PhaseConfig> configs;
    for (const auto& r : results) {
        configs.push_back(r.config);
        out.evals += r.evals;
    }
    out.rates = rates(effective_distributed(truth, configs), radio);
    const CsiView exact(truth, CsiFidelity::noiseless());
    double total = 0.0;
    for (int tx = 0; tx < truth.users; ++tx)
        total += score(exact, tx, configs[static_cast<std::size_t>(tx)], radio);
    out.score = total / truth.users;
    return out;
}

/// Rows of one trial for every (M, arm, P).
inline std::vector<ResultRow> run_trial(const Scenario& sc, int trial) {
    const std::uint64_t tseed = trial_seed(sc.seed, trial);
    std::vector<ResultRow> rows;
    auto emit = [&](const Arm& arm, int M, double P, const char* metric, double v) {
        rows.push_back({sc.name, trial, tseed, arm.label, sc.K, M, sc.N, P, metric, v});
    };
    for (int M : sc.M_values) {
        for (const auto& arm : sc.arms) {
            std::optional<ChannelSet> truth;
            std::optional<CsiView> view;
            std::string setup_error;
            try {
                const auto rx = detail::trial_receivers(sc, arm, tseed);
                RadioParams radio0 = sc.radio;
                radio0.tx_powers_dbm.assign(static_cast<std::size_t>(sc.K), sc.P_dbm.front());
                const Topology topo = detail::build_topology(sc, arm, M, rx, tseed, radio0.lambda());
                truth = generate(topo, radio0, sc.fading, tseed);
                view = corrupt(*truth, arm.csi.value_or(sc.csi),
                               derive_seed(tseed, {stream_tag::csi, static_cast<std::uint64_t>(M)}));
            } catch (const std::exception& e) {
                setup_error = e.what();
            }
            for (double P : sc.P_dbm) {
                if (!setup_error.empty()) {
                    std::fprintf(stderr, "[%s] trial %d %s M=%d: %s\n", sc.name.c_str(), trial, arm.label.c_str(), M,
                                 setup_error.c_str());
                    emit(arm, M, P, "error", std::nan(""));
                    continue;
                }
                RadioParams radio = sc.radio;
                radio.tx_powers_dbm.assign(static_cast<std::size_t>(sc.K), P);
                try {
                    const ArmOutcome o = run_arm(sc, arm, *truth, *view, radio, M, tseed);
                    emit(arm, M, P, "evals", static_cast<double>(o.evals));
                    emit(arm, M, P, "min_rate", o.rates.min_rate);
                    if (o.score) emit(arm, M, P, "score", *o.score);
                    emit(arm, M, P, "sum_rate", o.rates.sum_rate);
                } catch (const std::exception& e) {
                    std::fprintf(stderr, "[%s] trial %d %s M=%d P=%g: %s\n", sc.name.c_str(), trial,
                                 arm.label.c_str(), M, P, e.what());
                    emit(arm, M, P, "error", std::nan(""));
                }
            }
        }
    }
    return rows;
}

/// Canonical order: M, P, method, trial (aggregates last), metric.
inline void sort_rows(std::vector<ResultRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) {
        const int ta = a.trial < 0 ? std::numeric_limits<int>::max() : a.trial;
        const int tb = b.trial < 0 ? std::numeric_limits<int>::max() : b.trial;
        return std::tie(a.M, a.P_dbm, a.method, ta, a.metric) < std::tie(b.M, b.P_dbm, b.method, tb, b.metric);
    });
}

/// Mean of each metric per (M, P, method) plus the outage capacity of the
/// per-trial sum-rates. Error rows are left out.
inline std::vector<ResultRow> aggregate(const Scenario& sc, const std::vector<ResultRow>& raw) {
    std::map<std::tuple<int, double, std::string, std::string>, std::vector<double>> groups;
    for (const auto& r : raw)
        if (r.trial >= 0 && r.metric != "error") groups[{r.M, r.P_dbm, r.method, r.metric}].push_back(r.value);
    std::vector<ResultRow> out;
    for (const auto& [k, v] : groups) {
        const auto& [M, P, method, metric] = k;
        double sum = 0.0;
        for (double x : v) sum += x;
        out.push_back({sc.name, -1, sc.seed, method, sc.K, M, sc.N, P, metric, sum / static_cast<double>(v.size())});
        if (metric == "sum_rate")
            out.push_back({sc.name, -1, sc.seed, method, sc.K, M, sc.N, P, "outage", outage_capacity(v, sc.outage_gamma)});
    }
    return out;
}

struct RunOptions {
    unsigned threads = 1;
    bool aggregate = true;
};

inline std::vector<ResultRow> run(const Scenario& sc, const RunOptions& opts = {}) {
    sc.validate();
    std::vector<std::vector<ResultRow>> per_trial(static_cast<std::size_t>(sc.trials));
    parallel_for(sc.trials, resolve_threads(opts.threads),
                 [&](int t) { per_trial[static_cast<std::size_t>(t)] = run_trial(sc, t); });
    std::vector<ResultRow> rows;
    for (auto& v : per_trial) rows.insert(rows.end(), v.begin(), v.end());
    if (opts.aggregate) {
        auto agg = aggregate(sc, rows);
        rows.insert(rows.end(), agg.begin(), agg.end());
    }
    sort_rows(rows);
    return rows;
}

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "scenario,trial,seed,method,K,M,N,P_dbm,metric,value\n";
    for (const auto& r : rows) {
        out << r.scenario << ',';
        if (r.trial < 0) out << "agg";
        else out << r.trial;
        out << ',' << r.seed << ',' << r.method << ',' << r.K << ',' << r.M << ',' << r.N << ','
            << format_value(r.P_dbm) << ',' << r.metric << ',' << format_value(r.value) << '\n';
    }
}

/// Aggregate value of one (method, M, P, metric), if present.
inline std::optional<double> find_aggregate(const std::vector<ResultRow>& rows, const std::string& method, int M,
                                            double P, const std::string& metric) {
    for (const auto& r : rows)
        if (r.trial < 0 && r.method == method && r.M == M && r.P_dbm == P && r.metric == metric) return r.value;
    return std::nullopt;
}

/// Per-trial values of one (method, M, P, metric) in trial order.
inline std::vector<double> trial_values(const std::vector<ResultRow>& rows, const std::string& method, int M, double P,
                                        const std::string& metric) {
    std::vector<std::pair<int, double>> v;
    for (const auto& r : rows)
        if (r.trial >= 0 && r.method == method && r.M == M && r.P_dbm == P && r.metric == metric)
            v.emplace_back(r.trial, r.value);
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (const auto& p : v) out.push_back(p.second);
    return out;
}

// ---------------------------------------------------------------- presets

namespace presets {

inline const std::vector<Position> square_tx{{50, 0}, {0, 50}, {100, 50}, {50, 100}};
inline const std::vector<Position> square_ris{{47, 4}, {3, 54}, {97, 46}, {53, 96}};

inline std::vector<Position> repeat(Position p, int K) { return std::vector<Position>(static_cast<std::size_t>(K), p); }

inline Arm arm(std::string label, Method m, SurfaceLayout layout) {
    Arm a;
    a.label = std::move(label);
    a.method = m;
    a.layout = std::move(layout);
    return a;
}

inline Scenario dist_vs_central() {
    Scenario s;
    s.name = "fig-dist-vs-central-sumrate";
    s.K = 4;
    s.N = 4;
    s.tx = square_tx;
    s.rx_room = Room{100, 100};
    s.radio = RadioParams::uniform(4, 20.0);
    s.arms = {
        arm("distributed", Method::filled, SurfaceLayout::distributed_at(square_ris)),
        arm("central-mid", Method::filled, SurfaceLayout::central_at({50, 50})),
        arm("central-near", Method::filled, SurfaceLayout::central_at({47, 4})),
        arm("central-random", Method::filled, SurfaceLayout::central_random_in({100, 100})),
    };
    s.M_values = {16, 32, 64, 128};
    s.P_dbm = {20.0};
    return s;
}

inline Scenario power_sweep() {
    Scenario s = dist_vs_central();
    s.name = "fig-power-sweep";
    s.M_values = {32};
    s.P_dbm = {0, 5, 10, 15, 20, 25, 30};
    return s;
}

inline Scenario outage() {
    Scenario s = dist_vs_central();
    s.name = "fig-outage";
    s.M_values = {32};
    s.P_dbm = {20.0};
    // centralized arm: every Tx at distance 50 from every Rx, 5 from the surface, 47.17 surface to Rx
    Arm central = arm("central", Method::filled, SurfaceLayout::central_at({3, 4}));
    central.tx = repeat({0, 0}, 4);
    central.rx = repeat({50, 0}, 4);
    // each Tx paired with the surface nearest to it
    Arm dist = arm("distributed", Method::filled,
                   SurfaceLayout::distributed_at({{75, 25}, {25, 25}, {75, 75}, {25, 75}}));
    s.arms = {dist, central};
    return s;
}

inline Scenario efficiency() {
    Scenario s;
    s.name = "fig-efficiency";
    s.K = 4;
    s.N = 4;
    s.tx = repeat({0, 0}, 4);
    s.rx = repeat({50, 0}, 4);
    s.radio = RadioParams::uniform(4, 20.0);
    s.fading = Rician{2.0};
    const auto ris = SurfaceLayout::central_at({3, 4});
    s.arms = {
        arm("filled", Method::filled, ris), arm("sr", Method::sr, ris),   arm("msr", Method::msr, ris),
        arm("ses", Method::ses, ris),       arm("ga", Method::ga, ris),   arm("random", Method::random, ris),
        arm("no_ris", Method::no_ris, ris),
    };
    s.M_values = {8, 16, 32, 64, 96};
    s.P_dbm = {20.0};
    return s;
}

inline Scenario minrate() {
    Scenario s = efficiency();
    s.name = "fig-minrate";
    s.objective = ObjectiveKind::max_min;
    return s;
}

inline Scenario nakagami() {
    Scenario s = efficiency();
    s.name = "fig-nakagami";
    s.fading = Nakagami{};
    s.radio.c0_db = -31.5;
    return s;
}

inline Scenario noisy() {
    Scenario s = efficiency();
    s.name = "fig-noisy";
    s.fading = LosRayleigh{};
    const auto ris = SurfaceLayout::central_at({3, 4});
    s.arms.clear();
    for (const char* m : {"filled", "sr"}) {
        for (double p : {std::numeric_limits<double>::infinity(), 30.0, 20.0, 10.0, 0.0}) {
            Arm a = arm(std::string(m) + (std::isinf(p) ? "-noiseless" : "-noisy" + format_value(p)), parse_method(m), ris);
            a.csi = CsiFidelity{p};
            s.arms.push_back(a);
        }
    }
    return s;
}

inline Scenario bound() {
    Scenario s;
    s.name = "fig-bound";
    s.K = 3;
    s.N = 8;
    // Tx-Rx 25, Tx-surface sqrt(2), surface-Rx 24.02
    s.tx = repeat({0, 0}, 3);
    s.rx = repeat({25, 0}, 3);
    s.radio = RadioParams::uniform(3, 20.0);
    s.radio.alpha_direct = 3.9;
    s.arms = {arm("filled", Method::filled, SurfaceLayout::central_at({1, 1}))};
    s.M_values = {24};
    s.P_dbm = {0, 5, 10, 15, 20, 25, 30};
    return s;
}

inline Scenario placement(double x0 = 15.0) {
    Scenario s;
    s.name = "fig-placement";
    s.K = 4;
    s.N = 4;
    s.tx = repeat({0, 0}, 4);
    s.rx = repeat({30, 0}, 4);
    s.radio = RadioParams::uniform(4, 30.0);
    s.csi = CsiFidelity::noisy(30.0);
    const auto ris = SurfaceLayout::central_at({x0, 1});
    s.arms = {arm("filled", Method::filled, ris), arm("sr", Method::sr, ris)};
    s.M_values = {8, 16, 32};
    s.P_dbm = {30.0};
    return s;
}

}  // namespace presets

inline const std::vector<std::pair<std::string, std::function<Scenario()>>>& preset_table() {
    static const std::vector<std::pair<std::string, std::function<Scenario()>>> table = {
        {"fig-dist-vs-central-sumrate", presets::dist_vs_central},
        {"fig-power-sweep", presets::power_sweep},
        {"fig-outage", presets::outage},
        {"fig-efficiency", presets::efficiency},
        {"fig-minrate", presets::minrate},
        {"fig-nakagami", presets::nakagami},
        {"fig-noisy", presets::noisy},
        {"fig-bound", presets::bound},
        {"fig-placement", [] { return presets::placement(); }},
    };
    return table;
}

inline std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : preset_table()) out.push_back(k);
    return out;
}

inline Scenario preset(const std::string& name) {
    for (const auto& [k, make] : preset_table())
        if (k == name) return make();
    std::string msg = "unknown preset '" + name + "'; available:";
    for (const auto& n : preset_names()) msg += " " + n;
    throw std::invalid_argument(msg);
}

// ---------------------------------------------------------------- placement

struct PlacementOptions {
    std::vector<double> x0{1.0, 15.0, 29.0};
    std::vector<Method> methods{Method::filled, Method::sr};
    int m_lo = 2;
    int m_hi = 128;
    int trials = 20;
    unsigned threads = 1;
};

struct PlacementRow {
    double x0;
    std::string method;
    int required_M;
    bool saturated;
};

/// Mean realized sum-rate of one method with a central surface at `where`.
inline double mean_sum_rate(const Scenario& base, Method method, Position where, int M, int trials, unsigned threads) {
    Scenario sc = base;
    sc.arms = {presets::arm(to_string(method), method, SurfaceLayout::central_at(where))};
    sc.M_values = {M};
    sc.P_dbm = {base.P_dbm.front()};
    sc.trials = trials;
    const auto rows = run(sc, {threads, true});
    const auto v = find_aggregate(rows, to_string(method), M, sc.P_dbm.front(), "sum_rate");
    if (!v) throw std::runtime_error("placement_sweep: every trial failed");
    return *v;
}

/// For each x0 and method, the smallest even M whose mean sum-rate reaches
/// the target, found by bisection on [m_lo, m_hi]; saturated when even m_hi
/// falls short.
inline std::vector<PlacementRow> placement_sweep(const Scenario& base, double target, const PlacementOptions& opt = {}) {
    if (opt.m_lo < 2 || opt.m_lo % 2 || opt.m_hi % 2 || opt.m_hi < opt.m_lo)
        throw std::invalid_argument("placement_sweep: M range must be even with 2 <= m_lo <= m_hi");
    const double y0 = base.arms.empty() ? 1.0 : base.arms.front().layout.center.y;
    std::vector<PlacementRow> out;
    for (double x0 : opt.x0) {
        for (Method method : opt.methods) {
            std::map<int, double> memo;
            auto reaches = [&](int M) {
                auto it = memo.find(M);
                if (it == memo.end())
                    it = memo.emplace(M, mean_sum_rate(base, method, {x0, y0}, M, opt.trials, opt.threads)).first;
                return it->second >= target;
            };
            if (!reaches(opt.m_hi)) {
                out.push_back({x0, to_string(method), opt.m_hi, true});
                continue;
            }
            int lo = opt.m_lo;
            int hi = opt.m_hi;
            while (lo < hi) {
                int mid = (lo + hi) / 2;
                mid -= mid % 2;
                if (reaches(mid)) hi = mid;
                else lo = mid + 2;
            }
            out.push_back({x0, to_string(method), hi, false});
        }
    }
    return out;
}

inline void write_placement_csv(std::ostream& out, const std::vector<PlacementRow>& rows) {
    out << "x0,method,required_M,saturated\n";
    for (const auto& r : rows)
        out << format_value(r.x0) << ',' << r.method << ',' << r.required_M << ',' << (r.saturated ? 1 : 0) << '\n';
}

}  // namespace rislab
