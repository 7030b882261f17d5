#pragma once

// JSON scenario and bound configuration files.
//
// A scenario file may name a preset under "base" and override any field;
// without "base" it starts from library defaults.

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rislab/bounds.hpp"
#include "rislab/harness.hpp"

namespace rislab {

using json = nlohmann::json;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace config_detail {

inline Position position(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("position must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<Position> positions(const json& j) {
    if (!j.is_array()) throw ConfigError("expected a list of [x, y] positions");
    std::vector<Position> out;
    for (const auto& p : j) out.push_back(position(p));
    return out;
}

inline Room room(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("room must be [width, height]");
    return {j[0].get<double>(), j[1].get<double>()};
}

// null or "inf" means noiseless
inline CsiFidelity fidelity(const json& j) {
    if (j.is_null()) return CsiFidelity::noiseless();
    if (j.is_string()) {
        if (j.get<std::string>() == "inf" || j.get<std::string>() == "noiseless") return CsiFidelity::noiseless();
        throw ConfigError("csi_p_db must be a number, null or \"inf\"");
    }
    return CsiFidelity::noisy(j.get<double>());
}

inline FadingSpec fading(const json& j) {
    const std::string type = j.value("type", "los_rayleigh");
    if (type == "los_rayleigh") return LosRayleigh{};
    if (type == "rician") return Rician{j.value("kappa", 2.0)};
    if (type == "nakagami") {
        Nakagami n;
        n.m_direct = j.value("m_direct", n.m_direct);
        n.m_tx_ris = j.value("m_tx_ris", n.m_tx_ris);
        n.m_ris_rx = j.value("m_ris_rx", n.m_ris_rx);
        if (j.contains("psi_deg")) n.psi = j["psi_deg"].get<double>() * std::numbers::pi / 180.0;
        return n;
    }
    throw ConfigError("unknown fading type '" + type + "'");
}

inline SurfaceLayout layout(const json& j) {
    const std::string kind = j.value("layout", "central");
    SurfaceLayout L;
    if (kind == "central") {
        if (!j.contains("center")) throw ConfigError("central layout needs \"center\"");
        L = SurfaceLayout::central_at(position(j["center"]));
    } else if (kind == "central_random") {
        L = SurfaceLayout::central_random_in(j.contains("room") ? room(j["room"]) : Room{});
    } else if (kind == "distributed") {
        if (!j.contains("centers")) throw ConfigError("distributed layout needs \"centers\"");
        L = SurfaceLayout::distributed_at(positions(j["centers"]));
    } else if (kind == "none") {
        L.kind = SurfaceLayout::Kind::none;
    } else {
        throw ConfigError("unknown layout '" + kind + "'");
    }
    if (j.contains("orientation")) L.orientation = position(j["orientation"]);
    return L;
}

inline Arm arm(const json& j) {
    Arm a;
    a.method = parse_method(j.value("method", "filled"));
    a.label = j.value("label", to_string(a.method));
    a.layout = layout(j);
    if (j.contains("csi_p_db")) a.csi = fidelity(j["csi_p_db"]);
    if (j.contains("tx")) a.tx = positions(j["tx"]);
    if (j.contains("rx")) a.rx = positions(j["rx"]);
    if (j.contains("rx_room")) a.rx_room = room(j["rx_room"]);
    return a;
}

}  // namespace config_detail

inline Scenario scenario_from_json(const json& j) {
    namespace cd = config_detail;
    try {
        Scenario s = j.contains("base") ? preset(j["base"].get<std::string>()) : Scenario{};
        s.name = j.value("name", s.name.empty() ? std::string("custom") : s.name);
        s.K = j.value("K", s.K);
        s.N = j.value("N", s.N);
        if (j.contains("tx")) s.tx = cd::positions(j["tx"]);
        if (j.contains("rx")) {
            s.rx = cd::positions(j["rx"]);
            s.rx_room.reset();
        }
        if (j.contains("rx_room")) s.rx_room = cd::room(j["rx_room"]);
        if (j.contains("radio")) {
            const auto& r = j["radio"];
            s.radio.carrier_hz = r.value("carrier_hz", s.radio.carrier_hz);
            s.radio.noise_dbm = r.value("noise_dbm", s.radio.noise_dbm);
            s.radio.c0_db = r.value("c0_db", s.radio.c0_db);
            s.radio.alpha_direct = r.value("alpha_direct", s.radio.alpha_direct);
            s.radio.alpha_tx_ris = r.value("alpha_tx_ris", s.radio.alpha_tx_ris);
            s.radio.alpha_ris_rx = r.value("alpha_ris_rx", s.radio.alpha_ris_rx);
        }
        if (j.contains("fading")) s.fading = cd::fading(j["fading"]);
        if (j.contains("csi_p_db")) s.csi = cd::fidelity(j["csi_p_db"]);
        if (j.contains("objective")) {
            const auto o = j["objective"].get<std::string>();
            if (o == "sum_rate") s.objective = ObjectiveKind::sum_rate;
            else if (o == "max_min") s.objective = ObjectiveKind::max_min;
            else throw ConfigError("objective must be sum_rate or max_min");
        }
        if (j.contains("arms")) {
            s.arms.clear();
            for (const auto& a : j["arms"]) s.arms.push_back(cd::arm(a));
        }
        if (j.contains("M")) s.M_values = j["M"].get<std::vector<int>>();
        if (j.contains("P_dbm")) s.P_dbm = j["P_dbm"].get<std::vector<double>>();
        s.trials = j.value("trials", s.trials);
        s.seed = j.value("seed", s.seed);
        s.outage_gamma = j.value("outage_gamma", s.outage_gamma);
        s.split_distributed_budget = j.value("split_distributed_budget", s.split_distributed_budget);
        s.sr_max_sweeps = j.value("sr_max_sweeps", s.sr_max_sweeps);
        s.msr_sweeps = j.value("msr_sweeps", s.msr_sweeps);
        s.ses_restarts = j.value("ses_restarts", s.ses_restarts);
        s.brute_cap = j.value("brute_cap", s.brute_cap);
        if (j.contains("budget")) {
            const auto& b = j["budget"];
            s.budget.r0 = b.value("r0", s.budget.r0);
            s.budget.eps = b.value("eps", s.budget.eps);
            s.budget.tau = b.value("tau", s.budget.tau);
            s.budget.circular_distance = b.value("circular_distance", s.budget.circular_distance);
            if (b.contains("i_max_loc")) s.budget.i_max_loc = b["i_max_loc"].get<int>();
            if (b.contains("i_max_filled")) s.budget.i_max_filled = b["i_max_filled"].get<std::uint64_t>();
        }
        if (j.contains("ga")) {
            const auto& g = j["ga"];
            s.ga.population = g.value("population", s.ga.population);
            s.ga.generations = g.value("generations", s.ga.generations);
            s.ga.tournament_k = g.value("tournament_k", s.ga.tournament_k);
            s.ga.elitism = g.value("elitism", s.ga.elitism);
            if (g.contains("mutation_rate")) s.ga.mutation_rate = g["mutation_rate"].get<double>();
        }
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario config: ") + e.what());
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

/// A preset name or a path to a JSON scenario file.
inline Scenario load_scenario(const std::string& name_or_path) {
    for (const auto& n : preset_names())
        if (n == name_or_path) return preset(n);
    return scenario_from_json(read_json_file(name_or_path));
}

struct BoundConfig {
    SymmetricScenario scenario;
    std::vector<double> P_dbm;   // sweep; empty means the scenario's P only
    double target = 1.0;
    bool implicit = false;
    AGrid grid;
};

/// Either explicit variances (sigma_hd2, nu_prime) or symmetric distances
/// (d_direct, d_tx_ris, d_ris_rx) with path-loss exponents.
inline BoundConfig bound_from_json(const json& j) {
    try {
        BoundConfig c;
        auto& s = c.scenario;
        const int K = j.value("K", 3);
        const int N = j.value("N", 8);
        const double noise = dbm_to_watts(j.value("noise_dbm", -80.0));
        if (j.contains("P_dbm") && j["P_dbm"].is_array()) c.P_dbm = j["P_dbm"].get<std::vector<double>>();
        const double p0 = c.P_dbm.empty() ? j.value("P_dbm", 20.0) : c.P_dbm.front();
        if (j.contains("sigma_hd2")) {
            s.K = K;
            s.N = N;
            s.P = dbm_to_watts(p0);
            s.noise = noise;
            s.sigma_hd2 = j.at("sigma_hd2").get<double>();
            s.nu_prime = j.at("nu_prime").get<double>();
        } else {
            const double c0 = j.value("c0_db", -30.0);
            s = SymmetricScenario::from_distances(K, N, dbm_to_watts(p0), noise, c0, j.at("d_direct").get<double>(),
                                                  j.value("alpha_direct", 3.5), j.at("d_tx_ris").get<double>(),
                                                  j.value("alpha_tx_ris", 2.0), j.at("d_ris_rx").get<double>(),
                                                  j.value("alpha_ris_rx", 2.1));
        }
        s.m_minus = j.value("m_minus", s.m_minus);
        s.m_plus = j.value("m_plus", s.m_plus);
        c.target = j.value("target", c.target);
        c.implicit = j.value("implicit", false);
        if (j.contains("a_grid")) {
            const auto& g = j["a_grid"];
            c.grid.start = g.value("start", c.grid.start);
            c.grid.stop = g.value("stop", c.grid.stop);
            c.grid.step = g.value("step", c.grid.step);
        }
        s.validate();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bound config: ") + e.what());
    }
}

}  // namespace rislab
