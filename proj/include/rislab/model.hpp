#pragma once

// Domain types shared by every module: planar geometry, radio parameters,
// the quantized phase lattice and unit conversions.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rislab {

inline constexpr double speed_of_light = 299'792'458.0;  // m/s
inline constexpr double default_carrier_hz = 1.8e9;

/// Point in the plane, meters.
struct Position {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(Position a, Position b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Large-scale power gain C0 * d^-alpha with C0 given in dB.
inline double path_gain(double c0_db, double d, double alpha) {
    if (!(d > 0.0)) throw std::domain_error("path_gain: distance must be positive");
    return db_to_linear(c0_db) * std::pow(d, -alpha);
}

inline double wavelength(double carrier_hz) { return speed_of_light / carrier_hz; }

/// Uniform linear array of passive elements. Element m sits at
/// center + m * spacing * orientation (0-based m).
class SurfaceSpec {
public:
    SurfaceSpec(Position center, int element_count, double spacing,
                Position orientation = {1.0, 0.0})
        : center_(center), element_count_(element_count), spacing_(spacing) {
        if (element_count < 1) throw std::invalid_argument("SurfaceSpec: element_count must be >= 1");
        if (!(spacing > 0.0)) throw std::invalid_argument("SurfaceSpec: spacing must be positive");
        const double norm = std::hypot(orientation.x, orientation.y);
        if (!(norm > 0.0)) throw std::invalid_argument("SurfaceSpec: orientation must be nonzero");
        orientation_ = {orientation.x / norm, orientation.y / norm};
    }

    /// Half-wavelength spacing at the given carrier.
    static SurfaceSpec half_wavelength(Position center, int element_count,
                                       double carrier_hz = default_carrier_hz,
                                       Position orientation = {1.0, 0.0}) {
        return SurfaceSpec(center, element_count, wavelength(carrier_hz) / 2.0, orientation);
    }

    Position center() const { return center_; }
    int element_count() const { return element_count_; }
    double spacing() const { return spacing_; }
    Position orientation() const { return orientation_; }

    Position element(int m) const {
        if (m < 0 || m >= element_count_) throw std::out_of_range("SurfaceSpec::element");
        return {center_.x + m * spacing_ * orientation_.x, center_.y + m * spacing_ * orientation_.y};
    }

private:
    Position center_;
    int element_count_;
    double spacing_;
    Position orientation_{1.0, 0.0};
};

struct Centralized {
    SurfaceSpec surface;
};

/// One surface per transmitter; surface i belongs to transmitter i.
struct Distributed {
    std::vector<SurfaceSpec> surfaces;
};

class Topology {
public:
    using Mode = std::variant<Centralized, Distributed>;

    Topology(std::vector<Position> tx, std::vector<Position> rx, Mode mode)
        : tx_(std::move(tx)), rx_(std::move(rx)), mode_(std::move(mode)) {
        if (tx_.empty()) throw std::invalid_argument("Topology: need at least one user");
        if (tx_.size() != rx_.size()) throw std::invalid_argument("Topology: tx/rx count mismatch");
        if (auto* d = std::get_if<Distributed>(&mode_); d && d->surfaces.size() != tx_.size())
            throw std::invalid_argument("Topology: distributed mode needs one surface per transmitter");
    }

    int users() const { return static_cast<int>(tx_.size()); }
    bool distributed() const { return std::holds_alternative<Distributed>(mode_); }
    const std::vector<Position>& tx() const { return tx_; }
    const std::vector<Position>& rx() const { return rx_; }
    const Mode& mode() const { return mode_; }

    int surface_count() const { return distributed() ? users() : 1; }

    const SurfaceSpec& surface(int s) const {
        if (const auto* c = std::get_if<Centralized>(&mode_)) {
            if (s != 0) throw std::out_of_range("Topology::surface");
            return c->surface;
        }
        return std::get<Distributed>(mode_).surfaces.at(static_cast<std::size_t>(s));
    }

private:
    std::vector<Position> tx_;
    std::vector<Position> rx_;
    Mode mode_;
};

/// Powers in dBm, gains in dB. SINR arithmetic downstream is in watts.
struct RadioParams {
    double carrier_hz = default_carrier_hz;
    double noise_dbm = -80.0;
    std::vector<double> tx_powers_dbm;
    double c0_db = -30.0;
    double alpha_direct = 3.5;
    double alpha_tx_ris = 2.0;
    double alpha_ris_rx = 2.1;

    double lambda() const { return wavelength(carrier_hz); }
    double noise_watts() const { return dbm_to_watts(noise_dbm); }
    double power_watts(int i) const { return dbm_to_watts(tx_powers_dbm.at(static_cast<std::size_t>(i))); }

    std::vector<double> powers_watts() const {
        std::vector<double> out;
        out.reserve(tx_powers_dbm.size());
        for (double p : tx_powers_dbm) out.push_back(dbm_to_watts(p));
        return out;
    }

    void validate(int users) const {
        if (static_cast<int>(tx_powers_dbm.size()) != users)
            throw std::invalid_argument("RadioParams: need one transmit power per user");
        if (alpha_direct < 0 || alpha_tx_ris < 0 || alpha_ris_rx < 0)
            throw std::invalid_argument("RadioParams: path-loss exponents must be nonnegative");
        if (!(carrier_hz > 0)) throw std::invalid_argument("RadioParams: carrier must be positive");
    }

    static RadioParams uniform(int users, double p_dbm) {
        RadioParams r;
        r.tx_powers_dbm.assign(static_cast<std::size_t>(users), p_dbm);
        return r;
    }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Phase levels k_m in [0, N) on the lattice {0, 2pi/N, ..., 2pi(N-1)/N}.
/// Amplitudes are fixed to one. No mutator can leave the lattice.
class PhaseConfig {
public:
    PhaseConfig(std::vector<int> levels, int resolution)
        : levels_(std::move(levels)), resolution_(resolution) {
        if (!is_power_of_two(resolution))
            throw std::invalid_argument("PhaseConfig: resolution must be a power of two");
        for (int k : levels_) check_level(k);
    }

    static PhaseConfig zeros(int elements, int resolution) {
        return PhaseConfig(std::vector<int>(static_cast<std::size_t>(elements), 0), resolution);
    }

    int size() const { return static_cast<int>(levels_.size()); }
    int resolution() const { return resolution_; }
    std::span<const int> levels() const { return levels_; }

    int level(int m) const {
        if (m < 0 || m >= size()) throw std::out_of_range("PhaseConfig::level");
        return levels_[static_cast<std::size_t>(m)];
    }

    double phase(int m) const { return 2.0 * std::numbers::pi * level(m) / resolution_; }

    void set(int m, int k) {
        if (m < 0 || m >= size()) throw std::out_of_range("PhaseConfig::set");
        check_level(k);
        levels_[static_cast<std::size_t>(m)] = k;
    }

    PhaseConfig with(int m, int k) const {
        PhaseConfig out = *this;
        out.set(m, k);
        return out;
    }

    friend bool operator==(const PhaseConfig&, const PhaseConfig&) = default;

private:
    void check_level(int k) const {
        if (k < 0 || k >= resolution_) throw std::out_of_range("PhaseConfig: level outside lattice");
    }

    std::vector<int> levels_;
    int resolution_;
};

inline double phase_of(const PhaseConfig& config, int m) { return config.phase(m); }

inline std::string to_string(const PhaseConfig& c) {
    std::string s;
    for (int k : c.levels()) {
        if (!s.empty()) s += ' ';
        s += std::to_string(k);
    }
    return s;
}

}  // namespace rislab
