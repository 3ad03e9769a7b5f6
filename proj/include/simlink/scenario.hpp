#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace simlink {

inline constexpr double kSpeedOfLight = 3e8;  // m/s

/// Full scalar description of one SIM-aided point-to-point link.
/// All quantities are SI base units (Hz, m, s, W, bits); dB conversions
/// happen only at config boundaries. Immutable by convention after
/// construction; safe to share across workers.
struct LinkScenario {
    int num_streams = 3;  // S
    int layers_tx = 3;    // L
    int layers_rx = 3;    // K
    int atoms_tx = 36;    // M, perfect square
    int atoms_rx = 36;    // N, perfect square

    double freq = 7e9;           // Hz
    double wavelength = 0.0214;  // m, kept independent of freq (see validate warnings)
    double bandwidth = 1e7;      // Hz
    double noise_psd = 1e-21;    // W/Hz (-210 dBW/Hz)
    double tx_power = 0.01;      // W
    double rician = 20.0;        // kappa
    double pathloss_exponent = 2.2;
    double ref_distance = 1.0;   // m
    // When set, wins over the 20*log10(4*pi*d0/lambda) formula.
    std::optional<double> ref_pathloss_db = 80.0;
    double link_distance = 100.0;  // m, eVTOL separation

    double thickness_tx = 0.1;  // D_t, m
    double thickness_rx = 0.1;  // D_r, m
    double atom_pitch_tx = 0.0107;  // r_tx = lambda/2
    double atom_pitch_rx = 0.0107;  // r_rx
    double atom_area_tx = 0.01;     // C_t, m^2
    double atom_area_rx = 0.01;     // C_r, m^2
    double wave_speed_tx = kSpeedOfLight;  // m/s inside TX-SIM
    double wave_speed_rx = kSpeedOfLight;

    double packet_mean = 1e8;   // l_d, bits (exponential law)
    double arrival_rate = 1.0;  // delta_d, packets/s
    double wait_budget = 0.5;   // t_b, s
    double delay_weight = 1.0;  // rho, 1/s

    std::uint64_t rng_seed = 1;

    // Options resolved outside the paper's text.
    bool d2_worst_path = true;        // corner-to-corner hops; false = aligned path
    std::string los_mode = "ones";    // "ones" | "steering"
    int randomization_draws = 200;

    // derived geometry helpers
    double layer_gap_tx() const { return thickness_tx / layers_tx; }
    double layer_gap_rx() const { return thickness_rx / layers_rx; }
    int grid_cols_tx() const;  // m_max^r
    int grid_cols_rx() const;  // n_max^r
};

struct Violation {
    std::string field;
    std::string message;
};

/// Table I values plus the documented defaults for the fields Table I omits.
LinkScenario default_scenario();

/// Empty iff every type invariant holds. Violations are data, not failures.
std::vector<Violation> validate(const LinkScenario& s);

/// Non-fatal inconsistencies (e.g. wavelength != c/f, Table I as printed).
std::vector<Violation> validate_warnings(const LinkScenario& s);

/// Stability check needs a rate, so it lives apart from validate().
bool stable(const LinkScenario& s, double v_data);

// Key/value config file round-trips floating fields bit-exactly.
std::string to_config_text(const LinkScenario& s);
LinkScenario from_config_text(const std::string& text);
LinkScenario load_config(const std::string& path);
void save_config(const LinkScenario& s, const std::string& path);

/// Applies a "field=value" override; throws std::invalid_argument on
/// unknown field or unparsable value.
void set_field(LinkScenario& s, const std::string& assignment);

/// FNV-1a over the canonical config dump; stamps every result file.
std::uint64_t config_hash(const LinkScenario& s);

}  // namespace simlink
