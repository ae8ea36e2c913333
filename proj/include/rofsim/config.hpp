#ifndef ROFSIM_CONFIG_HPP
#define ROFSIM_CONFIG_HPP

#include "rofsim/topology.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rofsim {

/// Declarative scenario description. Every physical quantity carries an
/// explicit unit in its key name; unknown keys are rejected. Values not
/// present in the file take the documented defaults and are tracked as
/// such in `defaulted_keys`.
struct ScenarioConfig {
    // scenario selection
    std::string coherent_preset = "100g";     // 100g | 400g
    std::string topology = "B";               // baseline | A | B | C
    double arof_bandwidth_mhz = 800.0;

    // overrides
    double coherent_launch_dbm = 3.0;
    double coherent_rx_snr_db = 0.0;          // 0 = per-format default
    double if_ghz = 2.0;
    unsigned qam_order = 64;
    std::size_t fft_size = 2048;
    double subcarrier_spacing_mhz = 1.5625;
    double cp_fraction = 1.0 / 16.0;
    std::size_t training_symbols = 4;
    double ofdm_output_rate_gs = 8.0;
    double guard_ghz = 0.0;
    double evm_limit_pct = 8.0;
    bool independent_arof_payloads = false;

    // plant
    double mzm_v_pi_v = 3.5;
    double mzm_bias_fraction = 0.5;
    double mzm_drive_rms_v = 0.28;
    double arof_laser_power_dbm = 10.0;
    double fiber_attenuation_db_per_km = 0.2;
    double fiber_dispersion_ps_per_nm_km = 17.0;
    double fiber_reference_wavelength_nm = 1550.0;
    double edfa_noise_figure_db = 5.0;
    double pd_responsivity_a_per_w = 0.8;
    double pd_thermal_noise_pa_per_rthz = 860.0;
    bool pd_shot_noise = true;
    double coupler_port_loss_db = 0.0;
    int wss_order = 4;
    double wss_insertion_loss_db = 2.0;
    double wss_guard_trim_ghz = 0.0;
    int roadm_order = 4;
    double roadm_insertion_loss_db = 0.0;
    double power_floor_dbm = -50.0;

    // execution
    std::size_t record_samples = 1u << 20;
    std::uint64_t seed = 1;
    std::size_t seeds_per_cell = 1;

    // sweep axes (sweep subcommand only)
    std::vector<std::string> sweep_presets{"100g", "400g"};
    std::vector<std::string> sweep_topologies{"baseline", "A", "B", "C"};
    std::vector<double> sweep_bandwidths_mhz{200.0, 400.0, 800.0, 1600.0};

    std::vector<std::string> defaulted_keys;  // provenance: keys not set by the user

    PlantParams plant() const;
    ScenarioSetup setup() const;
    SweepRequest sweep_request(unsigned jobs) const;

    /// Cross-field invariants (e.g. coherent wider than its channel).
    void validate() const;

    /// Canonical JSON of the fully resolved config (defaults applied,
    /// keys sorted). parse(serialize(x)) == x.
    std::string serialize() const;
};

/// Load and resolve a config file. Schema violations name the offending
/// key; contradictory settings fail validation.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& json_text);

/// Expand a shorthand preset name like "100G-topoB-800MHz" onto a config.
void apply_preset_name(ScenarioConfig& cfg, const std::string& preset);

} // namespace rofsim

#endif
