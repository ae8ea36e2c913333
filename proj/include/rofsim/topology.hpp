#ifndef ROFSIM_TOPOLOGY_HPP
#define ROFSIM_TOPOLOGY_HPP

#include "rofsim/coherent.hpp"
#include "rofsim/filters.hpp"
#include "rofsim/ofdm.hpp"
#include "rofsim/optical.hpp"
#include "rofsim/planner.hpp"
#include "rofsim/signal.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rofsim {

/// Light path: ordered fiber spans and ROADM traversals. The baseline
/// mode is the bare transmitter-to-receiver reference (no coherent
/// neighbour, no WSS, no fiber).
struct Topology {
    struct Element {
        enum class Kind { Span, Roadm };
        Kind kind = Kind::Span;
        double span_km = 0.0;
    };

    std::string name;  // baseline | A | B | C | custom
    std::vector<Element> elements;

    int roadm_count() const;
    double total_length_km() const;
    bool is_baseline() const { return name == "baseline"; }

    /// baseline: nothing; A: 10 km; B: 10 | ROADM | 25 | 12;
    /// C: 10 | ROADM | 25 | ROADM | 25 | 12.
    static Topology preset(const std::string& name);
};

/// Plant defaults shared by every scenario; everything here is a repo
/// default, not a measured value.
struct PlantParams {
    MzmParams mzm;                       // drive_rms is the calibration knob
    double fiber_attenuation_db_km = 0.2;
    double fiber_dispersion_ps_nm_km = 17.0;
    double fiber_reference_wavelength_nm = 1550.0;
    double edfa_noise_figure_db = 5.0;
    PdParams pd;
    double coherent_launch_dbm = 3.0;
    double coupler_port_loss_db = 0.0;
    DemuxSettings wss;
    int roadm_order = 4;
    double roadm_insertion_loss_db = 0.0;
    double power_floor_dbm = -50.0;      // mid-pipeline sanity flag threshold
};

/// One fully specified end-to-end scenario.
struct ScenarioSetup {
    CoherentConfig coherent;
    OfdmConfig ofdm;          // n_symbols is derived from the record length
    ChannelPlan plan;
    Topology topology;
    PlantParams plant;
    std::size_t record_samples = 1u << 20;
    std::uint64_t seed = 1;
    bool independent_arof_payloads = false;
    bool capture_spectra = false;

    /// Smallest power-of-two GS/s rate covering twice the channel width.
    double window_rate() const;
    double window_duration() const;
};

struct PowerLedgerEntry {
    std::string stage;
    double power_dbm = 0.0;
    bool active_gain = false;  // true only for amplifier stages
};

struct ScenarioResult {
    EvmReport evm_low;
    EvmReport evm_high;
    QReport q_report;
    bool has_coherent = false;
    std::vector<PowerLedgerEntry> ledger;
    bool pass_3gpp_low = false;
    bool pass_3gpp_high = false;
    bool power_below_floor = false;
    double edfa_gain_db = 0.0;

    // Populated when capture_spectra is set.
    std::optional<SpectrumEstimate> psd_combined;
    std::optional<SpectrumEstimate> psd_port_low;
    std::optional<SpectrumEstimate> psd_port_high;
    std::optional<SpectrumEstimate> psd_port_coherent;
    SymbolGrid constellation_low;      // equalized symbols, low branch
    SymbolGrid constellation_low_ref;
};

ScenarioResult run_scenario(const ScenarioSetup& setup);

/// Assemble a ScenarioSetup for one of the two convergence presets
/// ("100g" / "400g"), a topology mode and an OFDM bandwidth.
ScenarioSetup make_setup(const std::string& coherent_preset, const std::string& topology_name,
                         double arof_bw_hz, const PlantParams& plant, std::uint64_t seed);

/// Default 17.3 dB (DP-QPSK) / 17.1 dB (DP-16-QAM) receiver-referred SNR.
double default_rx_snr_db(CoherentFormat format);

struct SweepCell {
    std::string preset;
    std::string topology;
    double arof_bw_hz = 0.0;
    std::vector<ScenarioResult> runs;   // one per seed
    double mean_evm_low_pct = 0.0;
    double mean_evm_high_pct = 0.0;
    double mean_q_db = 0.0;
    bool pass_3gpp = false;             // both branches, every seed
    std::string error;                  // per-cell failure, recorded not thrown
};

struct SweepRequest {
    std::vector<std::string> presets{"100g", "400g"};
    std::vector<std::string> topologies{"baseline", "A", "B", "C"};
    std::vector<double> bandwidths_hz{200e6, 400e6, 800e6, 1.6e9};
    PlantParams plant;
    std::uint64_t base_seed = 1;
    std::size_t seeds_per_cell = 1;
    unsigned jobs = 1;
};

std::vector<SweepCell> sweep(const SweepRequest& request);

struct CalibrationResult {
    double drive_rms_v = 0.0;
    double pd_thermal_a_rthz = 0.0;
    double floor_evm_pct = 0.0;      // zero-thermal baseline EVM
    double achieved_evm_pct = 0.0;
    double target_evm_pct = 0.0;
    int iterations = 0;
};

/// Anchor the baseline 200 MHz EVM to `target_pct` by fitting the PD
/// thermal density (and easing the drive level if distortion alone
/// already exceeds the target). One global fit; scenarios never refit.
CalibrationResult calibrate_baseline(const PlantParams& plant, double target_pct = 1.3,
                                     double tolerance_pct = 0.2, std::uint64_t seed = 1,
                                     std::size_t n_seeds = 3);

} // namespace rofsim

#endif
