#ifndef ROFSIM_REPORTS_HPP
#define ROFSIM_REPORTS_HPP

#include "rofsim/config.hpp"
#include "rofsim/topology.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rofsim {

/// FNV-1a 64-bit content hash; stable across runs and platforms.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

/// Feasibility table: bw_ghz, feasible, free_per_side_ghz, span_ghz,
/// slack_ghz, occupancy_ratio.
std::string feasibility_csv(const FeasibilityTable& table);

/// Sweep matrix: preset, topology, bw_mhz, evm_low_pct, evm_high_pct,
/// q_db, pass_3gpp.
std::string sweep_matrix_csv(const std::vector<SweepCell>& cells);

/// PSD dump: freq_ghz, psd_dbm_per_hz.
std::string psd_csv(const SpectrumEstimate& est);

/// Constellation dump: i, q, ref_i, ref_q.
std::string constellation_csv(const SymbolGrid& equalized, const SymbolGrid& reference);

/// Scenario result as deterministic JSON (no timestamps).
std::string scenario_result_json(const ScenarioResult& result, const ScenarioConfig& config);

std::string calibration_json(const CalibrationResult& cal);

/// Run manifest: config hash, seeds, tool version, wall clock and a
/// checksum for every emitted file.
class RunManifest {
public:
    RunManifest(std::string command, const std::string& config_canonical,
                std::uint64_t seed);

    void record_file(const std::string& name, const std::string& contents);
    void record_cell(const std::string& label, const std::string& status);
    void set_wall_clock_s(double seconds) { wall_clock_s_ = seconds; }

    std::string to_json() const;

private:
    std::string command_;
    std::string config_hash_;
    std::uint64_t seed_;
    double wall_clock_s_ = 0.0;
    std::vector<std::pair<std::string, std::string>> files_;  // name, hash
    std::vector<std::pair<std::string, std::string>> cells_;  // label, status
};

/// Write, and register in the manifest when one is given.
void write_file(const std::string& dir, const std::string& name, const std::string& contents,
                RunManifest* manifest = nullptr);

} // namespace rofsim

#endif
