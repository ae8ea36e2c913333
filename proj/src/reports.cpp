#include "rofsim/reports.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rofsim {

using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string feasibility_csv(const FeasibilityTable& table) {
    std::ostringstream out;
    out << "# schema=rofsim.feasibility.v1\n";
    out << "bw_ghz,feasible,free_per_side_ghz,span_ghz,slack_ghz,occupancy_ratio\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& a = table.rows[i];
        const double slack = a.free_per_side - a.span_per_arof;
        out << fmt(table.bandwidths[i] / 1e9) << ',' << (a.feasible ? 1 : 0) << ','
            << fmt(a.free_per_side / 1e9) << ',' << fmt(a.span_per_arof / 1e9) << ','
            << fmt(slack / 1e9) << ',' << fmt(a.occupancy_ratio) << '\n';
    }
    return out.str();
}

std::string sweep_matrix_csv(const std::vector<SweepCell>& cells) {
    std::ostringstream out;
    out << "# schema=rofsim.sweep_matrix.v1\n";
    out << "preset,topology,bw_mhz,evm_low_pct,evm_high_pct,q_db,pass_3gpp\n";
    for (const auto& c : cells) {
        out << c.preset << ',' << c.topology << ',' << fmt(c.arof_bw_hz / 1e6) << ',';
        if (!c.error.empty()) {
            out << "nan,nan,nan,0\n";
            continue;
        }
        out << fmt(c.mean_evm_low_pct) << ',' << fmt(c.mean_evm_high_pct) << ','
            << fmt(c.mean_q_db) << ',' << (c.pass_3gpp ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string psd_csv(const SpectrumEstimate& est) {
    std::ostringstream out;
    out << "# schema=rofsim.psd.v1\n";
    out << "freq_ghz,psd_dbm_per_hz\n";
    for (std::size_t i = 0; i < est.frequencies.size(); ++i)
        out << fmt(est.frequencies[i] / 1e9) << ',' << fmt(est.psd[i]) << '\n';
    return out.str();
}

std::string constellation_csv(const SymbolGrid& equalized, const SymbolGrid& reference) {
    if (equalized.size() != reference.size())
        throw std::invalid_argument("constellation: grid shapes differ");
    std::ostringstream out;
    out << "# schema=rofsim.constellation.v1\n";
    out << "i,q,ref_i,ref_q\n";
    for (std::size_t s = 0; s < equalized.size(); ++s)
        for (std::size_t k = 0; k < equalized[s].size(); ++k)
            out << fmt(equalized[s][k].real()) << ',' << fmt(equalized[s][k].imag()) << ','
                << fmt(reference[s][k].real()) << ',' << fmt(reference[s][k].imag()) << '\n';
    return out.str();
}

namespace {

json evm_to_json(const EvmReport& r) {
    return json{
        {"evm_rms_pct", r.evm_rms_pct},
        {"snr_equivalent_db", r.snr_equivalent_db},
        {"limit_pct", r.limit_pct},
        {"passes_limit", r.passes_limit},
        {"per_subcarrier_evm_pct", r.per_subcarrier_evm_pct},
    };
}

} // namespace

std::string scenario_result_json(const ScenarioResult& result, const ScenarioConfig& config) {
    json j;
    j["schema"] = "rofsim.result.v1";
    j["config_hash"] = hash_hex(fnv1a64(config.serialize()));
    j["scenario"] = {
        {"coherent_preset", config.coherent_preset},
        {"topology", config.topology},
        {"arof_bandwidth_mhz", config.arof_bandwidth_mhz},
        {"seed", config.seed},
    };
    j["evm_low"] = evm_to_json(result.evm_low);
    j["evm_high"] = evm_to_json(result.evm_high);
    j["pass_3gpp"] = {{"low", result.pass_3gpp_low}, {"high", result.pass_3gpp_high}};
    if (result.has_coherent) {
        j["coherent"] = {
            {"ber", result.q_report.ber},
            {"q_db", result.q_report.q_db},
            {"evm_pct", result.q_report.evm_pct},
            {"bit_errors", result.q_report.bit_errors},
            {"bits_counted", result.q_report.bits_counted},
            {"no_errors", result.q_report.no_errors},
        };
    }
    json ledger = json::array();
    for (const auto& e : result.ledger) {
        ledger.push_back({{"stage", e.stage},
                          {"power_dbm", std::isfinite(e.power_dbm) ? json(e.power_dbm)
                                                                   : json("below_floor")},
                          {"active_gain", e.active_gain}});
    }
    j["power_ledger"] = ledger;
    j["edfa_gain_db"] = result.edfa_gain_db;
    j["power_below_floor"] = result.power_below_floor;
    return j.dump(2) + "\n";
}

std::string calibration_json(const CalibrationResult& cal) {
    json j;
    j["schema"] = "rofsim.calibration.v1";
    j["mzm_drive_rms_v"] = cal.drive_rms_v;
    j["pd_thermal_noise_pa_per_rthz"] = cal.pd_thermal_a_rthz * 1e12;
    j["floor_evm_pct"] = cal.floor_evm_pct;
    j["achieved_evm_pct"] = cal.achieved_evm_pct;
    j["target_evm_pct"] = cal.target_evm_pct;
    j["iterations"] = cal.iterations;
    return j.dump(2) + "\n";
}

RunManifest::RunManifest(std::string command, const std::string& config_canonical,
                         std::uint64_t seed)
    : command_(std::move(command)),
      config_hash_(hash_hex(fnv1a64(config_canonical))),
      seed_(seed) {}

void RunManifest::record_file(const std::string& name, const std::string& contents) {
    files_.emplace_back(name, hash_hex(fnv1a64(contents)));
}

void RunManifest::record_cell(const std::string& label, const std::string& status) {
    cells_.emplace_back(label, status);
}

std::string RunManifest::to_json() const {
    json j;
    j["schema"] = "rofsim.manifest.v1";
    j["tool_version"] = kToolVersion;
    j["command"] = command_;
    j["config_hash"] = config_hash_;
    j["seed"] = seed_;
    j["wall_clock_s"] = wall_clock_s_;
    json files = json::array();
    for (const auto& [name, hash] : files_) files.push_back({{"name", name}, {"fnv1a64", hash}});
    j["files"] = files;
    if (!cells_.empty()) {
        json cells = json::array();
        for (const auto& [label, status] : cells_)
            cells.push_back({{"cell", label}, {"status", status}});
        j["cells"] = cells;
    }
    return j.dump(2) + "\n";
}

void write_file(const std::string& dir, const std::string& name, const std::string& contents,
                RunManifest* manifest) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (manifest) manifest->record_file(name, contents);
}

} // namespace rofsim
