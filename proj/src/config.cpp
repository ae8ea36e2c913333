#include "rofsim/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rofsim {

using nlohmann::json;

namespace {

[[noreturn]] void bad_key(const std::string& section, const std::string& key,
                          const std::string& why) {
    throw std::invalid_argument("config: key '" + (section.empty() ? key : section + "." + key) +
                                "' " + why);
}

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            bad_key(section, it.key(), "is not a recognized setting");
}

double num(const json& obj, const std::string& section, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) bad_key(section, key, "must be a number");
    return v.get<double>();
}

bool flag(const json& obj, const std::string& section, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_boolean()) bad_key(section, key, "must be a boolean");
    return v.get<bool>();
}

std::string str(const json& obj, const std::string& section, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_string()) bad_key(section, key, "must be a string");
    return v.get<std::string>();
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

PlantParams ScenarioConfig::plant() const {
    PlantParams p;
    p.mzm.v_pi = mzm_v_pi_v;
    p.mzm.bias = mzm_bias_fraction;
    p.mzm.drive_rms = mzm_drive_rms_v;
    p.mzm.laser_power = arof_laser_power_dbm;
    p.fiber_attenuation_db_km = fiber_attenuation_db_per_km;
    p.fiber_dispersion_ps_nm_km = fiber_dispersion_ps_per_nm_km;
    p.fiber_reference_wavelength_nm = fiber_reference_wavelength_nm;
    p.edfa_noise_figure_db = edfa_noise_figure_db;
    p.pd.responsivity = pd_responsivity_a_per_w;
    p.pd.thermal_noise_density = pd_thermal_noise_pa_per_rthz * 1e-12;
    p.pd.include_shot_noise = pd_shot_noise;
    p.coherent_launch_dbm = coherent_launch_dbm;
    p.coupler_port_loss_db = coupler_port_loss_db;
    p.wss.order = wss_order;
    p.wss.insertion_loss_db = wss_insertion_loss_db;
    p.wss.guard_trim = wss_guard_trim_ghz * 1e9;
    p.roadm_order = roadm_order;
    p.roadm_insertion_loss_db = roadm_insertion_loss_db;
    p.power_floor_dbm = power_floor_dbm;
    return p;
}

ScenarioSetup ScenarioConfig::setup() const {
    ScenarioSetup s = make_setup(coherent_preset, topology, arof_bandwidth_mhz * 1e6,
                                 plant(), seed);
    if (coherent_rx_snr_db > 0.0) s.coherent.rx_snr_db = coherent_rx_snr_db;
    s.ofdm.if_freq = if_ghz * 1e9;
    s.ofdm.qam_order = qam_order;
    s.ofdm.fft_size = fft_size;
    s.ofdm.sc_spacing = subcarrier_spacing_mhz * 1e6;
    s.ofdm.cp_fraction = cp_fraction;
    s.ofdm.n_training_symbols = training_symbols;
    s.ofdm.output_rate = ofdm_output_rate_gs * 1e9;
    // n_data_sc tracks the requested bandwidth at the configured spacing.
    const double n_sc = arof_bandwidth_mhz * 1e6 / s.ofdm.sc_spacing;
    if (std::abs(n_sc - std::round(n_sc)) > 1e-6)
        throw std::invalid_argument(
            "config: arof_bandwidth_mhz is not a multiple of subcarrier_spacing_mhz");
    s.ofdm.n_data_sc = static_cast<std::size_t>(std::llround(n_sc));
    s.plan.if_freq = s.ofdm.if_freq;
    s.plan.guard = guard_ghz * 1e9;
    s.record_samples = record_samples;
    s.independent_arof_payloads = independent_arof_payloads;
    return s;
}

SweepRequest ScenarioConfig::sweep_request(unsigned jobs) const {
    SweepRequest req;
    req.presets = sweep_presets;
    req.topologies = sweep_topologies;
    req.bandwidths_hz.clear();
    for (double mhz : sweep_bandwidths_mhz) req.bandwidths_hz.push_back(mhz * 1e6);
    req.plant = plant();
    req.base_seed = seed;
    req.seeds_per_cell = seeds_per_cell;
    req.jobs = jobs;
    return req;
}

void ScenarioConfig::validate() const {
    if (coherent_preset != "100g" && coherent_preset != "400g")
        throw std::invalid_argument("config: coherent_preset must be '100g' or '400g'");
    // Builds the full object graph, which runs every domain invariant
    // (channel fit, Nyquist, bias range, ...).
    ScenarioSetup s = setup();
    s.coherent.validate();
    s.plan.validate();
    s.ofdm.validate();
    s.plant.mzm.validate();
    s.plant.pd.validate();
    if (!s.topology.is_baseline()) {
        Allocation a = allocate(s.plan);
        if (!a.feasible)
            throw std::invalid_argument("config: allocation infeasible for " +
                                        std::to_string(arof_bandwidth_mhz) + " MHz (deficit " +
                                        std::to_string(a.margin_deficit / 1e9) + " GHz)");
    }
    for (const auto& t : sweep_topologies) Topology::preset(t);
    for (const auto& p : sweep_presets)
        if (p != "100g" && p != "400g")
            throw std::invalid_argument("config: sweep preset must be '100g' or '400g'");
    if (record_samples < 4096)
        throw std::invalid_argument("config: record_samples unreasonably small");
    if (seeds_per_cell == 0)
        throw std::invalid_argument("config: seeds_per_cell must be >= 1");
    if (!(evm_limit_pct > 0.0))
        throw std::invalid_argument("config: evm_limit_pct must be > 0");
}

namespace {

json to_json(const ScenarioConfig& c) {
    json j;
    j["schema"] = "rofsim.scenario.v1";
    j["scenario"] = {
        {"coherent_preset", c.coherent_preset},
        {"topology", c.topology},
        {"arof_bandwidth_mhz", c.arof_bandwidth_mhz},
    };
    j["coherent"] = {
        {"launch_dbm", c.coherent_launch_dbm},
        {"rx_snr_db", c.coherent_rx_snr_db},
    };
    j["ofdm"] = {
        {"if_ghz", c.if_ghz},
        {"qam_order", c.qam_order},
        {"fft_size", c.fft_size},
        {"subcarrier_spacing_mhz", c.subcarrier_spacing_mhz},
        {"cp_fraction", c.cp_fraction},
        {"training_symbols", c.training_symbols},
        {"output_rate_gs", c.ofdm_output_rate_gs},
    };
    j["plant"] = {
        {"mzm_v_pi_v", c.mzm_v_pi_v},
        {"mzm_bias_fraction", c.mzm_bias_fraction},
        {"mzm_drive_rms_v", c.mzm_drive_rms_v},
        {"arof_laser_power_dbm", c.arof_laser_power_dbm},
        {"fiber_attenuation_db_per_km", c.fiber_attenuation_db_per_km},
        {"fiber_dispersion_ps_per_nm_km", c.fiber_dispersion_ps_per_nm_km},
        {"fiber_reference_wavelength_nm", c.fiber_reference_wavelength_nm},
        {"edfa_noise_figure_db", c.edfa_noise_figure_db},
        {"pd_responsivity_a_per_w", c.pd_responsivity_a_per_w},
        {"pd_thermal_noise_pa_per_rthz", c.pd_thermal_noise_pa_per_rthz},
        {"pd_shot_noise", c.pd_shot_noise},
        {"coupler_port_loss_db", c.coupler_port_loss_db},
        {"power_floor_dbm", c.power_floor_dbm},
    };
    j["wss"] = {
        {"order", c.wss_order},
        {"insertion_loss_db", c.wss_insertion_loss_db},
        {"guard_trim_ghz", c.wss_guard_trim_ghz},
    };
    j["roadm"] = {
        {"order", c.roadm_order},
        {"insertion_loss_db", c.roadm_insertion_loss_db},
    };
    j["allocation"] = {
        {"guard_ghz", c.guard_ghz},
    };
    j["evm_limit_pct"] = c.evm_limit_pct;
    j["independent_arof_payloads"] = c.independent_arof_payloads;
    j["record_samples"] = c.record_samples;
    j["seed"] = c.seed;
    j["seeds_per_cell"] = c.seeds_per_cell;
    j["sweep"] = {
        {"presets", c.sweep_presets},
        {"topologies", c.sweep_topologies},
        {"bandwidths_mhz", c.sweep_bandwidths_mhz},
    };
    return j;
}

} // namespace

std::string ScenarioConfig::serialize() const {
    return to_json(*this).dump(2) + "\n";
}

void apply_preset_name(ScenarioConfig& cfg, const std::string& preset) {
    // Grammar: <100G|400G>[-topo<baseline|A|B|C>][-<N>MHz|<X>GHz]
    std::stringstream ss(preset);
    std::string token;
    bool have_coh = false;
    while (std::getline(ss, token, '-')) {
        const std::string t = lower(token);
        if (t == "100g" || t == "400g") {
            cfg.coherent_preset = t;
            have_coh = true;
        } else if (t.rfind("topo", 0) == 0) {
            std::string topo = token.substr(4);
            if (lower(topo) == "baseline") topo = "baseline";
            cfg.topology = topo;
            Topology::preset(cfg.topology);
        } else if (t.size() > 3 && t.compare(t.size() - 3, 3, "mhz") == 0) {
            cfg.arof_bandwidth_mhz = std::stod(t.substr(0, t.size() - 3));
        } else if (t.size() > 3 && t.compare(t.size() - 3, 3, "ghz") == 0) {
            cfg.arof_bandwidth_mhz = std::stod(t.substr(0, t.size() - 3)) * 1e3;
        } else {
            throw std::invalid_argument("config: unrecognized preset token '" + token + "'");
        }
    }
    if (!have_coh)
        throw std::invalid_argument("config: preset must name a coherent service (100G/400G)");
}

ScenarioConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    ScenarioConfig c;
    std::set<std::string> seen;  // resolved keys the user actually set
    auto mark = [&](const std::string& section, const std::string& key) {
        seen.insert(section.empty() ? key : section + "." + key);
    };

    reject_unknown(j, "", {"schema", "preset", "scenario", "coherent", "ofdm", "plant", "wss",
                           "roadm", "allocation", "evm_limit_pct", "independent_arof_payloads",
                           "record_samples", "seed", "seeds_per_cell", "sweep"});

    if (j.contains("schema")) {
        const auto s = str(j, "", "schema");
        if (s != "rofsim.scenario.v1")
            throw std::invalid_argument("config: unsupported schema '" + s + "'");
    }
    if (j.contains("preset")) {
        apply_preset_name(c, str(j, "", "preset"));
        mark("", "preset");
    }

    if (j.contains("scenario")) {
        const auto& s = j["scenario"];
        reject_unknown(s, "scenario", {"coherent_preset", "topology", "arof_bandwidth_mhz"});
        if (s.contains("coherent_preset")) { c.coherent_preset = lower(str(s, "scenario", "coherent_preset")); mark("scenario", "coherent_preset"); }
        if (s.contains("topology")) { c.topology = str(s, "scenario", "topology"); mark("scenario", "topology"); }
        if (s.contains("arof_bandwidth_mhz")) { c.arof_bandwidth_mhz = num(s, "scenario", "arof_bandwidth_mhz"); mark("scenario", "arof_bandwidth_mhz"); }
    }

    if (j.contains("coherent")) {
        const auto& s = j["coherent"];
        reject_unknown(s, "coherent", {"launch_dbm", "rx_snr_db"});
        if (s.contains("launch_dbm")) { c.coherent_launch_dbm = num(s, "coherent", "launch_dbm"); mark("coherent", "launch_dbm"); }
        if (s.contains("rx_snr_db")) { c.coherent_rx_snr_db = num(s, "coherent", "rx_snr_db"); mark("coherent", "rx_snr_db"); }
    }

    if (j.contains("ofdm")) {
        const auto& s = j["ofdm"];
        reject_unknown(s, "ofdm", {"if_ghz", "qam_order", "fft_size", "subcarrier_spacing_mhz",
                                   "cp_fraction", "training_symbols", "output_rate_gs"});
        if (s.contains("if_ghz")) { c.if_ghz = num(s, "ofdm", "if_ghz"); mark("ofdm", "if_ghz"); }
        if (s.contains("qam_order")) { c.qam_order = static_cast<unsigned>(num(s, "ofdm", "qam_order")); mark("ofdm", "qam_order"); }
        if (s.contains("fft_size")) { c.fft_size = static_cast<std::size_t>(num(s, "ofdm", "fft_size")); mark("ofdm", "fft_size"); }
        if (s.contains("subcarrier_spacing_mhz")) { c.subcarrier_spacing_mhz = num(s, "ofdm", "subcarrier_spacing_mhz"); mark("ofdm", "subcarrier_spacing_mhz"); }
        if (s.contains("cp_fraction")) { c.cp_fraction = num(s, "ofdm", "cp_fraction"); mark("ofdm", "cp_fraction"); }
        if (s.contains("training_symbols")) { c.training_symbols = static_cast<std::size_t>(num(s, "ofdm", "training_symbols")); mark("ofdm", "training_symbols"); }
        if (s.contains("output_rate_gs")) { c.ofdm_output_rate_gs = num(s, "ofdm", "output_rate_gs"); mark("ofdm", "output_rate_gs"); }
    }

    if (j.contains("plant")) {
        const auto& s = j["plant"];
        reject_unknown(s, "plant",
                       {"mzm_v_pi_v", "mzm_bias_fraction", "mzm_drive_rms_v",
                        "arof_laser_power_dbm", "fiber_attenuation_db_per_km",
                        "fiber_dispersion_ps_per_nm_km", "fiber_reference_wavelength_nm",
                        "edfa_noise_figure_db", "pd_responsivity_a_per_w",
                        "pd_thermal_noise_pa_per_rthz", "pd_shot_noise",
                        "coupler_port_loss_db", "power_floor_dbm"});
        if (s.contains("mzm_v_pi_v")) { c.mzm_v_pi_v = num(s, "plant", "mzm_v_pi_v"); mark("plant", "mzm_v_pi_v"); }
        if (s.contains("mzm_bias_fraction")) { c.mzm_bias_fraction = num(s, "plant", "mzm_bias_fraction"); mark("plant", "mzm_bias_fraction"); }
        if (s.contains("mzm_drive_rms_v")) { c.mzm_drive_rms_v = num(s, "plant", "mzm_drive_rms_v"); mark("plant", "mzm_drive_rms_v"); }
        if (s.contains("arof_laser_power_dbm")) { c.arof_laser_power_dbm = num(s, "plant", "arof_laser_power_dbm"); mark("plant", "arof_laser_power_dbm"); }
        if (s.contains("fiber_attenuation_db_per_km")) { c.fiber_attenuation_db_per_km = num(s, "plant", "fiber_attenuation_db_per_km"); mark("plant", "fiber_attenuation_db_per_km"); }
        if (s.contains("fiber_dispersion_ps_per_nm_km")) { c.fiber_dispersion_ps_per_nm_km = num(s, "plant", "fiber_dispersion_ps_per_nm_km"); mark("plant", "fiber_dispersion_ps_per_nm_km"); }
        if (s.contains("fiber_reference_wavelength_nm")) { c.fiber_reference_wavelength_nm = num(s, "plant", "fiber_reference_wavelength_nm"); mark("plant", "fiber_reference_wavelength_nm"); }
        if (s.contains("edfa_noise_figure_db")) { c.edfa_noise_figure_db = num(s, "plant", "edfa_noise_figure_db"); mark("plant", "edfa_noise_figure_db"); }
        if (s.contains("pd_responsivity_a_per_w")) { c.pd_responsivity_a_per_w = num(s, "plant", "pd_responsivity_a_per_w"); mark("plant", "pd_responsivity_a_per_w"); }
        if (s.contains("pd_thermal_noise_pa_per_rthz")) { c.pd_thermal_noise_pa_per_rthz = num(s, "plant", "pd_thermal_noise_pa_per_rthz"); mark("plant", "pd_thermal_noise_pa_per_rthz"); }
        if (s.contains("pd_shot_noise")) { c.pd_shot_noise = flag(s, "plant", "pd_shot_noise"); mark("plant", "pd_shot_noise"); }
        if (s.contains("coupler_port_loss_db")) { c.coupler_port_loss_db = num(s, "plant", "coupler_port_loss_db"); mark("plant", "coupler_port_loss_db"); }
        if (s.contains("power_floor_dbm")) { c.power_floor_dbm = num(s, "plant", "power_floor_dbm"); mark("plant", "power_floor_dbm"); }
    }

    if (j.contains("wss")) {
        const auto& s = j["wss"];
        reject_unknown(s, "wss", {"order", "insertion_loss_db", "guard_trim_ghz"});
        if (s.contains("order")) { c.wss_order = static_cast<int>(num(s, "wss", "order")); mark("wss", "order"); }
        if (s.contains("insertion_loss_db")) { c.wss_insertion_loss_db = num(s, "wss", "insertion_loss_db"); mark("wss", "insertion_loss_db"); }
        if (s.contains("guard_trim_ghz")) { c.wss_guard_trim_ghz = num(s, "wss", "guard_trim_ghz"); mark("wss", "guard_trim_ghz"); }
    }

    if (j.contains("roadm")) {
        const auto& s = j["roadm"];
        reject_unknown(s, "roadm", {"order", "insertion_loss_db"});
        if (s.contains("order")) { c.roadm_order = static_cast<int>(num(s, "roadm", "order")); mark("roadm", "order"); }
        if (s.contains("insertion_loss_db")) { c.roadm_insertion_loss_db = num(s, "roadm", "insertion_loss_db"); mark("roadm", "insertion_loss_db"); }
    }

    if (j.contains("allocation")) {
        const auto& s = j["allocation"];
        reject_unknown(s, "allocation", {"guard_ghz"});
        if (s.contains("guard_ghz")) { c.guard_ghz = num(s, "allocation", "guard_ghz"); mark("allocation", "guard_ghz"); }
    }

    if (j.contains("evm_limit_pct")) { c.evm_limit_pct = num(j, "", "evm_limit_pct"); mark("", "evm_limit_pct"); }
    if (j.contains("independent_arof_payloads")) { c.independent_arof_payloads = flag(j, "", "independent_arof_payloads"); mark("", "independent_arof_payloads"); }
    if (j.contains("record_samples")) { c.record_samples = static_cast<std::size_t>(num(j, "", "record_samples")); mark("", "record_samples"); }
    if (j.contains("seed")) { c.seed = static_cast<std::uint64_t>(num(j, "", "seed")); mark("", "seed"); }
    if (j.contains("seeds_per_cell")) { c.seeds_per_cell = static_cast<std::size_t>(num(j, "", "seeds_per_cell")); mark("", "seeds_per_cell"); }

    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        reject_unknown(s, "sweep", {"presets", "topologies", "bandwidths_mhz"});
        if (s.contains("presets")) {
            c.sweep_presets.clear();
            for (const auto& v : s["presets"]) c.sweep_presets.push_back(lower(v.get<std::string>()));
            mark("sweep", "presets");
        }
        if (s.contains("topologies")) {
            c.sweep_topologies = s["topologies"].get<std::vector<std::string>>();
            mark("sweep", "topologies");
        }
        if (s.contains("bandwidths_mhz")) {
            c.sweep_bandwidths_mhz = s["bandwidths_mhz"].get<std::vector<double>>();
            mark("sweep", "bandwidths_mhz");
        }
    }

    // Provenance: everything resolvable that the user did not set.
    const json resolved = to_json(c);
    for (auto sec = resolved.begin(); sec != resolved.end(); ++sec) {
        if (!sec.value().is_object()) {
            if (!seen.count(sec.key()) && sec.key() != "schema") c.defaulted_keys.push_back(sec.key());
            continue;
        }
        for (auto it = sec.value().begin(); it != sec.value().end(); ++it) {
            const std::string full = sec.key() + "." + it.key();
            if (!seen.count(full)) c.defaulted_keys.push_back(full);
        }
    }
    std::sort(c.defaulted_keys.begin(), c.defaulted_keys.end());

    c.validate();
    return c;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace rofsim
