// Command-line front end: plan | run | sweep | calibrate.

#include "rofsim/config.hpp"
#include "rofsim/reports.hpp"
#include "rofsim/topology.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace rofsim;
using nlohmann::json;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string preset;
    std::string calibration_path;
    std::uint64_t seed = 0;  // 0 = keep config value
    unsigned jobs = 1;
};

ScenarioConfig load_config(const CommonArgs& args) {
    ScenarioConfig cfg;
    if (!args.config_path.empty()) cfg = parse_config(args.config_path);
    if (!args.preset.empty()) {
        apply_preset_name(cfg, args.preset);
        cfg.validate();
    }
    if (args.seed != 0) cfg.seed = args.seed;
    if (!args.calibration_path.empty()) {
        std::ifstream in(args.calibration_path);
        if (!in) throw std::invalid_argument("cannot open calibration file '" +
                                             args.calibration_path + "'");
        json j = json::parse(in);
        cfg.mzm_drive_rms_v = j.at("mzm_drive_rms_v").get<double>();
        cfg.pd_thermal_noise_pa_per_rthz = j.at("pd_thermal_noise_pa_per_rthz").get<double>();
        cfg.validate();
    }
    return cfg;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
private:
    std::chrono::steady_clock::time_point start_;
};

int cmd_plan(const CommonArgs& args) {
    Stopwatch clock;
    ScenarioConfig cfg = load_config(args);
    RunManifest manifest("plan", cfg.serialize(), cfg.seed);

    ScenarioSetup setup = cfg.setup();
    ChannelPlan base = setup.plan;
    std::vector<double> bws;
    for (double mhz : cfg.sweep_bandwidths_mhz) bws.push_back(mhz * 1e6);
    FeasibilityTable table = sweep_feasibility(base, bws);

    write_file(args.out_dir, "plan.csv", feasibility_csv(table), &manifest);

    const double free_total = 2.0 * table.rows.front().free_per_side;
    std::cout << "channel " << base.channel_width / 1e9 << " GHz, coherent "
              << base.coherent_occupied / 1e9 << " GHz, free " << free_total / 1e9
              << " GHz total, max feasible ARoF bandwidth "
              << table.max_feasible_bw / 1e9 << " GHz\n";

    manifest.set_wall_clock_s(clock.seconds());
    write_file(args.out_dir, "manifest.json", manifest.to_json());
    return 0;
}

int cmd_run(const CommonArgs& args) {
    Stopwatch clock;
    ScenarioConfig cfg = load_config(args);
    RunManifest manifest("run", cfg.serialize(), cfg.seed);

    ScenarioSetup setup = cfg.setup();
    setup.capture_spectra = true;
    ScenarioResult result = run_scenario(setup);

    write_file(args.out_dir, "result.json", scenario_result_json(result, cfg), &manifest);
    write_file(args.out_dir, "config.resolved.json", cfg.serialize(), &manifest);
    if (result.psd_combined)
        write_file(args.out_dir, "psd_combined.csv", psd_csv(*result.psd_combined), &manifest);
    if (result.psd_port_low)
        write_file(args.out_dir, "psd_arof_low.csv", psd_csv(*result.psd_port_low), &manifest);
    if (result.psd_port_high)
        write_file(args.out_dir, "psd_arof_high.csv", psd_csv(*result.psd_port_high), &manifest);
    if (result.psd_port_coherent)
        write_file(args.out_dir, "psd_coherent.csv", psd_csv(*result.psd_port_coherent),
                   &manifest);
    if (!result.constellation_low.empty())
        write_file(args.out_dir, "constellation_arof_low.csv",
                   constellation_csv(result.constellation_low, result.constellation_low_ref),
                   &manifest);

    std::cout << "topology " << cfg.topology << ", " << cfg.arof_bandwidth_mhz
              << " MHz: EVM low " << result.evm_low.evm_rms_pct << " %, high "
              << result.evm_high.evm_rms_pct << " %";
    if (result.has_coherent) std::cout << ", Q " << result.q_report.q_db << " dB";
    std::cout << "\n";

    manifest.set_wall_clock_s(clock.seconds());
    write_file(args.out_dir, "manifest.json", manifest.to_json());
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    Stopwatch clock;
    ScenarioConfig cfg = load_config(args);
    RunManifest manifest("sweep", cfg.serialize(), cfg.seed);

    SweepRequest req = cfg.sweep_request(args.jobs);
    std::vector<SweepCell> cells = sweep(req);

    write_file(args.out_dir, "sweep_matrix.csv", sweep_matrix_csv(cells), &manifest);
    write_file(args.out_dir, "config.resolved.json", cfg.serialize(), &manifest);

    int failures = 0;
    for (const auto& c : cells) {
        std::ostringstream label;
        label << c.preset << "-" << c.topology << "-" << c.arof_bw_hz / 1e6 << "MHz";
        manifest.record_cell(label.str(), c.error.empty() ? "ok" : c.error);
        if (!c.error.empty()) ++failures;
    }
    std::cout << cells.size() << " cells, " << failures << " failed\n";

    manifest.set_wall_clock_s(clock.seconds());
    write_file(args.out_dir, "manifest.json", manifest.to_json());
    return 0;
}

int cmd_calibrate(const CommonArgs& args) {
    Stopwatch clock;
    ScenarioConfig cfg = load_config(args);
    RunManifest manifest("calibrate", cfg.serialize(), cfg.seed);

    CalibrationResult cal = calibrate_baseline(cfg.plant(), 1.3, 0.2, cfg.seed);
    write_file(args.out_dir, "calibration.json", calibration_json(cal), &manifest);

    std::cout << "baseline 200 MHz EVM " << cal.achieved_evm_pct << " % (target "
              << cal.target_evm_pct << " %), drive " << cal.drive_rms_v << " V, thermal "
              << cal.pd_thermal_a_rthz * 1e12 << " pA/rtHz\n";

    manifest.set_wall_clock_s(clock.seconds());
    write_file(args.out_dir, "manifest.json", manifest.to_json());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Converged ARoF / coherent ROADM-channel link simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* sub, bool with_jobs) {
        sub->add_option("--config", args.config_path, "scenario config JSON");
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--seed", args.seed, "override the config seed");
        sub->add_option("--preset", args.preset,
                        "shorthand like 100G-topoB-800MHz applied over the config");
        sub->add_option("--calibration", args.calibration_path,
                        "calibration.json from a calibrate run");
        if (with_jobs) sub->add_option("--jobs", args.jobs, "parallel sweep workers");
    };

    auto* plan = app.add_subcommand("plan", "spectrum feasibility table");
    auto* run = app.add_subcommand("run", "one end-to-end scenario");
    auto* swp = app.add_subcommand("sweep", "full topology x bandwidth x preset matrix");
    auto* cal = app.add_subcommand("calibrate", "fit plant noise to the baseline anchor");
    add_common(plan, false);
    add_common(run, false);
    add_common(swp, true);
    add_common(cal, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan->parsed()) return cmd_plan(args);
        if (run->parsed()) return cmd_run(args);
        if (swp->parsed()) return cmd_sweep(args);
        if (cal->parsed()) return cmd_calibrate(args);
    } catch (const std::exception& ex) {
        nlohmann::json err{{"error", ex.what()}};
        std::cout << err.dump() << "\n";
        return 1;
    }
    return 2;
}
