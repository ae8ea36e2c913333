#include "rofsim/topology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace rofsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double dbm(double power_mw) {
    return power_mw > 0.0 ? 10.0 * std::log10(power_mw)
                          : -std::numeric_limits<double>::infinity();
}

FiberParams make_fiber(double length_km, const PlantParams& plant) {
    FiberParams f;
    f.length = length_km;
    f.attenuation = plant.fiber_attenuation_db_km;
    f.dispersion = plant.fiber_dispersion_ps_nm_km;
    f.reference_wavelength = plant.fiber_reference_wavelength_nm;
    return f;
}

double beta2_times_length(const FiberParams& f) {
    const double lambda = f.reference_wavelength * 1e-9;
    const double d_si = f.dispersion * 1e-6;
    const double beta2 = -d_si * lambda * lambda / (2.0 * kPi * 2.99792458e8);
    return beta2 * f.length * 1e3;
}

SpectrumEstimate psd_dual(const DualPolSignal& sig, std::size_t seg, double overlap) {
    auto px = estimate_psd(sig.x, seg, overlap);
    const auto py = estimate_psd(sig.y, seg, overlap);
    for (std::size_t i = 0; i < px.psd.size(); ++i) {
        const double lin = std::pow(10.0, px.psd[i] / 10.0) + std::pow(10.0, py.psd[i] / 10.0);
        px.psd[i] = 10.0 * std::log10(lin);
    }
    return px;
}

} // namespace

int Topology::roadm_count() const {
    int n = 0;
    for (const auto& e : elements) n += e.kind == Element::Kind::Roadm ? 1 : 0;
    return n;
}

double Topology::total_length_km() const {
    double km = 0.0;
    for (const auto& e : elements) km += e.kind == Element::Kind::Span ? e.span_km : 0.0;
    return km;
}

Topology Topology::preset(const std::string& name) {
    Topology t;
    t.name = name;
    auto span = [](double km) { return Element{Element::Kind::Span, km}; };
    auto roadm = []() { return Element{Element::Kind::Roadm, 0.0}; };
    if (name == "baseline") {
        // no fiber, no ROADM, no WSS
    } else if (name == "A") {
        t.elements = {span(10.0)};
    } else if (name == "B") {
        t.elements = {span(10.0), roadm(), span(25.0), span(12.0)};
    } else if (name == "C") {
        t.elements = {span(10.0), roadm(), span(25.0), roadm(), span(25.0), span(12.0)};
    } else {
        throw std::invalid_argument("topology: unknown preset '" + name + "'");
    }
    return t;
}

double ScenarioSetup::window_rate() const {
    const double target_gs = 2.0 * plan.channel_width / 1e9;
    double rate_gs = 1.0;
    while (rate_gs < target_gs) rate_gs *= 2.0;
    return rate_gs * 1e9;
}

double ScenarioSetup::window_duration() const {
    return static_cast<double>(record_samples) / window_rate();
}

double default_rx_snr_db(CoherentFormat format) {
    return format == CoherentFormat::DpQpsk ? 17.3 : 17.1;
}

ScenarioSetup make_setup(const std::string& coherent_preset, const std::string& topology_name,
                         double arof_bw_hz, const PlantParams& plant, std::uint64_t seed) {
    ScenarioSetup s;
    if (coherent_preset == "100g") {
        s.coherent = CoherentConfig::preset_100g();
    } else if (coherent_preset == "400g") {
        s.coherent = CoherentConfig::preset_400g();
    } else {
        throw std::invalid_argument("setup: unknown coherent preset '" + coherent_preset + "'");
    }
    s.coherent.rx_snr_db = default_rx_snr_db(s.coherent.format);

    s.ofdm.sc_spacing = 1.5625e6;
    const double n_sc = arof_bw_hz / s.ofdm.sc_spacing;
    if (std::abs(n_sc - std::round(n_sc)) > 1e-6)
        throw std::invalid_argument("setup: bandwidth not a multiple of the subcarrier spacing");
    s.ofdm.n_data_sc = static_cast<std::size_t>(std::llround(n_sc));

    s.plan.channel_width = s.coherent.channel_width;
    s.plan.coherent_occupied = s.coherent.occupied_width;
    s.plan.if_freq = s.ofdm.if_freq;
    s.plan.arof_bw = arof_bw_hz;

    s.topology = Topology::preset(topology_name);
    s.plant = plant;
    s.seed = seed;
    return s;
}

ScenarioResult run_scenario(const ScenarioSetup& setup) {
    ScenarioResult result;

    const double window_rate = setup.window_rate();
    const double duration = setup.window_duration();

    // Fill the record with OFDM symbols: everything after the training
    // block is EVM statistics.
    OfdmConfig ofdm = setup.ofdm;
    const auto total_syms = static_cast<std::size_t>(
        std::floor(duration / ofdm.symbol_duration() + 1e-9));
    if (total_syms <= ofdm.n_training_symbols)
        throw std::invalid_argument("scenario: record too short for the OFDM frame");
    ofdm.n_symbols = total_syms - ofdm.n_training_symbols;
    ofdm.seed = derive_seed(setup.seed, 0xa1);

    Allocation alloc = allocate(setup.plan);
    if (!setup.topology.is_baseline() && !alloc.feasible)
        throw std::invalid_argument("scenario: allocation infeasible (deficit " +
                                    std::to_string(alloc.margin_deficit / 1e9) + " GHz)");

    Rng rng_ase(derive_seed(setup.seed, 0xe1));
    Rng rng_pd_low(derive_seed(setup.seed, 0xd0));
    Rng rng_pd_high(derive_seed(setup.seed, 0xd1));
    Rng rng_coh(derive_seed(setup.seed, 0xc2));

    // ARoF electrical drives. The second branch reuses the payload unless
    // independent payloads are requested.
    OfdmFrame frame_low = OfdmModem::modulate(ofdm);
    OfdmConfig ofdm_high = ofdm;
    if (setup.independent_arof_payloads) ofdm_high.seed = derive_seed(setup.seed, 0xa2);
    OfdmFrame frame_high = setup.independent_arof_payloads ? OfdmModem::modulate(ofdm_high)
                                                           : frame_low;

    const auto pad_len = static_cast<std::size_t>(
        std::llround(duration * ofdm.output_rate));
    auto make_drive = [&](const OfdmFrame& frame) {
        SampledSignal d = frame.tx_waveform;  // unit RMS
        const double scale = setup.plant.mzm.drive_rms;
        for (auto& x : d.samples) x *= scale;
        d.samples.resize(pad_len, {0.0, 0.0});
        return resample(d, window_rate);
    };

    auto ledger_add = [&](const std::string& stage, double power_mw, bool active = false) {
        result.ledger.push_back({stage, dbm(power_mw), active});
        if (dbm(power_mw) < setup.plant.power_floor_dbm) result.power_below_floor = true;
    };

    const bool baseline = setup.topology.is_baseline();

    if (baseline) {
        // Transmitter straight into the detector: the reference the EVM
        // degradations are measured against.
        SampledSignal field = mzm_modulate(make_drive(frame_low), setup.plant.mzm);
        ledger_add("mzm_out", field.power_mw());
        SampledSignal pd = photodetect(field, setup.plant.pd, rng_pd_low);
        SampledSignal rx = resample(pd, ofdm.output_rate, 1.0);
        auto grid = OfdmModem::demodulate(rx, frame_low);
        result.evm_low = OfdmModem::compute_evm(grid, frame_low.reference_symbols);
        result.evm_high = result.evm_low;
        result.pass_3gpp_low = result.evm_low.passes_limit;
        result.pass_3gpp_high = result.pass_3gpp_low;
        result.has_coherent = false;
        if (setup.capture_spectra) {
            result.psd_combined = estimate_psd(field, 8192, 0.5);
            result.constellation_low = grid;
            result.constellation_low_ref = frame_low.reference_symbols;
        }
        return result;
    }

    // Optical launch: two MZM branches placed on either side of the
    // coherent carrier, then an ideal coupler.
    SampledSignal arof_low = frequency_shift(
        mzm_modulate(make_drive(frame_low), setup.plant.mzm), alloc.carrier_offset_low);
    SampledSignal arof_high = frequency_shift(
        mzm_modulate(make_drive(frame_high), setup.plant.mzm), alloc.carrier_offset_high);

    CoherentConfig coh_cfg = setup.coherent;
    coh_cfg.seed = derive_seed(setup.seed, 0xc3);
    CoherentFrame coh = generate_coherent(coh_cfg, window_rate, setup.record_samples);
    const double coh_scale = std::sqrt(std::pow(10.0, setup.plant.coherent_launch_dbm / 10.0));
    for (auto& v : coh.field.x.samples) v *= coh_scale;
    for (auto& v : coh.field.y.samples) v *= coh_scale;

    ledger_add("arof_low_launch", arof_low.power_mw());
    ledger_add("arof_high_launch", arof_high.power_mw());
    ledger_add("coherent_launch", coh.field.power_mw());

    const double port_loss = setup.plant.coupler_port_loss_db;
    DualPolSignal link;
    link.x = combine({arof_low, arof_high, coh.field.x}, {port_loss, port_loss, port_loss});
    link.y = coh.field.y;
    if (port_loss != 0.0) {
        const double g = std::pow(10.0, -port_loss / 20.0);
        for (auto& v : link.y.samples) v *= g;
    }
    coh.field.x.samples.clear();
    coh.field.y.samples.clear();
    arof_low.samples.clear();
    arof_high.samples.clear();

    const double launch_total_mw = link.power_mw();
    ledger_add("combined", launch_total_mw);
    if (setup.capture_spectra) result.psd_combined = psd_dual(link, 8192, 0.5);

    // Light path.
    FilterProfile roadm_profile;
    roadm_profile.center = 0.0;
    roadm_profile.bw_3db = setup.plan.channel_width;
    roadm_profile.order = setup.plant.roadm_order;
    roadm_profile.insertion_loss = setup.plant.roadm_insertion_loss_db;

    double beta2_total = 0.0;
    int span_idx = 0;
    int roadm_idx = 0;
    for (const auto& elem : setup.topology.elements) {
        if (elem.kind == Topology::Element::Kind::Span) {
            const FiberParams f = make_fiber(elem.span_km, setup.plant);
            link.x = fiber_propagate(link.x, f);
            link.y = fiber_propagate(link.y, f);
            beta2_total += beta2_times_length(f);
            ++span_idx;
            ledger_add("span" + std::to_string(span_idx) + "_out", link.power_mw());
        } else {
            link.x = apply_filter(link.x, roadm_profile);
            link.y = apply_filter(link.y, roadm_profile);
            ++roadm_idx;
            ledger_add("roadm" + std::to_string(roadm_idx) + "_out", link.power_mw());
        }
    }

    // Receive-side EDFA restores the composite to its launch level.
    EdfaParams edfa;
    edfa.noise_figure = setup.plant.edfa_noise_figure_db;
    edfa.gain = std::max(0.0, dbm(launch_total_mw) - dbm(link.power_mw()));
    result.edfa_gain_db = edfa.gain;
    link.x = edfa_amplify(link.x, edfa, rng_ase);
    link.y = edfa_amplify(link.y, edfa, rng_ase);
    ledger_add("edfa_out", link.power_mw(), /*active=*/true);

    // WSS demux to the three receivers.
    DemuxPlan demux = build_demux(alloc, coh_cfg.occupied_width, setup.plant.wss);
    auto port_field = [&](const std::string& name) {
        DualPolSignal out;
        out.x = apply_filter(link.x, demux.port(name));
        out.y = apply_filter(link.y, demux.port(name));
        return out;
    };

    DualPolSignal port_low = port_field("arof_low");
    DualPolSignal port_high = port_field("arof_high");
    DualPolSignal port_coh = port_field("coherent");
    ledger_add("wss_arof_low_out", port_low.power_mw());
    ledger_add("wss_arof_high_out", port_high.power_mw());
    ledger_add("wss_coherent_out", port_coh.power_mw());
    link.x.samples.clear();
    link.y.samples.clear();

    if (setup.capture_spectra) {
        result.psd_port_low = psd_dual(port_low, 8192, 0.5);
        result.psd_port_high = psd_dual(port_high, 8192, 0.5);
        result.psd_port_coherent = psd_dual(port_coh, 8192, 0.5);
    }

    auto demod_branch = [&](const DualPolSignal& port, const OfdmFrame& frame, Rng& rng) {
        SampledSignal pd = photodetect(port.x, port.y, setup.plant.pd, rng);
        SampledSignal rx = resample(pd, ofdm.output_rate, 1.0);
        return OfdmModem::demodulate(rx, frame);
    };

    auto grid_low = demod_branch(port_low, frame_low, rng_pd_low);
    auto grid_high = demod_branch(port_high, frame_high, rng_pd_high);
    result.evm_low = OfdmModem::compute_evm(grid_low, frame_low.reference_symbols);
    result.evm_high = OfdmModem::compute_evm(grid_high, frame_high.reference_symbols);
    result.pass_3gpp_low = result.evm_low.passes_limit;
    result.pass_3gpp_high = result.evm_high.passes_limit;

    // Coherent receiver; static dispersion compensation is part of the
    // ideal DSP (the link's accumulated beta2*L is known state).
    result.q_report = receive_coherent(port_coh, coh, rng_coh, beta2_total);
    result.has_coherent = true;

    if (setup.capture_spectra) {
        result.constellation_low = grid_low;
        result.constellation_low_ref = frame_low.reference_symbols;
    }
    return result;
}

std::vector<SweepCell> sweep(const SweepRequest& request) {
    std::vector<SweepCell> cells;
    for (const auto& preset : request.presets)
        for (const auto& topo : request.topologies)
            for (double bw : request.bandwidths_hz) {
                SweepCell c;
                c.preset = preset;
                c.topology = topo;
                c.arof_bw_hz = bw;
                cells.push_back(std::move(c));
            }

    const std::size_t reps = std::max<std::size_t>(1, request.seeds_per_cell);
    auto run_cell = [&](std::size_t idx) {
        SweepCell& cell = cells[idx];
        try {
            for (std::size_t rep = 0; rep < reps; ++rep) {
                const std::uint64_t seed =
                    derive_seed(request.base_seed, (idx << 8) | rep);
                ScenarioSetup setup =
                    make_setup(cell.preset, cell.topology, cell.arof_bw_hz,
                               request.plant, seed);
                cell.runs.push_back(run_scenario(setup));
            }
            double evm_lo = 0.0, evm_hi = 0.0, q = 0.0;
            bool pass = true;
            for (const auto& r : cell.runs) {
                evm_lo += r.evm_low.evm_rms_pct;
                evm_hi += r.evm_high.evm_rms_pct;
                q += r.q_report.q_db;
                pass = pass && r.pass_3gpp_low && r.pass_3gpp_high;
            }
            const auto n = static_cast<double>(cell.runs.size());
            cell.mean_evm_low_pct = evm_lo / n;
            cell.mean_evm_high_pct = evm_hi / n;
            cell.mean_q_db = cell.runs.front().has_coherent
                                 ? q / n
                                 : std::numeric_limits<double>::quiet_NaN();
            cell.pass_3gpp = pass;
        } catch (const std::exception& ex) {
            cell.error = ex.what();
        }
    };

    const unsigned jobs = std::max(1u, request.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (unsigned t = 0; t < jobs; ++t)
            workers.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(i);
                }
            });
        for (auto& w : workers) w.join();
    }
    return cells;
}

CalibrationResult calibrate_baseline(const PlantParams& plant, double target_pct,
                                     double tolerance_pct, std::uint64_t seed,
                                     std::size_t n_seeds) {
    CalibrationResult cal;
    cal.target_evm_pct = target_pct;
    PlantParams p = plant;

    auto evaluate = [&](const PlantParams& pp) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n_seeds; ++i) {
            ScenarioSetup s = make_setup("100g", "baseline", 200e6, pp,
                                         derive_seed(seed, 0xca100 + i));
            acc += run_scenario(s).evm_low.evm_rms_pct;
        }
        return acc / static_cast<double>(n_seeds);
    };

    // Distortion floor (shot noise and modulator compression) with the
    // thermal knob at zero. Back the drive off if the floor alone sits
    // too close to the target.
    PlantParams p_floor = p;
    p_floor.pd.thermal_noise_density = 0.0;
    double floor = evaluate(p_floor);
    ++cal.iterations;
    while (floor > 0.8 * target_pct && cal.iterations < 8) {
        p.mzm.drive_rms *= 0.75;
        p_floor.mzm.drive_rms = p.mzm.drive_rms;
        floor = evaluate(p_floor);
        ++cal.iterations;
    }
    cal.floor_evm_pct = floor;

    // Fit the thermal density: the thermal EVM contribution scales
    // linearly with the density, so one or two corrections converge.
    double density = p.pd.thermal_noise_density > 0.0 ? p.pd.thermal_noise_density : 2e-10;
    double achieved = 0.0;
    for (int k = 0; k < 6; ++k) {
        p.pd.thermal_noise_density = density;
        achieved = evaluate(p);
        ++cal.iterations;
        if (std::abs(achieved - target_pct) <= 0.5 * tolerance_pct) break;
        const double excess = achieved * achieved - floor * floor;
        const double wanted = target_pct * target_pct - floor * floor;
        if (excess <= 0.0 || wanted <= 0.0) {
            density *= 4.0;
            continue;
        }
        density *= std::sqrt(wanted / excess);
    }

    cal.drive_rms_v = p.mzm.drive_rms;
    cal.pd_thermal_a_rthz = density;
    cal.achieved_evm_pct = achieved;
    return cal;
}

} // namespace rofsim
