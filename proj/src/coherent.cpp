#include "rofsim/coherent.hpp"

#include "rofsim/fft.hpp"
#include "rofsim/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rofsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Root-raised-cosine amplitude spectrum, unit passband.
double rrc_amplitude(double f, double baud, double rolloff) {
    const double af = std::abs(f);
    const double flat = (1.0 - rolloff) * baud / 2.0;
    const double edge = (1.0 + rolloff) * baud / 2.0;
    if (af <= flat) return 1.0;
    if (af >= edge) return 0.0;
    const double arg = kPi / (rolloff * baud) * (af - flat);
    return std::sqrt(0.5 * (1.0 + std::cos(arg)));
}

std::vector<std::complex<double>> random_symbols(std::size_t count, unsigned order, Rng& rng) {
    const unsigned bps = order == 4 ? 2 : 4;
    std::vector<int> bits(count * bps);
    for (auto& b : bits) b = static_cast<int>(rng.bit());
    return qam_map(bits, order);
}

SampledSignal shape_track(const std::vector<std::complex<double>>& symbols,
                          const CoherentConfig& cfg, double sample_rate,
                          std::size_t n_samples) {
    const std::size_t m = symbols.size();
    auto sym_spec = fft::forward_copy(symbols);

    std::vector<std::complex<double>> spec(n_samples, {0.0, 0.0});
    const double edge = (1.0 + cfg.rolloff) * cfg.baud / 2.0;
    for (std::size_t n = 0; n < n_samples; ++n) {
        const double f = fft::bin_frequency(n, n_samples, sample_rate);
        if (std::abs(f) >= edge) continue;
        spec[n] = sym_spec[n % m] * rrc_amplitude(f, cfg.baud, cfg.rolloff);
    }
    fft::inverse(spec);

    SampledSignal out;
    out.samples = std::move(spec);
    out.sample_rate = sample_rate;
    out.center_offset = 0.0;
    return out;
}

std::vector<std::complex<double>> project_track(const SampledSignal& rx,
                                                const CoherentConfig& cfg, std::size_t m,
                                                double beta2_length_s2) {
    auto spec = fft::forward_copy(rx.samples);
    const std::size_t n = spec.size();

    std::vector<std::complex<double>> folded(m, {0.0, 0.0});
    const double edge = (1.0 + cfg.rolloff) * cfg.baud / 2.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double f = fft::bin_frequency(k, n, rx.sample_rate);
        if (std::abs(f) >= edge) continue;
        std::complex<double> v = spec[k] * rrc_amplitude(f, cfg.baud, cfg.rolloff);
        if (beta2_length_s2 != 0.0) {
            const double w = 2.0 * kPi * f;
            const double phase = 0.5 * beta2_length_s2 * w * w;  // undo exp(-j b2/2 w^2 L)
            v *= std::complex<double>(std::cos(phase), std::sin(phase));
        }
        // Matched filter then alias onto the symbol-rate grid; both
        // spectra share the same bin spacing, so the fold is index mod m.
        folded[k % m] += v;
    }
    fft::inverse(folded);
    return folded;
}

} // namespace

std::string to_string(CoherentFormat f) {
    return f == CoherentFormat::DpQpsk ? "dp-qpsk" : "dp-16qam";
}

CoherentFormat coherent_format_from_string(const std::string& s) {
    if (s == "dp-qpsk") return CoherentFormat::DpQpsk;
    if (s == "dp-16qam") return CoherentFormat::Dp16Qam;
    throw std::invalid_argument("coherent: unknown format '" + s + "'");
}

unsigned CoherentConfig::bits_per_symbol() const {
    return format == CoherentFormat::DpQpsk ? 2u : 4u;
}

unsigned CoherentConfig::qam_order() const {
    return format == CoherentFormat::DpQpsk ? 4u : 16u;
}

void CoherentConfig::validate() const {
    if (!(baud > 0.0)) throw std::invalid_argument("coherent: baud must be > 0");
    if (!(rolloff >= 0.0 && rolloff <= 1.0))
        throw std::invalid_argument("coherent: rolloff must be in [0, 1]");
    if (occupied_width > channel_width)
        throw std::invalid_argument("coherent: occupied width exceeds the allocated channel");
}

CoherentConfig CoherentConfig::preset_100g() {
    CoherentConfig c;
    c.baud = 31.5e9;
    c.format = CoherentFormat::DpQpsk;
    c.rolloff = 0.195;
    c.channel_width = 50e9;
    c.occupied_width = 37.64e9;  // vendor slot figure
    return c;
}

CoherentConfig CoherentConfig::preset_400g() {
    CoherentConfig c;
    c.baud = 69e9;
    c.format = CoherentFormat::Dp16Qam;
    c.rolloff = 0.195;
    c.channel_width = 100e9;
    c.occupied_width = 82.46e9;  // vendor slot figure
    return c;
}

CoherentFrame generate_coherent(const CoherentConfig& cfg, double sample_rate,
                                std::size_t n_samples) {
    cfg.validate();
    if (n_samples == 0) throw std::invalid_argument("coherent: empty window");
    if (sample_rate < 2.0 * cfg.occupied_width)
        throw std::invalid_argument("coherent: window rate below twice the occupied width");

    const double duration = static_cast<double>(n_samples) / sample_rate;
    const double m_exact = duration * cfg.baud;
    const auto m = static_cast<std::size_t>(std::llround(m_exact));
    if (m == 0 || std::abs(m_exact - static_cast<double>(m)) > 1e-6 * m_exact)
        throw std::invalid_argument("coherent: baud not commensurate with the record duration");

    CoherentFrame frame;
    frame.config = cfg;
    Rng rng_x(derive_seed(cfg.seed, 0xc0));
    Rng rng_y(derive_seed(cfg.seed, 0xc1));
    frame.symbols_x = random_symbols(m, cfg.qam_order(), rng_x);
    frame.symbols_y = random_symbols(m, cfg.qam_order(), rng_y);

    frame.field.x = shape_track(frame.symbols_x, cfg, sample_rate, n_samples);
    frame.field.y = shape_track(frame.symbols_y, cfg, sample_rate, n_samples);

    const double total = frame.field.power_mw();
    const double scale = 1.0 / std::sqrt(total);
    for (auto& s : frame.field.x.samples) s *= scale;
    for (auto& s : frame.field.y.samples) s *= scale;
    return frame;
}

QReport receive_coherent(const DualPolSignal& rx, const CoherentFrame& frame, Rng& rng,
                         double beta2_length_s2) {
    rx.x.validate();
    rx.y.validate();
    const CoherentConfig& cfg = frame.config;
    const std::size_t m = frame.symbols_x.size();
    if (m == 0) throw std::invalid_argument("coherent receive: frame has no symbols");

    const double noise_sigma = cfg.rx_snr_db > 0.0
                                   ? std::pow(10.0, -cfg.rx_snr_db / 20.0)
                                   : 0.0;

    double err_power = 0.0;
    double ref_power = 0.0;
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;

    const std::vector<std::complex<double>>* refs[2] = {&frame.symbols_x, &frame.symbols_y};
    const SampledSignal* tracks[2] = {&rx.x, &rx.y};
    for (int pol = 0; pol < 2; ++pol) {
        auto decisions_in = project_track(*tracks[pol], cfg, m, beta2_length_s2);
        const auto& ref = *refs[pol];

        // Data-aided complex gain (ideal phase/polarization alignment).
        std::complex<double> num{0.0, 0.0};
        double den = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            num += decisions_in[i] * std::conj(ref[i]);
            den += std::norm(ref[i]);
        }
        if (!(std::norm(num) > 0.0))
            throw std::runtime_error("coherent receive: no signal on polarization track");
        const std::complex<double> gain = num / den;

        std::vector<int> ref_bits = qam_demap(ref, cfg.qam_order());
        std::vector<std::complex<double>> eq(m);
        for (std::size_t i = 0; i < m; ++i) {
            eq[i] = decisions_in[i] / gain;
            if (noise_sigma > 0.0) eq[i] += noise_sigma * rng.complex_gaussian();
            err_power += std::norm(eq[i] - ref[i]);
            ref_power += std::norm(ref[i]);
        }
        std::vector<int> rx_bits = qam_demap(eq, cfg.qam_order());
        for (std::size_t i = 0; i < rx_bits.size(); ++i) {
            errors += static_cast<std::uint64_t>(rx_bits[i] != ref_bits[i]);
            ++bits;
        }
    }

    QReport rep;
    rep.bit_errors = errors;
    rep.bits_counted = bits;
    rep.ber = static_cast<double>(errors) / static_cast<double>(bits);
    rep.evm_pct = 100.0 * std::sqrt(err_power / ref_power);
    rep.no_errors = errors == 0;

    if (errors > 0) {
        rep.q_db = rep.ber < 0.5 ? q_factor_db_from_ber(rep.ber) : 0.0;
    } else {
        // No countable errors: estimate BER from the error-vector power
        // through the format's AWGN closed form, then cap.
        const double evm = rep.evm_pct / 100.0;
        double q = QReport::kQCapDb;
        if (evm > 0.0) {
            const double ber_est = ber_from_snr(1.0 / (evm * evm), cfg.format);
            if (ber_est > 0.0 && ber_est < 0.5) q = q_factor_db_from_ber(ber_est);
        }
        rep.q_db = std::min(q, QReport::kQCapDb);
    }
    return rep;
}

double erfc_inv(double y) {
    if (!(y > 0.0 && y < 2.0)) throw std::domain_error("erfc_inv: argument outside (0, 2)");
    if (y == 1.0) return 0.0;
    if (y > 1.0) return -erfc_inv(2.0 - y);

    // Newton iterations on erfc(x) - y with a log-based starting point.
    double x = std::sqrt(std::max(1e-12, -std::log(y)));
    for (int i = 0; i < 100; ++i) {
        const double err = std::erfc(x) - y;
        const double slope = -2.0 / std::sqrt(kPi) * std::exp(-x * x);
        const double step = err / slope;
        x = std::max(0.0, x - step);
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

double q_factor_db_from_ber(double ber) {
    if (!(ber > 0.0 && ber < 0.5))
        throw std::domain_error("q_factor: BER must be in (0, 0.5)");
    const double q_lin = std::sqrt(2.0) * erfc_inv(2.0 * ber);
    return 20.0 * std::log10(q_lin);
}

double ber_from_snr(double snr_linear, CoherentFormat format) {
    if (!(snr_linear > 0.0)) return 0.5;
    if (format == CoherentFormat::DpQpsk)
        return 0.5 * std::erfc(std::sqrt(snr_linear / 2.0));
    const double x = std::sqrt(snr_linear / 10.0);
    return 0.375 * std::erfc(x) + 0.25 * std::erfc(3.0 * x) - 0.125 * std::erfc(5.0 * x);
}

} // namespace rofsim
