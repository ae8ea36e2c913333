#include "rofsim/ofdm.hpp"

#include "rofsim/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rofsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

unsigned bits_per_axis(unsigned order) {
    switch (order) {
        case 4: return 1;
        case 16: return 2;
        case 64: return 3;
        default:
            throw std::invalid_argument("qam: unsupported order (must be 4, 16 or 64)");
    }
}

// Gray-coded 2^b-PAM axis levels, scaled later for unit average power.
int gray_to_level(unsigned gray_bits, unsigned b) {
    if (b == 1) return gray_bits == 0 ? +1 : -1;
    // Decode Gray to index, then map index i to level 2i - (2^b - 1).
    unsigned idx = gray_bits;
    for (unsigned shift = 1; shift < b; shift <<= 1) idx ^= idx >> shift;
    return static_cast<int>(2 * idx) - static_cast<int>((1u << b) - 1);
}

unsigned level_to_gray(int level, unsigned b) {
    if (b == 1) return level > 0 ? 0u : 1u;
    const unsigned idx = static_cast<unsigned>((level + static_cast<int>((1u << b) - 1)) / 2);
    return idx ^ (idx >> 1);
}

double axis_scale(unsigned order) {
    // Mean square of the full constellation: 2*(M-1)/3 per complex symbol
    // for square M-QAM with odd-integer levels.
    return std::sqrt(1.5 / (static_cast<double>(order) - 1.0));
}

// Data subcarriers sit on bins +-1..+-n/2 around the DC null.
std::vector<std::size_t> data_bins(const OfdmConfig& c) {
    std::vector<std::size_t> bins(c.n_data_sc);
    const std::size_t half = c.n_data_sc / 2;
    const std::size_t n = c.fft_size;
    // Order: most negative subcarrier first, so the grid index tracks
    // frequency from -BW/2 to +BW/2.
    for (std::size_t i = 0; i < half; ++i) bins[i] = n - half + i;
    for (std::size_t i = 0; i < c.n_data_sc - half; ++i) bins[half + i] = 1 + i;
    return bins;
}

SymbolGrid random_grid(std::size_t n_symbols, std::size_t n_sc, unsigned order, Rng& rng) {
    const unsigned bps = 2 * bits_per_axis(order);
    SymbolGrid grid(n_symbols);
    std::vector<int> bits(bps * n_sc);
    for (auto& row : grid) {
        for (auto& b : bits) b = static_cast<int>(rng.bit());
        row = qam_map(bits, order);
    }
    return grid;
}

} // namespace

std::size_t OfdmConfig::cp_len() const {
    return static_cast<std::size_t>(std::llround(cp_fraction * static_cast<double>(fft_size)));
}

double OfdmConfig::symbol_duration() const {
    return static_cast<double>(fft_size + cp_len()) / baseband_rate();
}

double OfdmConfig::frame_duration() const {
    return static_cast<double>(n_symbols + n_training_symbols) * symbol_duration();
}

double OfdmConfig::raw_bit_rate() const {
    return bandwidth() * std::log2(static_cast<double>(qam_order));
}

double OfdmConfig::net_bit_rate() const {
    const double cp_eff = static_cast<double>(fft_size) / static_cast<double>(fft_size + cp_len());
    const double train_eff = static_cast<double>(n_symbols) /
                             static_cast<double>(n_symbols + n_training_symbols);
    return raw_bit_rate() * cp_eff * train_eff;
}

void OfdmConfig::validate() const {
    bits_per_axis(qam_order);
    if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0)
        throw std::invalid_argument("ofdm: fft_size must be a power of two");
    if (n_data_sc == 0 || n_data_sc > fft_size - 1)
        throw std::invalid_argument("ofdm: n_data_sc must be in [1, fft_size-1]");
    if (n_data_sc % 2 != 0)
        throw std::invalid_argument("ofdm: n_data_sc must be even (symmetric band around DC)");
    if (!(sc_spacing > 0.0)) throw std::invalid_argument("ofdm: sc_spacing must be > 0");
    if (!(cp_fraction >= 0.0 && cp_fraction < 1.0))
        throw std::invalid_argument("ofdm: cp_fraction must be in [0, 1)");
    if (!(if_freq - bandwidth() / 2.0 > 0.0))
        throw std::invalid_argument("ofdm: IF too low, signal folds over baseband");
    if (n_symbols == 0) throw std::invalid_argument("ofdm: need at least one data symbol");
    if (n_training_symbols == 0)
        throw std::invalid_argument("ofdm: need at least one training symbol");
    if (output_rate < 2.0 * (if_freq + bandwidth() / 2.0))
        throw std::invalid_argument("ofdm: output_rate violates Nyquist for the IF signal");
}

std::vector<std::complex<double>> qam_map(const std::vector<int>& bits, unsigned order) {
    const unsigned b = bits_per_axis(order);
    const unsigned bps = 2 * b;
    if (bits.size() % bps != 0)
        throw std::invalid_argument("qam_map: bit count not divisible by bits per symbol");

    const double scale = axis_scale(order);
    std::vector<std::complex<double>> out(bits.size() / bps);
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned gi = 0, gq = 0;
        for (unsigned k = 0; k < b; ++k) {
            gi = (gi << 1) | static_cast<unsigned>(bits[s * bps + k] != 0);
            gq = (gq << 1) | static_cast<unsigned>(bits[s * bps + b + k] != 0);
        }
        out[s] = {scale * gray_to_level(gi, b), scale * gray_to_level(gq, b)};
    }
    return out;
}

std::vector<int> qam_demap(const std::vector<std::complex<double>>& symbols, unsigned order) {
    const unsigned b = bits_per_axis(order);
    const double scale = axis_scale(order);
    const int max_level = static_cast<int>(order == 4 ? 1 : (order == 16 ? 3 : 7));

    auto slice_axis = [&](double v) {
        int level = static_cast<int>(std::llround((v / scale + 1.0) / 2.0)) * 2 - 1;
        return std::clamp(level, -max_level, max_level);
    };

    std::vector<int> bits;
    bits.reserve(symbols.size() * 2 * b);
    for (const auto& s : symbols) {
        const unsigned gi = level_to_gray(slice_axis(s.real()), b);
        const unsigned gq = level_to_gray(slice_axis(s.imag()), b);
        for (unsigned k = 0; k < b; ++k) bits.push_back((gi >> (b - 1 - k)) & 1u);
        for (unsigned k = 0; k < b; ++k) bits.push_back((gq >> (b - 1 - k)) & 1u);
    }
    return bits;
}

std::complex<double> qam_decide(std::complex<double> x, unsigned order) {
    const unsigned b = bits_per_axis(order);
    const double scale = axis_scale(order);
    const int max_level = static_cast<int>((1u << b) - 1);
    auto slice = [&](double v) {
        int level = static_cast<int>(std::llround((v / scale + 1.0) / 2.0)) * 2 - 1;
        return scale * std::clamp(level, -max_level, max_level);
    };
    return {slice(x.real()), slice(x.imag())};
}

OfdmFrame OfdmModem::modulate(const OfdmConfig& config) {
    config.validate();

    OfdmFrame frame;
    frame.config = config;

    Rng payload_rng(derive_seed(config.seed, 0x0fd17));
    Rng training_rng(derive_seed(config.seed, 0x7a1));
    frame.reference_symbols = random_grid(config.n_symbols, config.n_data_sc,
                                          config.qam_order, payload_rng);
    // QPSK training: constant modulus keeps the per-subcarrier channel
    // estimate noise uniform.
    frame.training_symbols = random_grid(config.n_training_symbols, config.n_data_sc,
                                         4, training_rng);

    const auto bins = data_bins(config);
    const std::size_t cp = config.cp_len();
    const std::size_t sym_len = config.fft_size + cp;
    const std::size_t total_syms = config.n_training_symbols + config.n_symbols;

    std::vector<std::complex<double>> baseband(total_syms * sym_len);
    std::vector<std::complex<double>> freq(config.fft_size);
    for (std::size_t s = 0; s < total_syms; ++s) {
        const auto& row = s < config.n_training_symbols
                              ? frame.training_symbols[s]
                              : frame.reference_symbols[s - config.n_training_symbols];
        std::fill(freq.begin(), freq.end(), std::complex<double>{0.0, 0.0});
        for (std::size_t i = 0; i < bins.size(); ++i) freq[bins[i]] = row[i];
        fft::inverse(freq);
        auto* dst = baseband.data() + s * sym_len;
        for (std::size_t i = 0; i < cp; ++i) dst[i] = freq[config.fft_size - cp + i];
        for (std::size_t i = 0; i < config.fft_size; ++i) dst[cp + i] = freq[i];
    }

    SampledSignal bb;
    bb.samples = std::move(baseband);
    bb.sample_rate = config.baseband_rate();
    SampledSignal up = resample(bb, config.output_rate);

    // Real IF waveform; the sqrt(2) keeps passband power equal to the
    // complex-envelope power.
    const double root2 = std::sqrt(2.0);
    const double w = 2.0 * kPi * config.if_freq / config.output_rate;
    for (std::size_t i = 0; i < up.samples.size(); ++i) {
        const double phase = w * static_cast<double>(i);
        const double re = up.samples[i].real() * std::cos(phase) -
                          up.samples[i].imag() * std::sin(phase);
        up.samples[i] = {root2 * re, 0.0};
    }

    // Unit RMS so drive scaling is a pure voltage choice downstream.
    const double rms = std::sqrt(up.power_mw());
    if (rms > 0.0)
        for (auto& x : up.samples) x /= rms;

    frame.tx_waveform = std::move(up);
    return frame;
}

SymbolGrid OfdmModem::demodulate(const SampledSignal& rx, const OfdmFrame& frame) {
    rx.validate();
    const OfdmConfig& c = frame.config;

    // Work on exactly one frame worth of samples so the record length
    // stays commensurate with the baseband rate.
    const auto needed = static_cast<std::size_t>(
        std::llround(c.frame_duration() * rx.sample_rate));
    if (rx.size() < needed)
        throw std::invalid_argument("ofdm demodulate: record shorter than the frame");

    // Downconvert at the record's own rate, then drop to baseband rate
    // (the rate change is the anti-alias / image-reject lowpass).
    SampledSignal down;
    down.sample_rate = rx.sample_rate;
    down.samples.resize(needed);
    const double root2 = std::sqrt(2.0);
    const double w = -2.0 * kPi * c.if_freq / rx.sample_rate;
    for (std::size_t i = 0; i < needed; ++i) {
        const double phase = w * static_cast<double>(i);
        down.samples[i] = rx.samples[i] *
                          std::complex<double>(root2 * std::cos(phase), root2 * std::sin(phase));
    }
    SampledSignal bb = resample(down, c.baseband_rate(), /*alias_tol=*/1.0);

    const std::size_t cp = c.cp_len();
    const std::size_t sym_len = c.fft_size + cp;
    const std::size_t total_syms = c.n_training_symbols + c.n_symbols;
    if (bb.size() < total_syms * sym_len)
        throw std::invalid_argument("ofdm demodulate: record shorter than the frame");

    const auto bins = data_bins(c);
    SymbolGrid raw(total_syms);
    std::vector<std::complex<double>> freq(c.fft_size);
    for (std::size_t s = 0; s < total_syms; ++s) {
        const auto* src = bb.samples.data() + s * sym_len + cp;
        std::copy(src, src + c.fft_size, freq.begin());
        fft::forward(freq);
        raw[s].resize(c.n_data_sc);
        for (std::size_t i = 0; i < bins.size(); ++i) raw[s][i] = freq[bins[i]];
    }

    // One tap per subcarrier from the training block, then a sliding
    // average across subcarriers to shed estimation noise. The channels
    // seen here vary slowly over tens of subcarriers, so the window
    // keeps the skirt shapes while averaging the noise down.
    std::vector<std::complex<double>> h(c.n_data_sc, {0.0, 0.0});
    for (std::size_t s = 0; s < c.n_training_symbols; ++s)
        for (std::size_t i = 0; i < c.n_data_sc; ++i)
            h[i] += raw[s][i] / frame.training_symbols[s][i];
    for (auto& v : h) v /= static_cast<double>(c.n_training_symbols);

    std::vector<std::complex<double>> h_smooth(c.n_data_sc);
    const std::size_t halfw = std::min<std::size_t>(kEqSmoothing / 2, c.n_data_sc / 4);
    for (std::size_t i = 0; i < c.n_data_sc; ++i) {
        const std::size_t lo = i >= halfw ? i - halfw : 0;
        const std::size_t hi = std::min(c.n_data_sc - 1, i + halfw);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t k = lo; k <= hi; ++k) acc += h[k];
        h_smooth[i] = acc / static_cast<double>(hi - lo + 1);
    }

    SymbolGrid equalized(c.n_symbols);
    for (std::size_t s = 0; s < c.n_symbols; ++s) {
        equalized[s].resize(c.n_data_sc);
        for (std::size_t i = 0; i < c.n_data_sc; ++i) {
            const auto& gain = h_smooth[i];
            equalized[s][i] = std::norm(gain) > 0.0
                                  ? raw[c.n_training_symbols + s][i] / gain
                                  : raw[c.n_training_symbols + s][i];
        }
    }
    return equalized;
}

EvmReport OfdmModem::compute_evm(const SymbolGrid& equalized, const SymbolGrid& reference,
                                 double limit_pct) {
    if (equalized.empty() || reference.empty())
        throw std::invalid_argument("compute_evm: empty grid");
    if (equalized.size() != reference.size() ||
        equalized.front().size() != reference.front().size())
        throw std::invalid_argument("compute_evm: grid shapes differ");

    const std::size_t n_sym = equalized.size();
    const std::size_t n_sc = equalized.front().size();

    double err_total = 0.0;
    double ref_total = 0.0;
    std::vector<double> err_sc(n_sc, 0.0);
    std::vector<double> ref_sc(n_sc, 0.0);
    for (std::size_t s = 0; s < n_sym; ++s) {
        for (std::size_t i = 0; i < n_sc; ++i) {
            const double e = std::norm(equalized[s][i] - reference[s][i]);
            const double r = std::norm(reference[s][i]);
            err_total += e;
            ref_total += r;
            err_sc[i] += e;
            ref_sc[i] += r;
        }
    }
    if (!(ref_total > 0.0)) throw std::invalid_argument("compute_evm: zero reference power");

    EvmReport rep;
    rep.evm_rms_pct = 100.0 * std::sqrt(err_total / ref_total);
    rep.per_subcarrier_evm_pct.resize(n_sc);
    for (std::size_t i = 0; i < n_sc; ++i)
        rep.per_subcarrier_evm_pct[i] =
            ref_sc[i] > 0.0 ? 100.0 * std::sqrt(err_sc[i] / ref_sc[i]) : 0.0;
    rep.snr_equivalent_db = rep.evm_rms_pct > 0.0
                                ? -20.0 * std::log10(rep.evm_rms_pct / 100.0)
                                : 300.0;
    rep.limit_pct = limit_pct;
    rep.passes_limit = rep.evm_rms_pct <= limit_pct;
    return rep;
}

} // namespace rofsim
