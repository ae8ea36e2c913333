#ifndef ROFSIM_OFDM_HPP
#define ROFSIM_OFDM_HPP

#include "rofsim/rng.hpp"
#include "rofsim/signal.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace rofsim {

/// IF-OFDM numerology. Bandwidth is set by the data-subcarrier count at
/// fixed spacing: occupied bandwidth = n_data_sc * sc_spacing.
struct OfdmConfig {
    std::size_t fft_size = 2048;
    std::size_t n_data_sc = 512;
    double sc_spacing = 1.5625e6;   // Hz
    double cp_fraction = 1.0 / 16.0;
    unsigned qam_order = 64;        // 4 / 16 / 64
    double if_freq = 2.0e9;         // Hz
    std::size_t n_symbols = 8;      // data symbols
    std::size_t n_training_symbols = 4;
    std::uint64_t seed = 1;
    double output_rate = 8.0e9;     // Hz of the emitted IF waveform

    double bandwidth() const { return static_cast<double>(n_data_sc) * sc_spacing; }
    double baseband_rate() const { return static_cast<double>(fft_size) * sc_spacing; }
    std::size_t cp_len() const;
    double symbol_duration() const;  // s, including CP
    double frame_duration() const;   // s, training + data
    /// n_data_sc * sc_spacing * log2(order); no overhead.
    double raw_bit_rate() const;
    /// Raw rate discounted by CP and training overhead.
    double net_bit_rate() const;

    void validate() const;
};

/// Symbol grid indexed [symbol][subcarrier].
using SymbolGrid = std::vector<std::vector<std::complex<double>>>;

/// A transmitted frame: the real IF waveform (stored as complex with zero
/// imaginary part) plus everything needed to demodulate and score it.
struct OfdmFrame {
    SampledSignal tx_waveform;
    SymbolGrid reference_symbols;   // data symbols only
    SymbolGrid training_symbols;
    OfdmConfig config;
};

struct EvmReport {
    double evm_rms_pct = 0.0;
    std::vector<double> per_subcarrier_evm_pct;
    double snr_equivalent_db = 0.0;   // -20*log10(evm/100)
    double limit_pct = 8.0;
    bool passes_limit = false;
};

/// Gray-mapped square QAM, unit average power. Axis tables (value for
/// each Gray-coded bit group, before the unit-power scale):
///   QPSK   : 0 -> +1, 1 -> -1                      (per axis, 1 bit)
///   16-QAM : 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3 (per axis, 2 bits)
///   64-QAM : 000 -3... Gray order (000,001,011,010,110,111,101,100)
///            maps to (-7,-5,-3,-1,+1,+3,+5,+7)      (per axis, 3 bits)
/// First bit group modulates I, second Q.
std::vector<std::complex<double>> qam_map(const std::vector<int>& bits, unsigned order);
std::vector<int> qam_demap(const std::vector<std::complex<double>>& symbols, unsigned order);

/// Hard-decision slicing to the nearest constellation point.
std::complex<double> qam_decide(std::complex<double> x, unsigned order);

class OfdmModem {
public:
    /// Build a frame: seeded payload, IFFT per symbol with the data
    /// subcarriers centered around a DC null, cyclic prefix, training
    /// symbols in front, upconversion to a real waveform at if_freq.
    static OfdmFrame modulate(const OfdmConfig& config);

    /// Inverse chain with ideal frame timing: downconvert, strip CP, FFT,
    /// one-tap equalizer estimated from the training symbols (smoothed
    /// across subcarriers). Accepts any sample rate commensurate with the
    /// frame duration; resamples internally.
    static SymbolGrid demodulate(const SampledSignal& rx, const OfdmFrame& frame);

    static EvmReport compute_evm(const SymbolGrid& equalized, const SymbolGrid& reference,
                                 double limit_pct = 8.0);

    /// Subcarrier smoothing width of the training-based equalizer.
    static constexpr std::size_t kEqSmoothing = 17;
};

} // namespace rofsim

#endif
