#ifndef ROFSIM_COHERENT_HPP
#define ROFSIM_COHERENT_HPP

#include "rofsim/rng.hpp"
#include "rofsim/signal.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace rofsim {

enum class CoherentFormat { DpQpsk, Dp16Qam };

std::string to_string(CoherentFormat f);
CoherentFormat coherent_format_from_string(const std::string& s);

/// Transponder-style coherent service. `occupied_width` is the vendor
/// slot figure used by the allocation arithmetic; the pulse shaping uses
/// baud and rolloff (the two agree to a rounding hair for the presets).
struct CoherentConfig {
    double baud = 31.5e9;             // Hz
    CoherentFormat format = CoherentFormat::DpQpsk;
    double rolloff = 0.195;
    double channel_width = 50e9;      // Hz, allocated ROADM slot
    double occupied_width = 37.64e9;  // Hz
    std::uint64_t seed = 1;
    /// Receiver-referred SNR in dB at the decision point (lumps TIA, ADC
    /// and LO imperfections); <= 0 disables the receiver noise.
    double rx_snr_db = 0.0;

    unsigned bits_per_symbol() const;
    unsigned qam_order() const;
    void validate() const;

    /// 100 Gb/s service: 31.50 GBd DP-QPSK in a 50 GHz slot.
    static CoherentConfig preset_100g();
    /// 400 Gb/s service: 69 GBd DP-16-QAM in a 100 GHz slot.
    static CoherentConfig preset_400g();
};

/// Two independent polarization tracks on a common grid.
struct DualPolSignal {
    SampledSignal x;
    SampledSignal y;

    double power_mw() const { return x.power_mw() + y.power_mw(); }
};

/// A generated coherent burst with its per-polarization reference symbols.
struct CoherentFrame {
    DualPolSignal field;
    std::vector<std::complex<double>> symbols_x;
    std::vector<std::complex<double>> symbols_y;
    CoherentConfig config;
};

struct QReport {
    double ber = 0.0;
    double q_db = 0.0;
    double evm_pct = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_counted = 0;
    bool no_errors = false;   // q_db then comes from the EVM route, capped
    /// Ceiling applied when no errors are counted; finite records cannot
    /// resolve a better BER.
    static constexpr double kQCapDb = 20.0;
};

/// Root-raised-cosine symbol stream per polarization on the given window
/// grid. The record duration must hold an integer number of symbols.
/// Output is normalized to unit total power (both tracks together).
CoherentFrame generate_coherent(const CoherentConfig& cfg, double sample_rate,
                                std::size_t n_samples);

/// Matched filter, symbol-rate projection, data-aided scalar gain per
/// polarization, receiver noise at the decision point, hard decisions and
/// bit-error count against the reference. `beta2_length_s2` is the link's
/// accumulated beta2*L; the receiver unwinds that quadratic phase (static
/// dispersion compensation, standard in coherent DSP and here part of the
/// known channel state).
QReport receive_coherent(const DualPolSignal& rx, const CoherentFrame& frame, Rng& rng,
                         double beta2_length_s2 = 0.0);

/// q = 20*log10(sqrt(2) * erfc^-1(2*ber)); the textbook Q(BER) map.
double q_factor_db_from_ber(double ber);

/// Closed-form AWGN bit error rate at symbol SNR (linear) for the format.
double ber_from_snr(double snr_linear, CoherentFormat format);

/// Inverse complementary error function on (0, 2).
double erfc_inv(double y);

} // namespace rofsim

#endif
