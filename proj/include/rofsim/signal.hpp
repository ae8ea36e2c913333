#ifndef ROFSIM_SIGNAL_HPP
#define ROFSIM_SIGNAL_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace rofsim {

/// Uniformly sampled complex baseband waveform. Amplitudes are in
/// sqrt(mW), so mean |sample|^2 is a power in mW and power arithmetic
/// needs no unit conversions anywhere in the chain.
///
/// center_offset is bookkeeping: the frequency (relative to the ROADM
/// channel center) that baseband 0 of this record corresponds to.
/// Operations never move it; frequency_shift moves content *within*
/// the sampled window.
struct SampledSignal {
    std::vector<std::complex<double>> samples;
    double sample_rate = 0.0;    // Hz
    double center_offset = 0.0;  // Hz

    std::size_t size() const { return samples.size(); }
    double duration() const { return static_cast<double>(samples.size()) / sample_rate; }

    /// Mean |sample|^2 in mW.
    double power_mw() const;

    /// Throws if the container violates its invariants (empty, bad rate,
    /// non-finite samples).
    void validate() const;
};

/// Averaged-periodogram spectrum. Frequencies are absolute (baseband
/// grid plus the record's center_offset), strictly increasing; psd is
/// dBm/Hz per bin.
struct SpectrumEstimate {
    std::vector<double> frequencies;  // Hz
    std::vector<double> psd;          // dBm/Hz

    /// Linear-scale integral of the PSD (total power, mW).
    double integrated_power_mw() const;

    /// PSD value at the bin nearest to f.
    double psd_at(double f) const;
};

/// Multiply by a unit-magnitude rotating phasor so content at f moves to
/// f + delta. Content that would wrap across the Nyquist edge is a
/// modelling error: if more than `overflow_tol` of the total power sits in
/// the band that would alias, the shift is rejected.
SampledSignal frequency_shift(const SampledSignal& sig, double delta,
                              double overflow_tol = 1e-9);

/// Band-limited rate change via spectral truncation/extension. The output
/// length is round(n * new_rate / old_rate); the achieved rate is exactly
/// new_len/duration and must match the request to within 1e-9 relative
/// (presets use commensurate rates). Decimation that would fold occupied
/// spectrum raises an aliasing error.
SampledSignal resample(const SampledSignal& sig, double new_rate,
                       double alias_tol = 1e-9);

/// Elementwise complex sum modelling an ideal coupler; shorter inputs are
/// zero-padded. `port_loss_db`, when non-empty, applies a per-port
/// insertion loss before summing and must match the input count.
SampledSignal combine(const std::vector<SampledSignal>& signals,
                      const std::vector<double>& port_loss_db = {});

/// Welch averaged periodogram with a Hann window.
SpectrumEstimate estimate_psd(const SampledSignal& sig, std::size_t segment_len,
                              double overlap);

/// 10*log10(mean |sample|^2); -inf for an all-zero record (below floor).
double measure_power_dbm(const SampledSignal& sig);

/// Sum of |sample|^2 over a frequency interval [f_lo, f_hi) of the raw
/// spectrum, as a fraction of total. Used by the shift/resample guards.
double band_power_fraction(const SampledSignal& sig, double f_lo, double f_hi);

} // namespace rofsim

#endif
