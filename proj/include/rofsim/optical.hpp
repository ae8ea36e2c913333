#ifndef ROFSIM_OPTICAL_HPP
#define ROFSIM_OPTICAL_HPP

#include "rofsim/rng.hpp"
#include "rofsim/signal.hpp"

namespace rofsim {

/// Mach-Zehnder modulator with the exact raised-cosine field transfer;
/// no small-signal truncation, so compression and intermodulation fall
/// out of the trigonometry.
struct MzmParams {
    double v_pi = 3.5;         // volts
    double bias = 0.5;         // fraction of v_pi; 0.5 = quadrature
    double drive_rms = 0.28;   // volts
    double laser_power = 10.0; // dBm

    void validate() const;
};

struct FiberParams {
    double length = 0.0;               // km
    double attenuation = 0.2;          // dB/km
    double dispersion = 17.0;          // ps/(nm km)
    double reference_wavelength = 1550.0; // nm

    void validate() const;
};

struct EdfaParams {
    double gain = 0.0;          // dB
    double noise_figure = 5.0;  // dB

    void validate() const;
};

struct PdParams {
    double responsivity = 0.8;          // A/W
    double thermal_noise_density = 0.0; // A/sqrt(Hz), receiver-lumped
    bool include_shot_noise = true;

    void validate() const;
};

/// drive carries the IF waveform in volts (real part; imaginary ignored).
/// Output field: sqrt(P_laser) * cos(pi/2 * (bias + drive/v_pi)).
SampledSignal mzm_modulate(const SampledSignal& drive, const MzmParams& p);

/// All-pass quadratic dispersion phase around the record center plus
/// scalar attenuation. The dispersion stage conserves energy.
SampledSignal fiber_propagate(const SampledSignal& sig, const FiberParams& p);

/// Field gain 10^(G/20) plus circular complex ASE of single-polarization
/// PSD (G-1)*h*nu*NF/2 (W/Hz) spread across the simulation window.
SampledSignal edfa_amplify(const SampledSignal& sig, const EdfaParams& p, Rng& rng);

/// Per-polarization ASE PSD in mW/Hz for the given parameters.
double edfa_ase_psd_mw_per_hz(const EdfaParams& p);

/// Square-law detection of one or two polarization tracks:
/// i(t) = R * sum |E|^2, plus thermal (and optional shot) noise. The
/// result is a real electrical waveform in the same sqrt(mW) amplitude
/// convention, i.e. numerically the photocurrent in mA-like units when
/// R is in A/W and power in mW.
SampledSignal photodetect(const SampledSignal& field, const PdParams& p, Rng& rng);
SampledSignal photodetect(const SampledSignal& field_x, const SampledSignal& field_y,
                          const PdParams& p, Rng& rng);

/// Photon energy at the reference wavelength, in mJ (so PSDs stay in mW/Hz).
double photon_energy_mj(double wavelength_nm = 1550.0);

} // namespace rofsim

#endif
