#include "rofsim/optical.hpp"

#include "rofsim/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace rofsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kPlanck = 6.62607015e-34;       // J s
constexpr double kLightSpeed = 2.99792458e8;     // m/s
constexpr double kElectronCharge = 1.602176634e-19; // C
}

void MzmParams::validate() const {
    if (!(v_pi > 0.0)) throw std::invalid_argument("mzm: v_pi must be > 0");
    if (!(bias > 0.0 && bias < 1.0)) throw std::invalid_argument("mzm: bias must be in (0, 1)");
    if (drive_rms < 0.0) throw std::invalid_argument("mzm: drive_rms must be >= 0");
}

void FiberParams::validate() const {
    if (length < 0.0) throw std::invalid_argument("fiber: length must be >= 0");
    if (attenuation < 0.0) throw std::invalid_argument("fiber: attenuation must be >= 0");
    if (!(reference_wavelength > 0.0))
        throw std::invalid_argument("fiber: reference_wavelength must be > 0");
}

void EdfaParams::validate() const {
    if (gain < 0.0) throw std::invalid_argument("edfa: gain must be >= 0");
    // Sub-3 dB noise figures are unphysical for a high-gain EDFA; the
    // config layer warns but the model still runs.
}

void PdParams::validate() const {
    if (!(responsivity > 0.0)) throw std::invalid_argument("pd: responsivity must be > 0");
    if (thermal_noise_density < 0.0)
        throw std::invalid_argument("pd: thermal_noise_density must be >= 0");
}

double photon_energy_mj(double wavelength_nm) {
    return kPlanck * kLightSpeed / (wavelength_nm * 1e-9) * 1e3;
}

SampledSignal mzm_modulate(const SampledSignal& drive, const MzmParams& p) {
    drive.validate();
    p.validate();

    const double field_cw = std::sqrt(std::pow(10.0, p.laser_power / 10.0));  // sqrt(mW)
    SampledSignal out;
    out.sample_rate = drive.sample_rate;
    out.center_offset = drive.center_offset;
    out.samples.resize(drive.size());
    for (std::size_t i = 0; i < drive.size(); ++i) {
        const double v = drive.samples[i].real();
        out.samples[i] = {field_cw * std::cos(kPi / 2.0 * (p.bias + v / p.v_pi)), 0.0};
    }
    return out;
}

SampledSignal fiber_propagate(const SampledSignal& sig, const FiberParams& p) {
    sig.validate();
    p.validate();
    if (p.length == 0.0) return sig;

    // beta2 from D at the reference wavelength.
    const double lambda = p.reference_wavelength * 1e-9;               // m
    const double d_si = p.dispersion * 1e-6;                           // s/m^2
    const double beta2 = -d_si * lambda * lambda / (2.0 * kPi * kLightSpeed); // s^2/m
    const double length_m = p.length * 1e3;

    auto spec = fft::forward_copy(sig.samples);
    const std::size_t n = spec.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double w = 2.0 * kPi * fft::bin_frequency(k, n, sig.sample_rate);
        const double phase = -0.5 * beta2 * w * w * length_m;
        spec[k] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    fft::inverse(spec);

    const double atten = std::pow(10.0, -p.attenuation * p.length / 20.0);
    for (auto& x : spec) x *= atten;

    SampledSignal out;
    out.samples = std::move(spec);
    out.sample_rate = sig.sample_rate;
    out.center_offset = sig.center_offset;
    return out;
}

double edfa_ase_psd_mw_per_hz(const EdfaParams& p) {
    const double g = std::pow(10.0, p.gain / 10.0);
    const double nf = std::pow(10.0, p.noise_figure / 10.0);
    return (g - 1.0) * photon_energy_mj(1550.0) * nf / 2.0;
}

SampledSignal edfa_amplify(const SampledSignal& sig, const EdfaParams& p, Rng& rng) {
    sig.validate();
    p.validate();

    const double gain = std::pow(10.0, p.gain / 20.0);
    const double ase_var = edfa_ase_psd_mw_per_hz(p) * sig.sample_rate;  // mW per sample
    const double ase_amp = std::sqrt(ase_var);

    SampledSignal out;
    out.sample_rate = sig.sample_rate;
    out.center_offset = sig.center_offset;
    out.samples.resize(sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i)
        out.samples[i] = gain * sig.samples[i] + ase_amp * rng.complex_gaussian();
    return out;
}

namespace {

SampledSignal detect_impl(const SampledSignal& fx, const SampledSignal* fy,
                          const PdParams& p, Rng& rng) {
    fx.validate();
    p.validate();
    if (fy) {
        fy->validate();
        if (fy->size() != fx.size() || fy->sample_rate != fx.sample_rate)
            throw std::invalid_argument("photodetect: polarization tracks mismatch");
    }

    const double fs = fx.sample_rate;
    // Thermal: real white noise, single-sided density d [A/rtHz] over
    // [0, fs/2]; amplitudes are kept in mA to match R[A/W] * P[mW].
    const double thermal_sigma = p.thermal_noise_density * 1e3 * std::sqrt(fs / 2.0);

    SampledSignal out;
    out.sample_rate = fs;
    out.center_offset = 0.0;
    out.samples.resize(fx.size());
    for (std::size_t i = 0; i < fx.size(); ++i) {
        double power_mw = std::norm(fx.samples[i]);
        if (fy) power_mw += std::norm(fy->samples[i]);
        double current = p.responsivity * power_mw;  // mA
        if (thermal_sigma > 0.0) current += thermal_sigma * rng.gaussian();
        if (p.include_shot_noise) {
            const double i_amps = p.responsivity * power_mw * 1e-3;
            const double var_a2 = kElectronCharge * i_amps * fs;  // q*I*fs = 2qI * fs/2
            if (var_a2 > 0.0) current += 1e3 * std::sqrt(var_a2) * rng.gaussian();
        }
        out.samples[i] = {current, 0.0};
    }
    return out;
}

} // namespace

SampledSignal photodetect(const SampledSignal& field, const PdParams& p, Rng& rng) {
    return detect_impl(field, nullptr, p, rng);
}

SampledSignal photodetect(const SampledSignal& field_x, const SampledSignal& field_y,
                          const PdParams& p, Rng& rng) {
    return detect_impl(field_x, &field_y, p, rng);
}

} // namespace rofsim
