#include "rofsim/signal.hpp"

#include "rofsim/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rofsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kPsdFloorDb = -400.0;  // stands in for log10(0)
}

double SampledSignal::power_mw() const {
    double acc = 0.0;
    for (const auto& s : samples) acc += std::norm(s);
    return acc / static_cast<double>(samples.size());
}

void SampledSignal::validate() const {
    if (samples.empty()) throw std::invalid_argument("signal: empty sample buffer");
    if (!(sample_rate > 0.0)) throw std::invalid_argument("signal: sample_rate must be > 0");
    for (const auto& s : samples) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw std::invalid_argument("signal: non-finite sample");
    }
}

double SpectrumEstimate::integrated_power_mw() const {
    if (frequencies.size() < 2) return 0.0;
    const double df = frequencies[1] - frequencies[0];
    double acc = 0.0;
    for (double p : psd) acc += std::pow(10.0, p / 10.0);
    return acc * df;
}

double SpectrumEstimate::psd_at(double f) const {
    auto it = std::lower_bound(frequencies.begin(), frequencies.end(), f);
    if (it == frequencies.end()) return psd.back();
    std::size_t idx = static_cast<std::size_t>(it - frequencies.begin());
    if (idx > 0 && f - frequencies[idx - 1] < frequencies[idx] - f) --idx;
    return psd[idx];
}

double band_power_fraction(const SampledSignal& sig, double f_lo, double f_hi) {
    sig.validate();
    auto spec = fft::forward_copy(sig.samples);
    const std::size_t n = spec.size();
    double total = 0.0;
    double band = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double p = std::norm(spec[k]);
        total += p;
        const double f = fft::bin_frequency(k, n, sig.sample_rate);
        if (f >= f_lo && f < f_hi) band += p;
    }
    return total > 0.0 ? band / total : 0.0;
}

SampledSignal frequency_shift(const SampledSignal& sig, double delta, double overflow_tol) {
    sig.validate();
    if (std::abs(delta) >= sig.sample_rate / 2.0)
        throw std::invalid_argument("frequency_shift: |delta| must be below Nyquist");
    if (delta == 0.0) return sig;

    // Power that would wrap past the Nyquist edge after the shift.
    const double nyq = sig.sample_rate / 2.0;
    double wrapped = (delta > 0.0) ? band_power_fraction(sig, nyq - delta, nyq)
                                   : band_power_fraction(sig, -nyq, -nyq - delta);
    if (wrapped > overflow_tol)
        throw std::domain_error("frequency_shift: occupied band would leave the Nyquist window");

    SampledSignal out;
    out.sample_rate = sig.sample_rate;
    out.center_offset = sig.center_offset;
    out.samples.resize(sig.size());
    const double w = 2.0 * kPi * delta / sig.sample_rate;
    // Recurrence-free phasor: recompute from angle to avoid drift over 2^20 samples.
    for (std::size_t i = 0; i < sig.size(); ++i) {
        const double phase = w * static_cast<double>(i);
        out.samples[i] = sig.samples[i] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return out;
}

SampledSignal resample(const SampledSignal& sig, double new_rate, double alias_tol) {
    sig.validate();
    if (!(new_rate > 0.0)) throw std::invalid_argument("resample: new_rate must be > 0");

    const std::size_t n = sig.size();
    const auto m_exact = static_cast<double>(n) * new_rate / sig.sample_rate;
    const auto m = static_cast<std::size_t>(std::llround(m_exact));
    if (m == 0) throw std::invalid_argument("resample: target rate collapses the record");
    if (std::abs(m_exact - static_cast<double>(m)) > 1e-9 * m_exact)
        throw std::invalid_argument("resample: rate not commensurate with record length");
    if (m == n) {
        SampledSignal same = sig;
        same.sample_rate = new_rate;
        return same;
    }

    if (new_rate < sig.sample_rate) {
        // Power outside the new Nyquist band would fold back in.
        const double nyq_new = new_rate / 2.0;
        const double outside = 1.0 - band_power_fraction(sig, -nyq_new, nyq_new);
        if (outside > alias_tol)
            throw std::domain_error("resample: target rate is below the occupied bandwidth");
    }

    auto spec = fft::forward_copy(sig.samples);
    std::vector<std::complex<double>> out_spec(m, {0.0, 0.0});
    const std::size_t keep = std::min(n, m);
    const std::size_t half_lo = keep / 2;          // nonnegative bins kept
    const std::size_t half_hi = keep - half_lo;    // negative bins kept
    for (std::size_t k = 0; k < half_lo; ++k) out_spec[k] = spec[k];
    for (std::size_t k = 0; k < half_hi; ++k) out_spec[m - 1 - k] = spec[n - 1 - k];

    fft::inverse(out_spec);
    const double scale = static_cast<double>(m) / static_cast<double>(n);
    for (auto& x : out_spec) x *= scale;

    SampledSignal out;
    out.samples = std::move(out_spec);
    out.sample_rate = new_rate;
    out.center_offset = sig.center_offset;
    return out;
}

SampledSignal combine(const std::vector<SampledSignal>& signals,
                      const std::vector<double>& port_loss_db) {
    if (signals.empty()) throw std::invalid_argument("combine: no inputs");
    if (!port_loss_db.empty() && port_loss_db.size() != signals.size())
        throw std::invalid_argument("combine: port loss list must match input count");

    const double rate = signals.front().sample_rate;
    const double offset = signals.front().center_offset;
    std::size_t len = 0;
    for (const auto& s : signals) {
        s.validate();
        if (s.sample_rate != rate)
            throw std::invalid_argument("combine: sample rates differ; resample first");
        if (s.center_offset != offset)
            throw std::invalid_argument("combine: center offsets differ; shift first");
        len = std::max(len, s.size());
    }

    SampledSignal out;
    out.sample_rate = rate;
    out.center_offset = offset;
    out.samples.assign(len, {0.0, 0.0});
    for (std::size_t i = 0; i < signals.size(); ++i) {
        const double gain = port_loss_db.empty() ? 1.0 : std::pow(10.0, -port_loss_db[i] / 20.0);
        const auto& src = signals[i].samples;
        for (std::size_t k = 0; k < src.size(); ++k) out.samples[k] += gain * src[k];
    }
    return out;
}

SpectrumEstimate estimate_psd(const SampledSignal& sig, std::size_t segment_len, double overlap) {
    sig.validate();
    if (segment_len == 0 || segment_len > sig.size())
        throw std::invalid_argument("estimate_psd: segment length exceeds record");
    if (!(overlap >= 0.0 && overlap < 1.0))
        throw std::invalid_argument("estimate_psd: overlap must be in [0, 1)");

    const std::size_t n = segment_len;
    std::vector<double> window(n);
    double win_power = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)));
        win_power += window[i] * window[i];
    }

    const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * (1.0 - overlap))));

    std::vector<double> accum(n, 0.0);
    std::size_t count = 0;
    std::vector<std::complex<double>> seg(n);
    for (std::size_t start = 0; start + n <= sig.size(); start += hop) {
        for (std::size_t i = 0; i < n; ++i) seg[i] = sig.samples[start + i] * window[i];
        fft::forward(seg);
        for (std::size_t i = 0; i < n; ++i) accum[i] += std::norm(seg[i]);
        ++count;
    }

    // Periodogram scaling: P(f) dF summed over bins equals mean-square power.
    const double scale = 1.0 / (static_cast<double>(count) * win_power * sig.sample_rate);

    SpectrumEstimate est;
    est.frequencies.resize(n);
    est.psd.resize(n);
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = (i + half) % n;  // fftshift so the grid increases
        est.frequencies[i] = fft::bin_frequency(k, n, sig.sample_rate) + sig.center_offset;
        const double lin = accum[k] * scale;
        est.psd[i] = lin > 0.0 ? 10.0 * std::log10(lin) : kPsdFloorDb;
    }
    return est;
}

double measure_power_dbm(const SampledSignal& sig) {
    sig.validate();
    const double p = sig.power_mw();
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p);
}

} // namespace rofsim
