#include "rofsim/filters.hpp"

#include "rofsim/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace rofsim {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

void FilterProfile::validate() const {
    if (!(bw_3db > 0.0)) throw std::invalid_argument("filter: bw_3db must be > 0");
    if (order < 1) throw std::invalid_argument("filter: order must be >= 1");
}

double FilterProfile::amplitude(double f) const {
    const double u = 2.0 * (f - center) / bw_3db;
    const double expo = -0.5 * kLn2 * std::pow(u * u, order);
    return std::pow(10.0, -insertion_loss / 20.0) * std::exp(expo);
}

double FilterProfile::power_db(double f) const {
    const double u = 2.0 * (f - center) / bw_3db;
    return -insertion_loss - 10.0 / std::log(10.0) * kLn2 * std::pow(u * u, order);
}

const FilterProfile& DemuxPlan::port(const std::string& name) const {
    for (const auto& p : ports)
        if (p.name == name) return p.profile;
    throw std::out_of_range("demux: no port named " + name);
}

SampledSignal apply_filter(const SampledSignal& sig, const FilterProfile& f) {
    sig.validate();
    f.validate();

    auto spec = fft::forward_copy(sig.samples);
    const std::size_t n = spec.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double freq = fft::bin_frequency(k, n, sig.sample_rate) + sig.center_offset;
        spec[k] *= f.amplitude(freq);
    }
    fft::inverse(spec);

    SampledSignal out;
    out.samples = std::move(spec);
    out.sample_rate = sig.sample_rate;
    out.center_offset = sig.center_offset;
    return out;
}

double cascade_amplitude(const std::vector<FilterProfile>& filters, double f) {
    double h = 1.0;
    for (const auto& flt : filters) h *= flt.amplitude(f);
    return h;
}

double cascade_3db_width(const std::vector<FilterProfile>& filters, double center_hint) {
    if (filters.empty()) throw std::invalid_argument("cascade: no filters");
    for (const auto& f : filters) f.validate();

    const double peak = cascade_amplitude(filters, center_hint);
    if (!(peak > 0.0)) throw std::domain_error("cascade: zero response at center hint");
    const double target = peak / std::sqrt(2.0);  // -3.01 dB in power

    // Bracket each half-width, then bisect.
    double span = 0.0;
    for (const auto& f : filters) span = std::max(span, std::abs(f.center - center_hint) + f.bw_3db);

    auto half_width = [&](double direction) {
        double lo = 0.0;
        double hi = span;
        while (cascade_amplitude(filters, center_hint + direction * hi) > target) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (cascade_amplitude(filters, center_hint + direction * mid) > target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    return half_width(+1.0) + half_width(-1.0);
}

DemuxPlan build_demux(const Allocation& alloc, double coherent_occupied,
                      const DemuxSettings& settings) {
    if (!alloc.feasible)
        throw std::invalid_argument("demux: allocation is not feasible");
    if (settings.guard_trim < 0.0)
        throw std::invalid_argument("demux: guard_trim must be >= 0");

    const double arof_width = alloc.free_per_side - settings.guard_trim;
    if (!(arof_width > 0.0))
        throw std::invalid_argument("demux: guard_trim leaves no ARoF passband");

    auto port = [&](const std::string& name, double center, double width) {
        DemuxPlan::Port p;
        p.name = name;
        p.profile.center = center;
        p.profile.bw_3db = width;
        p.profile.order = settings.order;
        p.profile.insertion_loss = settings.insertion_loss_db;
        return p;
    };

    DemuxPlan plan;
    plan.ports.push_back(port("arof_low", alloc.carrier_offset_low, arof_width));
    plan.ports.push_back(port("coherent", 0.0, coherent_occupied));
    plan.ports.push_back(port("arof_high", alloc.carrier_offset_high, arof_width));

    // Nominal edges (center +- width/2) must not overlap beyond tolerance.
    for (std::size_t i = 0; i + 1 < plan.ports.size(); ++i) {
        const auto& a = plan.ports[i].profile;
        const auto& b = plan.ports[i + 1].profile;
        const double gap = (b.center - b.bw_3db / 2.0) - (a.center + a.bw_3db / 2.0);
        if (gap < -settings.overlap_tol)
            throw std::invalid_argument("demux: ports " + plan.ports[i].name + " and " +
                                        plan.ports[i + 1].name + " overlap");
    }
    return plan;
}

} // namespace rofsim
