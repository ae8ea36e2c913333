#ifndef ROFSIM_FILTERS_HPP
#define ROFSIM_FILTERS_HPP

#include "rofsim/planner.hpp"
#include "rofsim/signal.hpp"

#include <string>
#include <vector>

namespace rofsim {

/// Super-Gaussian passband. Amplitude response
///   H(f) = 10^(-IL/20) * exp(-ln2/2 * (2(f-center)/bw_3db)^(2*order)),
/// so |H(center +- bw_3db/2)|^2 sits exactly 3 dB under the passband.
/// Phase is zero (real H); group-delay ripple of real hardware is not
/// modelled.
struct FilterProfile {
    double center = 0.0;          // Hz, offset from channel center
    double bw_3db = 0.0;          // Hz
    int order = 1;                // super-Gaussian exponent parameter
    double insertion_loss = 0.0;  // dB

    double amplitude(double f) const;
    double power_db(double f) const;
    void validate() const;
};

/// Named WSS output ports, one passband each.
struct DemuxPlan {
    struct Port {
        std::string name;
        FilterProfile profile;
    };
    std::vector<Port> ports;

    const FilterProfile& port(const std::string& name) const;
};

/// Frequency-domain multiplication by H(f). Deterministic, linear,
/// power-non-increasing for IL >= 0.
SampledSignal apply_filter(const SampledSignal& sig, const FilterProfile& f);

/// Pointwise product of the individual responses at frequency f.
double cascade_amplitude(const std::vector<FilterProfile>& filters, double f);

/// Measured 3 dB full width of the cascaded response, by bisection on
/// each side of `center_hint`. For k identical filters of order n and
/// width B this lands on B * k^(-1/(2n)).
double cascade_3db_width(const std::vector<FilterProfile>& filters,
                         double center_hint = 0.0);

/// WSS demux for one ROADM channel: three ports (arof_low, coherent,
/// arof_high) centered on each service. ARoF port widths are the free
/// side region minus `guard_trim`; the coherent port width is the
/// occupied width. Ports may abut; overlap beyond `overlap_tol` is an
/// error.
struct DemuxSettings {
    int order = 4;
    double insertion_loss_db = 2.0;
    double guard_trim = 0.0;      // Hz removed from each ARoF port width
    double overlap_tol = 0.0;     // Hz of tolerated nominal-edge overlap
};

DemuxPlan build_demux(const Allocation& alloc, double coherent_occupied,
                      const DemuxSettings& settings);

} // namespace rofsim

#endif
