#ifndef ROFSIM_PLANNER_HPP
#define ROFSIM_PLANNER_HPP

#include <vector>

namespace rofsim {

/// One ROADM channel carrying a coherent service, with the IF-OFDM
/// signal family that wants to live in the leftover spectrum.
struct ChannelPlan {
    double channel_width = 0.0;      // Hz, ROADM grid slot (50/100 GHz presets)
    double coherent_occupied = 0.0;  // Hz
    double if_freq = 0.0;            // Hz, electrical carrier of the OFDM signal
    double arof_bw = 0.0;            // Hz, occupied OFDM bandwidth
    double guard = 0.0;              // Hz, minimum margin kept at both band edges

    void validate() const;
};

/// Result of placing the two dual-sideband carriers in the side regions.
/// Infeasibility is a value, not an error, so sweeps can continue past it.
struct Allocation {
    bool feasible = false;
    double carrier_offset_low = 0.0;   // Hz, negative
    double carrier_offset_high = 0.0;  // Hz, positive
    double free_per_side = 0.0;        // Hz
    double span_per_arof = 0.0;        // Hz, full dual-sideband extent
    double occupancy_ratio = 0.0;      // arof_bw / channel_width
    double margin_deficit = 0.0;       // Hz, > 0 quantifies the violated margin
};

/// Feasibility table over a bandwidth family plus the closed-form maximum.
struct FeasibilityTable {
    std::vector<double> bandwidths;     // Hz
    std::vector<Allocation> rows;
    double max_feasible_bw = 0.0;       // Hz, closed form
};

/// Center each carrier in its side region; the dual-sideband extent must
/// fit between the coherent edge plus guard and the channel edge minus
/// guard.
Allocation allocate(const ChannelPlan& plan);

FeasibilityTable sweep_feasibility(const ChannelPlan& base,
                                   const std::vector<double>& arof_bandwidths);

} // namespace rofsim

#endif
