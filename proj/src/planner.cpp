#include "rofsim/planner.hpp"

#include <stdexcept>

namespace rofsim {

void ChannelPlan::validate() const {
    if (!(channel_width > 0.0)) throw std::invalid_argument("plan: channel_width must be > 0");
    if (coherent_occupied > channel_width)
        throw std::invalid_argument("plan: coherent signal wider than its channel");
    if (!(arof_bw > 0.0)) throw std::invalid_argument("plan: arof_bw must be > 0");
    if (!(if_freq > arof_bw / 2.0))
        throw std::invalid_argument("plan: if_freq must exceed arof_bw/2 (baseband fold-over)");
    if (guard < 0.0) throw std::invalid_argument("plan: guard must be >= 0");
}

Allocation allocate(const ChannelPlan& plan) {
    plan.validate();

    Allocation a;
    a.free_per_side = (plan.channel_width - plan.coherent_occupied) / 2.0;
    a.span_per_arof = 2.0 * (plan.if_freq + plan.arof_bw / 2.0);
    a.occupancy_ratio = plan.arof_bw / plan.channel_width;

    // Carrier at the middle of the side region; the DSB extent
    // [|carrier| - span/2, |carrier| + span/2] then fits iff
    // span + 2*guard <= free_per_side.
    const double carrier = plan.coherent_occupied / 2.0 + a.free_per_side / 2.0;
    a.carrier_offset_low = -carrier;
    a.carrier_offset_high = carrier;

    const double required = a.span_per_arof + 2.0 * plan.guard;
    a.feasible = required <= a.free_per_side;
    a.margin_deficit = a.feasible ? 0.0 : required - a.free_per_side;
    return a;
}

FeasibilityTable sweep_feasibility(const ChannelPlan& base,
                                   const std::vector<double>& arof_bandwidths) {
    if (arof_bandwidths.empty())
        throw std::invalid_argument("sweep_feasibility: empty bandwidth list");

    FeasibilityTable table;
    table.bandwidths = arof_bandwidths;
    table.rows.reserve(arof_bandwidths.size());
    for (double bw : arof_bandwidths) {
        ChannelPlan p = base;
        p.arof_bw = bw;
        table.rows.push_back(allocate(p));
    }

    const double free_per_side = (base.channel_width - base.coherent_occupied) / 2.0;
    table.max_feasible_bw =
        2.0 * (free_per_side / 2.0 - base.guard - base.if_freq);
    return table;
}

} // namespace rofsim
