#ifndef PLATOON_SHIELD_ATTACK_MONITOR_HPP
#define PLATOON_SHIELD_ATTACK_MONITOR_HPP

#include <span>
#include <utility>
#include <vector>

#include "platoon_shield/fusion.hpp"
#include "platoon_shield/rng.hpp"
#include "platoon_shield/v2v_link.hpp"

namespace platoon_shield::monitor {

using v2v::ChannelModel;
using v2v::IndexSet;

/// How the isolation step picks its trusted reference channel out of the
/// fusion-selected subset.
enum class ReferenceRule {
    SmallestIndex,  // deterministic, reproducible traces
    SeededRandom,   // uniformly from sigma, needs an Rng
};

struct MonitorThresholds {
    std::vector<double> detection;       // ||nu||_inf + ||nu_j||_inf per channel
    std::vector<double> isolation_base;  // ||nu_j||_inf per channel

    static MonitorThresholds from_channels(std::span<const ChannelModel> channels);
};

/// Verdict for one frame. Detection flags are diagnostic per-channel
/// residual exceedances; the isolated set is the monitor's actual attack
/// claim and never contains the reference channel.
struct MonitorVerdict {
    bool detected = false;
    IndexSet flagged_by_detection;
    IndexSet isolated;
    int reference_channel = 0;
};

/// Per-channel detection thresholds ||nu||_inf + ||nu_j||_inf: the largest
/// residual against the all-channel mean that noise alone can produce.
std::vector<double> detection_thresholds(std::span<const ChannelModel> channels);

/// Flags every channel whose deviation from the all-channel mean exceeds
/// its threshold. Returns (any flagged, flagged set).
std::pair<bool, IndexSet> detect(std::span<const double> values, std::span<const double> thresholds);

/// Full monitor pass: detection against the channel mean plus isolation
/// against a reference channel drawn from sigma (the fusion-selected
/// subset). Channel j is isolated when |U_ref - U_j| exceeds the combined
/// noise bounds of the two channels. rng is only read under SeededRandom.
MonitorVerdict isolate(std::span<const double> values, const IndexSet& sigma,
                       std::span<const ChannelModel> channels,
                       ReferenceRule rule = ReferenceRule::SmallestIndex, Rng* rng = nullptr);

}  // namespace platoon_shield::monitor

#endif
