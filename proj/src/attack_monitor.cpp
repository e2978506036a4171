#include "platoon_shield/attack_monitor.hpp"

#include <algorithm>
#include <cmath>

#include "platoon_shield/errors.hpp"

namespace platoon_shield::monitor {

MonitorThresholds MonitorThresholds::from_channels(std::span<const ChannelModel> channels) {
    MonitorThresholds t;
    t.detection = detection_thresholds(channels);
    t.isolation_base.reserve(channels.size());
    for (const ChannelModel& ch : channels) t.isolation_base.push_back(ch.noise_bound);
    return t;
}

std::vector<double> detection_thresholds(std::span<const ChannelModel> channels) {
    const double worst = fusion::noise_bound_inf(channels);
    std::vector<double> thresholds;
    thresholds.reserve(channels.size());
    for (const ChannelModel& ch : channels) thresholds.push_back(worst + ch.noise_bound);
    return thresholds;
}

std::pair<bool, IndexSet> detect(std::span<const double> values, std::span<const double> thresholds) {
    if (values.size() != thresholds.size()) throw DimensionError("detect: one threshold per channel required");
    if (values.empty()) throw DomainError("detect: empty frame");

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());

    IndexSet flagged;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (std::abs(mean - values[j]) > thresholds[j]) flagged.push_back(static_cast<int>(j) + 1);
    }
    const bool any = !flagged.empty();
    return {any, std::move(flagged)};
}

MonitorVerdict isolate(std::span<const double> values, const IndexSet& sigma,
                       std::span<const ChannelModel> channels, ReferenceRule rule, Rng* rng) {
    if (values.size() != channels.size()) throw DimensionError("isolate: one channel model per value required");
    if (sigma.empty()) throw DomainError("isolate: empty fusion subset");
    if (sigma.front() < 1 || sigma.back() > static_cast<int>(values.size()))
        throw DomainError("isolate: sigma indices out of range");

    MonitorVerdict verdict;
    const auto thresholds = detection_thresholds(channels);
    std::tie(verdict.detected, verdict.flagged_by_detection) = detect(values, thresholds);

    int reference = sigma.front();
    if (rule == ReferenceRule::SeededRandom) {
        if (rng == nullptr) throw DomainError("isolate: SeededRandom rule needs an Rng");
        reference = sigma[static_cast<std::size_t>(rng->uniform_int(0, static_cast<int>(sigma.size()) - 1))];
    }
    verdict.reference_channel = reference;

    const double ref_value = values[reference - 1];
    const double ref_bound = channels[reference - 1].noise_bound;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (std::abs(ref_value - values[j]) > ref_bound + channels[j].noise_bound) {
            verdict.isolated.push_back(static_cast<int>(j) + 1);
        }
    }
    return verdict;
}

}  // namespace platoon_shield::monitor
