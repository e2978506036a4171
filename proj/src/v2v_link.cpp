#include "platoon_shield/v2v_link.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "platoon_shield/errors.hpp"

namespace platoon_shield::v2v {

double ChannelModel::sample(Rng& rng) const {
    if (noise_bound < 0.0 || !std::isfinite(noise_bound)) throw ConfigError("ChannelModel: noise_bound must be >= 0");
    switch (kind) {
        case NoiseKind::Zero:
            return 0.0;
        case NoiseKind::Uniform:
            return rng.uniform(-noise_bound, noise_bound);
        case NoiseKind::TruncatedGaussian: {
            if (noise_bound == 0.0) return 0.0;
            for (int tries = 0; tries < 128; ++tries) {
                const double x = rng.normal(0.0, noise_bound / 2.0);
                if (std::abs(x) <= noise_bound) return x;
            }
            return 0.0;  // astronomically unlikely at stddev = bound/2
        }
    }
    throw DomainError("ChannelModel: unknown noise kind");
}

namespace {

bool valid_index_set(const IndexSet& s, int n) {
    if (!std::is_sorted(s.begin(), s.end())) return false;
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
    return s.empty() || (s.front() >= 1 && s.back() <= n);
}

}  // namespace

void AttackPolicy::validate(int n) const {
    if (q < 0) throw ConfigError("AttackPolicy: q must be >= 0");
    if (q > n) {
        throw ConfigError("AttackPolicy: q = " + std::to_string(q) + " exceeds channel count " +
                          std::to_string(n));
    }
    if (!(magnitude.stddev >= 0.0) || !std::isfinite(magnitude.stddev) || !std::isfinite(magnitude.mean)) {
        throw ConfigError("AttackPolicy: bad magnitude distribution");
    }
    if (kind == AttackKind::FixedSet) {
        if (!valid_index_set(fixed_channels, n))
            throw ConfigError("AttackPolicy: fixed_channels must be ascending 1-based indices <= N");
        if (static_cast<int>(fixed_channels.size()) > q)
            throw ConfigError("AttackPolicy: fixed_channels larger than q");
    }
    if (kind == AttackKind::CustomSchedule) {
        for (const auto& [step, set] : schedule) {
            if (!valid_index_set(set, n) || static_cast<int>(set.size()) > q)
                throw ConfigError("AttackPolicy: schedule entry at step " + std::to_string(step) +
                                  " is not a valid channel set of size <= q");
        }
    }
    if (kind == AttackKind::Ambiguity && 2 * q < n) {
        throw ConfigError("AttackPolicy: ambiguity attacks need q >= N/2");
    }
}

IndexSet AttackPolicy::compromised_set(long k, int n, Rng& rng) const {
    switch (kind) {
        case AttackKind::None:
            return {};
        case AttackKind::RandomSingleChannel:
            return {rng.uniform_int(1, n)};
        case AttackKind::FixedSet:
            return fixed_channels;
        case AttackKind::RoundRobin: {
            IndexSet set;
            for (int j = 0; j < q; ++j) set.push_back(static_cast<int>((k + j) % n) + 1);
            std::sort(set.begin(), set.end());
            return set;
        }
        case AttackKind::CustomSchedule: {
            const auto it = schedule.find(k);
            return it == schedule.end() ? IndexSet{} : it->second;
        }
        case AttackKind::Ambiguity: {
            IndexSet set;
            for (int j = 1; j <= q; ++j) set.push_back(j);
            return set;
        }
    }
    throw DomainError("AttackPolicy: unknown attack kind");
}

ChannelFrame transmit(double u, std::span<const ChannelModel> channels, const AttackPolicy& policy,
                      long k, Rng& rng) {
    const int n = static_cast<int>(channels.size());
    if (n < 1) throw ConfigError("transmit: need at least one channel");
    if (!std::isfinite(u)) throw DomainError("transmit: non-finite command");
    policy.validate(n);

    ChannelFrame frame;
    frame.true_command = u;
    frame.values.resize(channels.size());
    for (int j = 0; j < n; ++j) frame.values[j] = u + channels[j].sample(rng);

    if (policy.kind == AttackKind::Ambiguity) {
        // Inject the eta of an ambiguity pair against a ghost command drawn
        // from the magnitude distribution; the frame a receiver would see
        // for that ghost command is identical to this one.
        const double ghost = u + rng.normal(policy.magnitude.mean, policy.magnitude.stddev);
        IndexSet w = policy.compromised_set(k, n, rng);
        IndexSet w_bar;
        for (int j = n - policy.q + 1; j <= n; ++j) w_bar.push_back(j);
        std::vector<double> noise(frame.values.size());
        for (int j = 0; j < n; ++j) noise[j] = frame.values[j] - u;
        auto [attacked, ignored] = ambiguity_attack_pair(u, ghost, n, policy.q, w, w_bar, noise);
        frame.values = std::move(attacked.values);
        frame.true_attack_support = std::move(w);
        return frame;
    }

    frame.true_attack_support = policy.compromised_set(k, n, rng);
    for (int j : frame.true_attack_support) {
        frame.values[j - 1] += rng.normal(policy.magnitude.mean, policy.magnitude.stddev);
    }
    return frame;
}

std::pair<ChannelFrame, ChannelFrame> ambiguity_attack_pair(double u, double u_bar, int n, int q,
                                                            const IndexSet& w, const IndexSet& w_bar,
                                                            std::span<const double> noise) {
    if (n < 1) throw ConfigError("ambiguity_attack_pair: need at least one channel");
    if (2 * q < n) throw ConfigError("ambiguity_attack_pair: requires q >= N/2");
    if (static_cast<int>(w.size()) != q || static_cast<int>(w_bar.size()) != q)
        throw ConfigError("ambiguity_attack_pair: card(W) and card(W_bar) must equal q");
    if (!valid_index_set(w, n) || !valid_index_set(w_bar, n))
        throw ConfigError("ambiguity_attack_pair: channel sets must be ascending 1-based indices <= N");
    if (static_cast<int>(noise.size()) != n) throw ConfigError("ambiguity_attack_pair: need one noise value per channel");

    IndexSet all_channels;
    std::set_union(w.begin(), w.end(), w_bar.begin(), w_bar.end(), std::back_inserter(all_channels));
    if (static_cast<int>(all_channels.size()) != n)
        throw ConfigError("ambiguity_attack_pair: W union W_bar must cover all channels");

    ChannelFrame frame;
    ChannelFrame frame_bar;
    frame.true_command = u;
    frame_bar.true_command = u_bar;
    frame.true_attack_support = w;
    frame_bar.true_attack_support = w_bar;
    frame.values.resize(noise.size());
    frame_bar.values.resize(noise.size());

    // The received value is computed once per channel and shared, so the two
    // frames coincide bit-exactly; the injected eta is implicit in it.
    //   j in W_bar only: eta = 0,           eta_bar = u - u_bar -> u + nu_j
    //   j in W only:     eta = u_bar - u,   eta_bar = 0         -> u_bar + nu_j
    //   j in both:       eta = u_bar,       eta_bar = u         -> u + u_bar + nu_j
    for (int j = 1; j <= n; ++j) {
        const bool in_w = std::binary_search(w.begin(), w.end(), j);
        const bool in_w_bar = std::binary_search(w_bar.begin(), w_bar.end(), j);
        double received;
        if (in_w && in_w_bar) {
            received = (u + u_bar) + noise[j - 1];
        } else if (in_w) {
            received = u_bar + noise[j - 1];
        } else {  // in_w_bar only
            received = u + noise[j - 1];
        }
        frame.values[j - 1] = received;
        frame_bar.values[j - 1] = received;
    }
    return {std::move(frame), std::move(frame_bar)};
}

}  // namespace platoon_shield::v2v
