#ifndef PLATOON_SHIELD_V2V_LINK_HPP
#define PLATOON_SHIELD_V2V_LINK_HPP

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "platoon_shield/rng.hpp"

namespace platoon_shield::v2v {

/// Channel indices are 1-based throughout (channel 1 .. N), matching the
/// serialized traces.
using IndexSet = std::vector<int>;  // ascending, unique

enum class NoiseKind {
    Uniform,            // U(-bound, bound)
    TruncatedGaussian,  // N(0, (bound/2)^2) resampled until inside [-bound, bound]
    Zero,
};

/// One communication channel: bounded additive perturbation covering every
/// network-induced imperfection (noise, delays, dropouts, quantization).
struct ChannelModel {
    double noise_bound = 0.0;  // ||nu||_inf for this channel, >= 0
    NoiseKind kind = NoiseKind::Uniform;

    /// Sampled value always satisfies |nu| <= noise_bound.
    double sample(Rng& rng) const;
};

enum class AttackKind {
    None,
    RandomSingleChannel,  // one uniformly chosen channel per step
    FixedSet,             // the configured channel set, every step
    RoundRobin,           // q consecutive channels, rotating with k
    Ambiguity,            // pairwise-indistinguishable injection, needs q >= N/2
    CustomSchedule,       // explicit step -> channel-set map
};

struct GaussianSpec {
    double mean = 0.0;
    double stddev = 5.0;
};

/// Attack behaviour of one link. The realized compromised set W(k) has
/// cardinality <= q for all kinds except Ambiguity (which deliberately
/// violates the q < N/2 regime).
struct AttackPolicy {
    AttackKind kind = AttackKind::None;
    int q = 0;
    GaussianSpec magnitude;       // injected values are NOT truncated
    IndexSet fixed_channels;      // FixedSet
    std::map<long, IndexSet> schedule;  // CustomSchedule; missing step = no attack

    /// Compromised channel set at step k for n channels.
    IndexSet compromised_set(long k, int n, Rng& rng) const;

    void validate(int n) const;
};

/// The N received copies of one transmitted command, with ground truth kept
/// alongside for evaluation only; the receiver-side algorithms never read
/// the ground-truth fields.
struct ChannelFrame {
    std::vector<double> values;    // values[j-1] = u + nu_j + eta_j
    IndexSet true_attack_support;  // evaluation only
    double true_command = 0.0;     // evaluation only
};

/// Sends u through all channels at step k: per-channel bounded noise plus
/// attacker injections on the policy's compromised set. Same seed, same
/// frame.
ChannelFrame transmit(double u, std::span<const ChannelModel> channels, const AttackPolicy& policy,
                      long k, Rng& rng);

/// Builds the two-command ambiguity construction: attack vectors for two
/// different true commands u and u_bar whose received frames coincide
/// element-wise exactly. Requires q >= N/2, card(W) = card(W_bar) = q and
/// W union W_bar = {1..N}; possible exactly when reconstruction must fail.
std::pair<ChannelFrame, ChannelFrame> ambiguity_attack_pair(double u, double u_bar, int n, int q,
                                                            const IndexSet& w, const IndexSet& w_bar,
                                                            std::span<const double> noise);

}  // namespace platoon_shield::v2v

#endif
