#ifndef PLATOON_SHIELD_FUSION_HPP
#define PLATOON_SHIELD_FUSION_HPP

#include <optional>
#include <span>

#include "platoon_shield/v2v_link.hpp"

namespace platoon_shield::fusion {

using v2v::ChannelModel;
using v2v::IndexSet;

/// Result of fusing one frame of N received copies.
struct FusionOutcome {
    double u_hat = 0.0;                // fused command estimate
    IndexSet sigma;                    // selected subset, cardinality N - q
    double pi_sigma = 0.0;             // spread of the winning subset
    std::optional<double> error_bound; // 3 * ||nu||_inf certificate, when the bound is known
};

/// Mean of the values indexed by the (1-based) subset.
double subset_average(std::span<const double> values, const IndexSet& subset);

/// Largest deviation of a subset member from the subset mean.
double subset_spread(std::span<const double> values, const IndexSet& subset);

/// The transmitted command can be uniquely recovered from N copies under
/// q attacked channels iff q < N/2.
bool is_reconstructible(int n, int q);

/// Worst-case noise bound across channels, max_j ||nu_j||_inf.
double noise_bound_inf(std::span<const ChannelModel> channels);

/// Subset-averaging reconstruction: enumerates every subset of cardinality
/// N - q, picks the one with the smallest spread (ties broken toward the
/// lexicographically smallest subset) and returns its mean. With at most q
/// attacked channels the estimate is within 3 * ||nu||_inf of the true
/// command, independent of the attack magnitude.
///
/// Throws ReconstructibilityError when q >= N/2. The reported error_bound
/// is a certificate only; the estimate is never clipped by it.
FusionOutcome fuse(std::span<const double> values, int q,
                   std::optional<double> known_noise_inf = std::nullopt);

}  // namespace platoon_shield::fusion

#endif
