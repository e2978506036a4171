#include "platoon_shield/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "platoon_shield/errors.hpp"

namespace platoon_shield::fusion {

namespace {

void check_subset(std::span<const double> values, const IndexSet& subset) {
    if (subset.empty()) throw DomainError("subset ops: empty channel subset");
    if (!std::is_sorted(subset.begin(), subset.end()) ||
        std::adjacent_find(subset.begin(), subset.end()) != subset.end() || subset.front() < 1 ||
        subset.back() > static_cast<int>(values.size())) {
        throw DomainError("subset ops: subset must be ascending 1-based indices into the frame");
    }
}

// Advances an ascending k-combination of {1..n} to its lexicographic
// successor; returns false after the last one.
bool next_combination(IndexSet& combo, int n) {
    const int k = static_cast<int>(combo.size());
    for (int i = k - 1; i >= 0; --i) {
        if (combo[i] < n - (k - 1 - i)) {
            ++combo[i];
            for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

double subset_average(std::span<const double> values, const IndexSet& subset) {
    check_subset(values, subset);
    double sum = 0.0;
    for (int j : subset) sum += values[j - 1];
    return sum / static_cast<double>(subset.size());
}

double subset_spread(std::span<const double> values, const IndexSet& subset) {
    const double mean = subset_average(values, subset);
    double spread = 0.0;
    for (int j : subset) spread = std::max(spread, std::abs(mean - values[j - 1]));
    return spread;
}

bool is_reconstructible(int n, int q) {
    return q >= 0 && 2 * q < n;
}

double noise_bound_inf(std::span<const ChannelModel> channels) {
    double bound = 0.0;
    for (const ChannelModel& ch : channels) bound = std::max(bound, ch.noise_bound);
    return bound;
}

FusionOutcome fuse(std::span<const double> values, int q, std::optional<double> known_noise_inf) {
    const int n = static_cast<int>(values.size());
    if (n < 1) throw DomainError("fuse: empty frame");
    if (q < 0) throw DomainError("fuse: q must be >= 0");
    if (!is_reconstructible(n, q)) {
        throw ReconstructibilityError("fuse: q = " + std::to_string(q) + " >= N/2 with N = " +
                                      std::to_string(n) + "; the command is not reconstructible");
    }

    const int subset_size = n - q;
    IndexSet subset(subset_size);
    for (int i = 0; i < subset_size; ++i) subset[i] = i + 1;

    FusionOutcome best;
    best.sigma = subset;
    best.pi_sigma = subset_spread(values, subset);
    // Strict < keeps the first (lexicographically smallest) minimizer.
    while (next_combination(subset, n)) {
        const double spread = subset_spread(values, subset);
        if (spread < best.pi_sigma) {
            best.pi_sigma = spread;
            best.sigma = subset;
        }
    }
    best.u_hat = subset_average(values, best.sigma);
    if (known_noise_inf) best.error_bound = 3.0 * *known_noise_inf;
    return best;
}

}  // namespace platoon_shield::fusion
