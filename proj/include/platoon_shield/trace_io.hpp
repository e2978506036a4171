#ifndef PLATOON_SHIELD_TRACE_IO_HPP
#define PLATOON_SHIELD_TRACE_IO_HPP

#include <ostream>
#include <string>
#include <vector>

#include "platoon_shield/sim_runner.hpp"

namespace platoon_shield::io {

/// Fixed column order:
///   k, t, vehicle, e, v, a, u, u_hat, fusion_err, sigma, detected,
///   isolated, true_support
/// One row per step per vehicle (vehicle 0 is the virtual leader). Sets are
/// |-joined 1-based indices, `-` when empty or not applicable; floats carry
/// 9 significant digits. Output is byte-stable for a fixed (config, seed).
void write_trace_csv(const sim::SimTrace& trace, std::ostream& out);

/// `key = value` lines; unavailable rates print as n/a.
void write_metrics(const sim::Metrics& metrics, const sim::SimTrace& trace, std::ostream& out);

/// Two-column `t value` files for plotting: fused-vs-true command per link,
/// velocity and tracking error per vehicle, plus a gnuplot script. Returns
/// the file names written into out_dir.
std::vector<std::string> write_plot_data(const sim::SimTrace& trace, const std::string& out_dir);

}  // namespace platoon_shield::io

#endif
