#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gqito/common.hpp"

namespace gqito {

/// Intraday log-price panel: n_days blocks of m+1 ticks on the uniform grid
/// k/m, k = 0..m (day open through day close). Simulated panels duplicate the
/// day boundary (close of day i equals open of day i+1); ingested panels may
/// carry real overnight gaps.
///
/// `x` holds clean (efficient) log prices, `y` the observed ones; before
/// microstructure noise is added, and for ingested data, y == x.
struct TickPanel {
    int n_days = 0;
    int m = 0;  // intraday increments per day; m+1 ticks stored per day

    std::vector<double> x;  // size n_days * (m + 1)
    std::vector<double> y;  // same layout as x

    // Simulation truth; empty for ingested panels.
    std::vector<double> spot_var_open;  // day-open spot variance, size n_days
    std::vector<double> z_true;         // day martingale return sum_i sigma dB, size n_days
    // true_iv[j-1][i*j + w]: integrated variance of window w (0-based) of day
    // i at horizon j; windows partition each day, so horizons are consistent
    // by construction.
    std::array<std::vector<double>, kMaxHorizon> true_iv;

    std::uint64_t seed = 0;
    bool has_truth = false;
    bool has_noise = false;
    double noise_sd = 0.0;
    std::int64_t floor_hits = 0;    // variance-floor engagements during simulation
    std::int64_t total_steps = 0;   // Euler steps taken
    std::vector<std::string> warnings;

    std::size_t tick_index(int day, int k) const {
        return static_cast<std::size_t>(day) * (m + 1) + k;
    }
    double open(int day) const { return y[tick_index(day, 0)]; }
    double close(int day) const { return y[tick_index(day, m)]; }

    /// Shape invariants; throws DomainError when violated.
    void validate() const;
};

/// Write the panel as CSV with header
///   day,tick_time,clean_logprice,obs_logprice
/// one row per stored tick, tick_time = k/m, every double at 17 significant
/// digits so ingest_ticks restores values bit-exactly.
void export_panel_csv(const TickPanel& panel, const std::string& path);

/// Write simulation truth as long-format CSV with header
///   day,horizon,window,field,value
/// where field is true_iv (per window, horizons 1..6), or spot_var_open /
/// z_true (per day, horizon and window 0). Only valid when panel.has_truth.
void export_truth_csv(const TickPanel& panel, const std::string& path);

/// Read a tick panel from CSV. Two layouts are accepted, detected from the
/// header line:
///   day,tick_time,clean_logprice,obs_logprice   (export_panel_csv round trip)
///   day,time,price                              (external data; price > 0,
///                                                stored as log, x == y)
/// Days must be contiguous starting at 0 or 1, each with the same tick count
/// (m+1 rows), times strictly increasing within a day. Any malformed row
/// raises ConfigError naming the 1-based line number.
TickPanel ingest_ticks(const std::string& path);

}  // namespace gqito
