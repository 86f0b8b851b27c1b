#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hfm/ingest.hpp"

namespace hfm {

enum class JumpSizeKind { normal, point };

/**
 * Jump-diffusion plus i.i.d. noise. Time is measured in trading days, so `sigma` is the
 * spot volatility per sqrt(day) and `mu` the drift per day; one simulated day maps onto
 * the trading session when ticks are emitted.
 */
struct SimConfig {
    std::size_t n_per_day = 23400;
    std::size_t days = 250;
    double mu = 0.0;
    double sigma = 0.01;

    // Two-state volatility regime: a day-level Markov chain between sigma and sigma_high.
    double sigma_high = 0.0;  // 0 disables the regime
    double regime_switch_prob = 0.0;

    double jump_intensity = 0.0;  ///< expected jumps per day
    JumpSizeKind jump_kind = JumpSizeKind::normal;
    double jump_size = 0.01;                   ///< sd for normal sizes, J for point mass
    std::optional<std::size_t> fixed_jump_count;  ///< overrides the Poisson count when set

    double noise_eta = 0.0;

    /// Planted dependence: sigma_t^2 = sigma^2 + kurt_feedback * sum of J^4 on day t-1.
    double kurt_feedback = 0.0;

    // Per-tick size = 1 + Poisson(volume_rate * (1 + volume_jump_coupling * [day has a jump])).
    double volume_rate = 100.0;
    double volume_jump_coupling = 0.0;

    double initial_price = 100.0;
    int price_decimals = 4;  ///< negative: shortest round-trip decimal
    std::string start_date = "2012-01-03";
    std::uint64_t seed = 42;

    void validate() const;
};

struct Jump {
    std::size_t increment = 0;  ///< 1-based grid increment carrying the jump
    double time = 0.0;          ///< fraction of the day, increment / n
    double size = 0.0;
};

struct SimDay {
    GridPath latent;    ///< X, starting at 0
    GridPath observed;  ///< Y = X + eps
    double sigma = 0.0;
    double true_iv = 0.0;
    double true_qv = 0.0;
    std::vector<Jump> jumps;

    double sum_jump_pow(int p) const;
};

/// Jump schedule of one day, drawn from its own stream.
std::vector<Jump> draw_jumps(const SimConfig& cfg, std::uint64_t day_index);

/// Per-day spot volatility after applying the regime chain and the kurtosis feedback.
std::vector<double> day_sigmas(const SimConfig& cfg);

/**
 * One day on the n_per_day grid. The result depends only on (cfg, day_index, sigma),
 * so days can be generated in any order or in parallel.
 */
SimDay simulate_day(const SimConfig& cfg, std::uint64_t day_index, double sigma);
SimDay simulate_day(const SimConfig& cfg, std::uint64_t day_index);

/// (sum J^3 / QV^{3/2}, sum J^4 / QV^2). Throws std::invalid_argument when true_qv == 0.
std::pair<double, double> theoretical_limits(const SimDay& day);

/// `count` weekdays starting at `start` (YYYY-MM-DD), skipping Saturdays and Sundays.
std::vector<std::string> business_days(const std::string& start, std::size_t count);

/// Calls `visit(day_index, date, day, log_offset)` for every day in order; log_offset is the
/// log price at the start of the day.
void for_each_sim_day(const SimConfig& cfg,
                      const std::function<void(std::size_t, const std::string&, const SimDay&, double)>& visit);

struct SimPanel {
    std::vector<std::string> dates;
    std::vector<SimDay> days;
    std::vector<double> log_offsets;
};

SimPanel simulate_panel(const SimConfig& cfg);

/// Ticks at the grid times mapped onto [session_open, session_close], prices exp(offset + Y).
TickSeries emit_ticks(const SimConfig& cfg, const SimDay& day, std::uint64_t day_index, double log_offset,
                      const std::string& date, const std::string& symbol, const CleanConfig& clock);

/// Writes `time,price,size` CSV with the configured price precision.
void write_tick_csv(const TickSeries& ticks, int price_decimals, std::ostream& out);

/**
 * Writes <SYMBOL>_<date>.csv for every day and <SYMBOL>_truth.csv with
 * `date,true_iv,true_qv,n_jumps,sum_jump3,sum_jump4`. Returns the written paths.
 */
std::vector<std::filesystem::path> write_sim_panel(const SimConfig& cfg, const CleanConfig& clock,
                                                   const std::filesystem::path& out_dir, const std::string& symbol);

}  // namespace hfm
