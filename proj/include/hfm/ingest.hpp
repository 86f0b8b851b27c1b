#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hfm {

/// Seconds since midnight (fractional allowed).
using ClockSeconds = double;

/**
 * Parses a clock string of the form HH:MM:SS or HH:MM:SS.ffffff.
 * A bare decimal number is accepted as seconds since midnight.
 * Throws std::invalid_argument on malformed input.
 */
ClockSeconds parse_clock(std::string_view text);

/// Formats seconds since midnight as HH:MM:SS.ffffff (microsecond resolution).
std::string format_clock(ClockSeconds t);

struct TickRecord {
    ClockSeconds time = 0.0;
    double price = 0.0;
    std::int64_t size = 0;
};

struct TickSeries {
    std::string date;    ///< YYYY-MM-DD
    std::string symbol;
    std::vector<TickRecord> records;
};

/// Trading-session clock settings plus the outlier filter parameters.
struct CleanConfig {
    ClockSeconds exchange_open = 9.5 * 3600.0;
    ClockSeconds exchange_close = 16.0 * 3600.0;
    ClockSeconds session_open = 10.0 * 3600.0;
    ClockSeconds session_close = 15.5 * 3600.0;
    int outlier_window = 5;         ///< m, neighbors used for the local mean / sd
    double outlier_multiplier = 3.0; ///< k, threshold in local standard deviations

    /// Throws std::invalid_argument if the clock ordering or filter parameters are invalid.
    void validate() const;
};

/// Equidistant log-price samples for one day: log_prices[i] is the value at start + i * delta.
struct GridPath {
    std::string date;
    ClockSeconds start = 0.0;
    double delta = 0.0;
    std::vector<double> log_prices;

    std::size_t n() const { return log_prices.empty() ? 0 : log_prices.size() - 1; }
    std::vector<double> increments() const;
};

/// A CSV record that could not be parsed. line() is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/**
 * Reads `time,price,size` lines. A header line is optional; blank lines are skipped.
 * The result is stably sorted by time, so same-timestamp trades keep their file order.
 */
TickSeries parse_ticks(std::istream& in, std::string symbol, std::string date);

/**
 * Applies the five cleaning steps in order:
 *  1. drop records outside exchange hours,
 *  2. drop records in the opening / closing trim windows,
 *  3. drop non-positive prices,
 *  4. collapse equal timestamps to the median price (sizes summed),
 *  5. a single pass of the local outlier rule |p_i - mean_i| > k * sd_i.
 *
 * The step-5 neighborhood holds min(m, N-1) observations nearest to i by index
 * (floor(m/2) before, the rest after), excluding i and shifted inward at the ends.
 * Neighbors are always taken from the post-step-4 series.
 */
TickSeries clean_ticks(const TickSeries& raw, const CleanConfig& cfg);

/// The local outlier filter alone, exposed for testing. Returns a keep-mask aligned with `prices`.
std::vector<bool> outlier_keep_mask(const std::vector<double>& prices, int window, double multiplier);

/**
 * Previous-tick sampling onto the grid session_open, session_open + delta, ..., session_close.
 * Grid points before the first trade take the first trade's price.
 * Throws std::invalid_argument if delta does not divide the session, std::runtime_error on an empty day.
 */
GridPath resample(const TickSeries& clean, double delta, const CleanConfig& cfg);

/// ln(today_close) - ln(prev_close). Throws std::invalid_argument for non-positive prices.
double daily_return(double today_close, double prev_close);

/// Sum of trade sizes over the series.
std::int64_t daily_volume(const TickSeries& clean);

/// Price of the last record at or before session_close. Throws std::runtime_error if none.
double closing_price(const TickSeries& clean, const CleanConfig& cfg);

}  // namespace hfm
