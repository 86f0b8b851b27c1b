#include "hfm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace hfm {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_int(std::string_view s, std::int64_t& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_unsigned_field(std::string_view s, int& out) {
    if (s.empty() || s.size() > 2) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ClockSeconds parse_clock(std::string_view text) {
    text = trim(text);
    if (text.find(':') == std::string_view::npos) {
        double secs = 0.0;
        if (!parse_double(text, secs) || secs < 0.0) {
            throw std::invalid_argument("malformed clock value '" + std::string(text) + "'");
        }
        return secs;
    }
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    int hh = 0, mm = 0;
    double ss = 0.0;
    bool ok = c2 != std::string_view::npos && parse_unsigned_field(text.substr(0, c1), hh) &&
              parse_unsigned_field(text.substr(c1 + 1, c2 - c1 - 1), mm);
    if (ok) {
        auto sec = text.substr(c2 + 1);
        ok = sec.size() >= 2 && sec[0] >= '0' && sec[0] <= '9' && parse_double(sec, ss);
    }
    if (!ok || hh > 23 || mm > 59 || ss < 0.0 || ss >= 61.0) {
        throw std::invalid_argument("malformed clock value '" + std::string(text) + "'");
    }
    return hh * 3600.0 + mm * 60.0 + ss;
}

std::string format_clock(ClockSeconds t) {
    auto micros = static_cast<long long>(std::llround(t * 1e6));
    const long long hh = micros / 3600'000'000LL;
    micros -= hh * 3600'000'000LL;
    const long long mm = micros / 60'000'000LL;
    micros -= mm * 60'000'000LL;
    const long long ss = micros / 1'000'000LL;
    micros -= ss * 1'000'000LL;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%06lld", hh, mm, ss, micros);
    return buf;
}

void CleanConfig::validate() const {
    if (!(exchange_open <= session_open && session_open < session_close && session_close <= exchange_close)) {
        throw std::invalid_argument("clean config: require exchange_open <= session_open < session_close <= exchange_close");
    }
    if (outlier_window < 2) throw std::invalid_argument("clean config: outlier_window must be >= 2");
    if (!(outlier_multiplier > 0.0)) throw std::invalid_argument("clean config: outlier_multiplier must be > 0");
}

std::vector<double> GridPath::increments() const {
    std::vector<double> out;
    if (log_prices.size() < 2) return out;
    out.reserve(log_prices.size() - 1);
    for (std::size_t i = 1; i < log_prices.size(); ++i) out.push_back(log_prices[i] - log_prices[i - 1]);
    return out;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

TickSeries parse_ticks(std::istream& in, std::string symbol, std::string date) {
    TickSeries series{std::move(date), std::move(symbol), {}};
    std::string raw;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (!seen_data && !fields.empty()) {
            const auto first = trim(fields[0]);
            if (!first.empty() && !(first[0] >= '0' && first[0] <= '9')) {
                seen_data = true;  // header
                continue;
            }
        }
        seen_data = true;
        if (fields.size() != 3) {
            throw ParseError(line_no, "expected 3 fields (time,price,size), got " + std::to_string(fields.size()));
        }
        TickRecord rec;
        try {
            rec.time = parse_clock(fields[0]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
        if (!parse_double(fields[1], rec.price)) {
            throw ParseError(line_no, "malformed price '" + std::string(trim(fields[1])) + "'");
        }
        if (!parse_int(fields[2], rec.size) || rec.size < 0) {
            throw ParseError(line_no, "malformed size '" + std::string(trim(fields[2])) + "'");
        }
        series.records.push_back(rec);
    }
    std::stable_sort(series.records.begin(), series.records.end(),
                     [](const TickRecord& a, const TickRecord& b) { return a.time < b.time; });
    return series;
}

std::vector<bool> outlier_keep_mask(const std::vector<double>& prices, int window, double multiplier) {
    const std::size_t n = prices.size();
    std::vector<bool> keep(n, true);
    if (n < 2) return keep;
    const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(window), n - 1);
    const std::size_t before = m / 2;
    for (std::size_t i = 0; i < n; ++i) {
        // Window of m + 1 consecutive indices containing i, shifted inward at the edges.
        std::size_t lo = i >= before ? i - before : 0;
        if (lo + m > n - 1) lo = n - 1 - m;
        double sum = 0.0;
        for (std::size_t j = lo; j <= lo + m; ++j) {
            if (j != i) sum += prices[j];
        }
        const double mean = sum / static_cast<double>(m);
        double ss = 0.0;
        for (std::size_t j = lo; j <= lo + m; ++j) {
            if (j != i) ss += (prices[j] - mean) * (prices[j] - mean);
        }
        const double sd = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1)) : 0.0;
        const double dev = std::abs(prices[i] - mean);
        if (sd == 0.0) {
            keep[i] = prices[i] == mean;
        } else {
            keep[i] = !(dev > multiplier * sd);
        }
    }
    return keep;
}

TickSeries clean_ticks(const TickSeries& raw, const CleanConfig& cfg) {
    TickSeries out{raw.date, raw.symbol, {}};

    // Session window and positive prices.
    std::vector<TickRecord> kept;
    kept.reserve(raw.records.size());
    for (const auto& r : raw.records) {
        if (r.time < cfg.exchange_open || r.time > cfg.exchange_close) continue;
        if (r.time < cfg.session_open || r.time > cfg.session_close) continue;
        if (!(r.price > 0.0)) continue;
        kept.push_back(r);
    }

    // Same-timestamp collapse. Input is sorted, so equal timestamps are adjacent.
    std::vector<TickRecord> collapsed;
    collapsed.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size();) {
        std::size_t j = i + 1;
        while (j < kept.size() && kept[j].time == kept[i].time) ++j;
        if (j - i == 1) {
            collapsed.push_back(kept[i]);
        } else {
            std::vector<double> prices;
            std::int64_t size = 0;
            for (std::size_t k = i; k < j; ++k) {
                prices.push_back(kept[k].price);
                size += kept[k].size;
            }
            collapsed.push_back({kept[i].time, median_of(std::move(prices)), size});
        }
        i = j;
    }

    // Local outlier filter.
    std::vector<double> prices(collapsed.size());
    std::transform(collapsed.begin(), collapsed.end(), prices.begin(), [](const TickRecord& r) { return r.price; });
    const auto keep = outlier_keep_mask(prices, cfg.outlier_window, cfg.outlier_multiplier);
    out.records.reserve(collapsed.size());
    for (std::size_t i = 0; i < collapsed.size(); ++i) {
        if (keep[i]) out.records.push_back(collapsed[i]);
    }
    return out;
}

GridPath resample(const TickSeries& clean, double delta, const CleanConfig& cfg) {
    if (!(delta > 0.0)) throw std::invalid_argument("resample: delta must be positive");
    const double span = cfg.session_close - cfg.session_open;
    const double steps = span / delta;
    const auto n = static_cast<std::size_t>(std::llround(steps));
    if (n == 0 || std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps)) {
        throw std::invalid_argument("resample: delta must divide the session length");
    }
    if (clean.records.empty()) throw std::runtime_error("resample: empty day");

    GridPath path{clean.date, cfg.session_open, delta, {}};
    path.log_prices.reserve(n + 1);
    std::size_t next = 0;  // first record with time > current grid point
    double current = clean.records.front().price;
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = cfg.session_open + static_cast<double>(i) * delta;
        while (next < clean.records.size() && clean.records[next].time <= t) {
            current = clean.records[next].price;
            ++next;
        }
        path.log_prices.push_back(std::log(current));
    }
    return path;
}

double daily_return(double today_close, double prev_close) {
    if (!(today_close > 0.0) || !(prev_close > 0.0)) {
        throw std::invalid_argument("daily_return: closing prices must be positive");
    }
    return std::log(today_close) - std::log(prev_close);
}

std::int64_t daily_volume(const TickSeries& clean) {
    return std::accumulate(clean.records.begin(), clean.records.end(), std::int64_t{0},
                           [](std::int64_t acc, const TickRecord& r) { return acc + r.size; });
}

double closing_price(const TickSeries& clean, const CleanConfig& cfg) {
    for (auto it = clean.records.rbegin(); it != clean.records.rend(); ++it) {
        if (it->time <= cfg.session_close) return it->price;
    }
    throw std::runtime_error("closing_price: no trade at or before session close");
}

}  // namespace hfm
