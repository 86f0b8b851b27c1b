#include "hfm/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "hfm/format.hpp"

namespace hfm {

namespace {

enum Stream : std::uint32_t { kDiffusion = 0, kJumps = 1, kVolume = 2, kRegime = 3 };

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t day, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(day), static_cast<std::uint32_t>(day >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

std::chrono::sys_days parse_date(const std::string& s) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2u-%2u", &y, &m, &d) != 3) {
        throw std::invalid_argument("malformed date '" + s + "' (expected YYYY-MM-DD)");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) throw std::invalid_argument("invalid date '" + s + "'");
    return std::chrono::sys_days{ymd};
}

std::string format_date(std::chrono::sys_days day) {
    const std::chrono::year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

}  // namespace

void SimConfig::validate() const {
    if (n_per_day < 2) throw std::invalid_argument("sim config: n_per_day must be >= 2");
    if (days < 1) throw std::invalid_argument("sim config: days must be >= 1");
    if (sigma < 0.0 || sigma_high < 0.0) throw std::invalid_argument("sim config: sigma must be >= 0");
    if (regime_switch_prob < 0.0 || regime_switch_prob > 1.0) {
        throw std::invalid_argument("sim config: regime_switch_prob must lie in [0, 1]");
    }
    if (jump_intensity < 0.0) throw std::invalid_argument("sim config: jump_intensity must be >= 0");
    if (noise_eta < 0.0) throw std::invalid_argument("sim config: noise_eta must be >= 0");
    if (kurt_feedback < 0.0) throw std::invalid_argument("sim config: kurt_feedback must be >= 0");
    if (volume_rate < 0.0 || volume_jump_coupling < 0.0) {
        throw std::invalid_argument("sim config: volume parameters must be >= 0");
    }
    if (!(initial_price > 0.0)) throw std::invalid_argument("sim config: initial_price must be > 0");
    parse_date(start_date);
}

double SimDay::sum_jump_pow(int p) const {
    double acc = 0.0;
    for (const auto& j : jumps) acc += std::pow(j.size, p);
    return acc;
}

std::vector<Jump> draw_jumps(const SimConfig& cfg, std::uint64_t day_index) {
    auto rng = make_stream(cfg.seed, day_index, kJumps);
    std::size_t count = 0;
    if (cfg.fixed_jump_count) {
        count = *cfg.fixed_jump_count;
    } else if (cfg.jump_intensity > 0.0) {
        count = static_cast<std::size_t>(std::poisson_distribution<long>(cfg.jump_intensity)(rng));
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n = cfg.n_per_day;
    std::vector<Jump> jumps;
    jumps.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double u = unif(rng);
        const std::size_t inc = std::min(n, static_cast<std::size_t>(u * static_cast<double>(n)) + 1);
        const double size = cfg.jump_kind == JumpSizeKind::point ? cfg.jump_size : cfg.jump_size * normal(rng);
        jumps.push_back({inc, static_cast<double>(inc) / static_cast<double>(n), size});
    }
    std::stable_sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) { return a.increment < b.increment; });
    return jumps;
}

std::vector<double> day_sigmas(const SimConfig& cfg) {
    std::vector<double> base(cfg.days, cfg.sigma);
    if (cfg.sigma_high > 0.0 && cfg.regime_switch_prob > 0.0) {
        auto rng = make_stream(cfg.seed, 0, kRegime);
        std::bernoulli_distribution flip(cfg.regime_switch_prob);
        bool high = false;
        for (std::size_t t = 0; t < cfg.days; ++t) {
            if (t > 0 && flip(rng)) high = !high;
            base[t] = high ? cfg.sigma_high : cfg.sigma;
        }
    }
    if (cfg.kurt_feedback > 0.0) {
        for (std::size_t t = 1; t < cfg.days; ++t) {
            double j4 = 0.0;
            for (const auto& j : draw_jumps(cfg, t - 1)) j4 += std::pow(j.size, 4);
            base[t] = std::sqrt(base[t] * base[t] + cfg.kurt_feedback * j4);
        }
    }
    return base;
}

SimDay simulate_day(const SimConfig& cfg, std::uint64_t day_index, double sigma) {
    const std::size_t n = cfg.n_per_day;
    const double dt = 1.0 / static_cast<double>(n);
    const double drift = cfg.mu * dt;
    const double vol = sigma * std::sqrt(dt);

    SimDay day;
    day.sigma = sigma;
    day.jumps = draw_jumps(cfg, day_index);

    auto rng = make_stream(cfg.seed, day_index, kDiffusion);
    std::normal_distribution<double> normal(0.0, 1.0);

    day.latent.delta = dt;
    day.latent.log_prices.resize(n + 1);
    day.latent.log_prices[0] = 0.0;
    std::size_t next_jump = 0;
    double x = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        x += drift + vol * normal(rng);
        while (next_jump < day.jumps.size() && day.jumps[next_jump].increment == i) {
            x += day.jumps[next_jump].size;
            ++next_jump;
        }
        day.latent.log_prices[i] = x;
    }

    day.observed = day.latent;
    if (cfg.noise_eta > 0.0) {
        for (auto& y : day.observed.log_prices) y += cfg.noise_eta * normal(rng);
    }

    day.true_iv = sigma * sigma;
    day.true_qv = day.true_iv + day.sum_jump_pow(2);
    return day;
}

SimDay simulate_day(const SimConfig& cfg, std::uint64_t day_index) { return simulate_day(cfg, day_index, cfg.sigma); }

std::pair<double, double> theoretical_limits(const SimDay& day) {
    if (!(day.true_qv > 0.0)) throw std::invalid_argument("theoretical_limits: true_qv must be positive");
    return {day.sum_jump_pow(3) / std::pow(day.true_qv, 1.5), day.sum_jump_pow(4) / (day.true_qv * day.true_qv)};
}

std::vector<std::string> business_days(const std::string& start, std::size_t count) {
    std::vector<std::string> out;
    out.reserve(count);
    auto day = parse_date(start);
    while (out.size() < count) {
        const std::chrono::weekday wd{day};
        if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.push_back(format_date(day));
        day += std::chrono::days{1};
    }
    return out;
}

void for_each_sim_day(const SimConfig& cfg,
                      const std::function<void(std::size_t, const std::string&, const SimDay&, double)>& visit) {
    cfg.validate();
    const auto sigmas = day_sigmas(cfg);
    const auto dates = business_days(cfg.start_date, cfg.days);
    double offset = std::log(cfg.initial_price);
    for (std::size_t t = 0; t < cfg.days; ++t) {
        const SimDay day = simulate_day(cfg, t, sigmas[t]);
        visit(t, dates[t], day, offset);
        offset += day.latent.log_prices.back();
    }
}

SimPanel simulate_panel(const SimConfig& cfg) {
    SimPanel panel;
    for_each_sim_day(cfg, [&](std::size_t, const std::string& date, const SimDay& day, double offset) {
        panel.dates.push_back(date);
        panel.days.push_back(day);
        panel.log_offsets.push_back(offset);
    });
    return panel;
}

TickSeries emit_ticks(const SimConfig& cfg, const SimDay& day, std::uint64_t day_index, double log_offset,
                      const std::string& date, const std::string& symbol, const CleanConfig& clock) {
    TickSeries ticks{date, symbol, {}};
    const auto& y = day.observed.log_prices;
    const std::size_t n = y.size() - 1;
    const double step = (clock.session_close - clock.session_open) / static_cast<double>(n);

    auto rng = make_stream(cfg.seed, day_index, kVolume);
    const double rate = cfg.volume_rate * (1.0 + cfg.volume_jump_coupling * (day.jumps.empty() ? 0.0 : 1.0));
    std::poisson_distribution<long> extra(rate > 0.0 ? rate : 1.0);

    const double scale = cfg.price_decimals >= 0 ? std::pow(10.0, cfg.price_decimals) : 0.0;
    ticks.records.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = i == n ? clock.session_close : clock.session_open + static_cast<double>(i) * step;
        double price = std::exp(log_offset + y[i]);
        if (cfg.price_decimals >= 0) price = std::round(price * scale) / scale;
        const std::int64_t size = 1 + (rate > 0.0 ? extra(rng) : 0);
        ticks.records.push_back({std::round(t * 1e6) / 1e6, price, size});
    }
    return ticks;
}

void write_tick_csv(const TickSeries& ticks, int price_decimals, std::ostream& out) {
    out << "time,price,size\n";
    for (const auto& r : ticks.records) {
        out << format_clock(r.time) << ','
            << (price_decimals >= 0 ? format_fixed(r.price, price_decimals) : format_real(r.price)) << ',' << r.size
            << '\n';
    }
}

std::vector<std::filesystem::path> write_sim_panel(const SimConfig& cfg, const CleanConfig& clock,
                                                   const std::filesystem::path& out_dir, const std::string& symbol) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    const auto truth_path = out_dir / (symbol + "_truth.csv");
    std::ofstream truth(truth_path);
    if (!truth) throw std::runtime_error("cannot write " + truth_path.string());
    truth << "date,true_iv,true_qv,n_jumps,sum_jump3,sum_jump4\n";

    for_each_sim_day(cfg, [&](std::size_t t, const std::string& date, const SimDay& day, double offset) {
        const auto path = out_dir / (symbol + "_" + date + ".csv");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        write_tick_csv(emit_ticks(cfg, day, t, offset, date, symbol, clock), cfg.price_decimals, out);
        if (!out) throw std::runtime_error("write failed for " + path.string());
        written.push_back(path);
        truth << date << ',' << format_real(day.true_iv) << ',' << format_real(day.true_qv) << ',' << day.jumps.size()
              << ',' << format_real(day.sum_jump_pow(3)) << ',' << format_real(day.sum_jump_pow(4)) << '\n';
    });
    if (!truth) throw std::runtime_error("write failed for " + truth_path.string());
    written.push_back(truth_path);
    return written;
}

}  // namespace hfm
