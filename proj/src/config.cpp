#include "hfm/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hfm {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& section) {
    if (!obj.is_object()) throw std::invalid_argument("config: '" + section + "' must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw std::invalid_argument("config: unknown key '" + key + "' in " + section);
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

void read_clock(const json& obj, const char* key, ClockSeconds& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    out = v.is_string() ? parse_clock(v.get<std::string>()) : v.get<double>();
}

}  // namespace

PipelineConfig config_from_json(const json& doc) {
    PipelineConfig cfg;
    reject_unknown(doc,
                   {"clean", "preavg", "grid", "simulate", "oos", "estimator", "models", "horizons",
                    "standardize_tvol", "symbol"},
                   "config");

    if (doc.contains("clean")) {
        const auto& c = doc.at("clean");
        reject_unknown(c,
                       {"exchange_open", "exchange_close", "session_open", "session_close", "outlier_window",
                        "outlier_multiplier"},
                       "clean");
        read_clock(c, "exchange_open", cfg.clean.exchange_open);
        read_clock(c, "exchange_close", cfg.clean.exchange_close);
        read_clock(c, "session_open", cfg.clean.session_open);
        read_clock(c, "session_close", cfg.clean.session_close);
        read(c, "outlier_window", cfg.clean.outlier_window);
        read(c, "outlier_multiplier", cfg.clean.outlier_multiplier);
    }
    cfg.clean.validate();

    if (doc.contains("preavg")) {
        const auto& p = doc.at("preavg");
        reject_unknown(p, {"k_n", "weight"}, "preavg");
        read(p, "k_n", cfg.preavg.k_n);
        read(p, "weight", cfg.preavg.weight);
        weight_by_name(cfg.preavg.weight);
        if (cfg.preavg.k_n < 2) throw std::invalid_argument("config: preavg.k_n must be >= 2");
    }

    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        reject_unknown(g, {"naive_delta", "preavg_delta", "bipower_delta"}, "grid");
        read(g, "naive_delta", cfg.naive_delta);
        read(g, "preavg_delta", cfg.preavg_delta);
        read(g, "bipower_delta", cfg.bipower_delta);
    }

    if (doc.contains("simulate")) {
        const auto& s = doc.at("simulate");
        reject_unknown(s,
                       {"n_per_day", "days", "mu", "sigma", "sigma_high", "regime_switch_prob", "jump_intensity",
                        "jump_kind", "jump_size", "fixed_jump_count", "noise_eta", "kurt_feedback", "volume_rate",
                        "volume_jump_coupling", "initial_price", "price_decimals", "start_date", "seed"},
                       "simulate");
        auto& sim = cfg.sim;
        read(s, "n_per_day", sim.n_per_day);
        read(s, "days", sim.days);
        read(s, "mu", sim.mu);
        read(s, "sigma", sim.sigma);
        read(s, "sigma_high", sim.sigma_high);
        read(s, "regime_switch_prob", sim.regime_switch_prob);
        read(s, "jump_intensity", sim.jump_intensity);
        if (s.contains("jump_kind")) {
            const auto kind = s.at("jump_kind").get<std::string>();
            if (kind == "normal") {
                sim.jump_kind = JumpSizeKind::normal;
            } else if (kind == "point") {
                sim.jump_kind = JumpSizeKind::point;
            } else {
                throw std::invalid_argument("config: simulate.jump_kind must be normal or point");
            }
        }
        read(s, "jump_size", sim.jump_size);
        if (s.contains("fixed_jump_count") && !s.at("fixed_jump_count").is_null()) {
            sim.fixed_jump_count = s.at("fixed_jump_count").get<std::size_t>();
        }
        read(s, "noise_eta", sim.noise_eta);
        read(s, "kurt_feedback", sim.kurt_feedback);
        read(s, "volume_rate", sim.volume_rate);
        read(s, "volume_jump_coupling", sim.volume_jump_coupling);
        read(s, "initial_price", sim.initial_price);
        read(s, "price_decimals", sim.price_decimals);
        read(s, "start_date", sim.start_date);
        read(s, "seed", sim.seed);
        sim.validate();
    }

    if (doc.contains("oos")) {
        const auto& o = doc.at("oos");
        reject_unknown(o, {"train_len", "test_len", "scheme"}, "oos");
        read(o, "train_len", cfg.oos.train_len);
        read(o, "test_len", cfg.oos.test_len);
        if (o.contains("scheme")) {
            const auto scheme = o.at("scheme").get<std::string>();
            if (scheme == "fixed") {
                cfg.oos.scheme = OosScheme::fixed;
            } else if (scheme == "recursive") {
                cfg.oos.scheme = OosScheme::recursive;
            } else {
                throw std::invalid_argument("config: oos.scheme must be fixed or recursive");
            }
        }
    }

    if (doc.contains("estimator")) cfg.estimator = estimator_from_string(doc.at("estimator").get<std::string>());
    read(doc, "models", cfg.models);
    read(doc, "horizons", cfg.horizons);
    read(doc, "standardize_tvol", cfg.standardize_tvol);
    read(doc, "symbol", cfg.symbol);
    for (int d : cfg.horizons) {
        if (d < 1) throw std::invalid_argument("config: horizons must be >= 1");
    }
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

json config_to_json(const PipelineConfig& cfg) {
    const auto& s = cfg.sim;
    json sim = {
        {"n_per_day", s.n_per_day},
        {"days", s.days},
        {"mu", s.mu},
        {"sigma", s.sigma},
        {"sigma_high", s.sigma_high},
        {"regime_switch_prob", s.regime_switch_prob},
        {"jump_intensity", s.jump_intensity},
        {"jump_kind", s.jump_kind == JumpSizeKind::normal ? "normal" : "point"},
        {"jump_size", s.jump_size},
        {"fixed_jump_count", s.fixed_jump_count ? json(*s.fixed_jump_count) : json(nullptr)},
        {"noise_eta", s.noise_eta},
        {"kurt_feedback", s.kurt_feedback},
        {"volume_rate", s.volume_rate},
        {"volume_jump_coupling", s.volume_jump_coupling},
        {"initial_price", s.initial_price},
        {"price_decimals", s.price_decimals},
        {"start_date", s.start_date},
        {"seed", s.seed},
    };
    return {
        {"clean",
         {{"exchange_open", format_clock(cfg.clean.exchange_open)},
          {"exchange_close", format_clock(cfg.clean.exchange_close)},
          {"session_open", format_clock(cfg.clean.session_open)},
          {"session_close", format_clock(cfg.clean.session_close)},
          {"outlier_window", cfg.clean.outlier_window},
          {"outlier_multiplier", cfg.clean.outlier_multiplier}}},
        {"preavg", {{"k_n", cfg.preavg.k_n}, {"weight", cfg.preavg.weight}}},
        {"grid",
         {{"naive_delta", cfg.naive_delta}, {"preavg_delta", cfg.preavg_delta}, {"bipower_delta", cfg.bipower_delta}}},
        {"simulate", sim},
        {"oos",
         {{"train_len", cfg.oos.train_len},
          {"test_len", cfg.oos.test_len},
          {"scheme", cfg.oos.scheme == OosScheme::fixed ? "fixed" : "recursive"}}},
        {"estimator", to_string(cfg.estimator)},
        {"models", cfg.models},
        {"horizons", cfg.horizons},
        {"standardize_tvol", cfg.standardize_tvol},
        {"symbol", cfg.symbol},
    };
}

}  // namespace hfm
