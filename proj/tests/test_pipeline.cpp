#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hfm/catalog.hpp"
#include "hfm/config.hpp"
#include "hfm/pipeline.hpp"
#include "hfm/records.hpp"
#include "hfm/simulate.hpp"

using namespace hfm;

namespace {

/// Panel with i.i.d. normal columns; `signal` plants rvar_{t+1} = 1 + signal * rkurt_t + noise.
std::vector<DailyRecord> synthetic_records(std::uint64_t seed, std::size_t days, double signal = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<DailyRecord> out(days);
    for (std::size_t t = 0; t < days; ++t) {
        auto& r = out[t];
        r.date = "d" + std::to_string(1000 + t);
        if (t > 0) {
            r.dret = z(rng);
            r.dret_pos = std::max(*r.dret, 0.0);
            r.dret_neg = std::min(*r.dret, 0.0);
        }
        r.rskew = z(rng);
        r.rkurt = std::exp(z(rng));
        r.sqrt_rkurt = std::sqrt(*r.rkurt);
        r.nrskew = z(rng);
        r.nrkurt = 0.5 + 0.1 * z(rng);
        r.tvol = 1000.0 + 10.0 * z(rng);
        r.bipower = std::exp(z(rng));
        r.rvar = 1.0 + z(rng) + (t > 0 ? signal * *out[t - 1].rkurt : 0.0);
    }
    return out;
}

std::vector<TickSeries> simulated_ticks(const SimConfig& sim, const CleanConfig& clock) {
    std::vector<TickSeries> raw;
    for_each_sim_day(sim, [&](std::size_t t, const std::string& date, const SimDay& day, double offset) {
        raw.push_back(emit_ticks(sim, day, t, offset, date, "SIM", clock));
    });
    return raw;
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("hfm_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        rows.push_back(f);
    }
    return rows;
}

}  // namespace

TEST_CASE("three simulated days give three records") {
    PipelineConfig cfg;
    cfg.sim.n_per_day = 1980;
    cfg.sim.days = 3;
    cfg.sim.jump_intensity = 1.0;
    auto recs = compute_records(simulated_ticks(cfg.sim, cfg.clean), EstimatorKind::preavg, cfg);
    REQUIRE(recs.size() == 3);
    CHECK_FALSE(recs[0].dret);
    CHECK(recs[1].dret);
    CHECK(recs[0].date == "2012-01-03");
    for (const auto& r : recs) {
        if (r.dret) {
            CHECK(*r.dret == doctest::Approx(*r.dret_pos + *r.dret_neg));
            CHECK(*r.dret_pos >= 0.0);
            CHECK(*r.dret_neg <= 0.0);
        }
        CHECK(std::abs(*r.sqrt_rkurt * *r.sqrt_rkurt - *r.rkurt) <= 1e-12);
        CHECK(*r.tvol >= 1981.0);
        CHECK(*r.bipower > 0.0);
    }
}

TEST_CASE("both estimators track integrated variance on clean data") {
    PipelineConfig cfg;
    cfg.sim.n_per_day = 19800;
    cfg.sim.days = 20;
    cfg.sim.price_decimals = -1;
    auto raw = simulated_ticks(cfg.sim, cfg.clean);
    for (auto kind : {EstimatorKind::naive, EstimatorKind::preavg}) {
        auto recs = compute_records(raw, kind, cfg);
        std::vector<double> err;
        for (const auto& r : recs) err.push_back(std::abs(*r.rvar / 1e-4 - 1.0));
        std::sort(err.begin(), err.end());
        CHECK(err[err.size() / 2] < 0.20);
    }
}

TEST_CASE("bad day files are skipped with a warning") {
    const auto dir = scratch_dir("compute");
    PipelineConfig cfg;
    cfg.sim.n_per_day = 330;
    cfg.sim.days = 3;
    write_sim_panel(cfg.sim, cfg.clean, dir, "AAA");
    std::ofstream(dir / "AAA_2012-02-01.csv") << "time,price,size\n10:00:00,abc,1\n";
    std::ofstream(dir / "AAA_2012-02-02.csv") << "time,price,size\n09:40:00,10,1\n";
    std::ofstream(dir / "notes.txt") << "ignored";
    auto out = cmd_compute(dir, EstimatorKind::naive, cfg);
    REQUIRE(out.by_symbol.count("AAA") == 1);
    CHECK(out.by_symbol.at("AAA").size() == 3);
    CHECK(out.warnings.size() == 2);

    const auto empty = scratch_dir("compute_empty");
    CHECK_THROWS_AS(cmd_compute(empty, EstimatorKind::naive, cfg), std::runtime_error);
    CHECK_THROWS_AS(cmd_compute(empty / "missing", EstimatorKind::naive, cfg), std::runtime_error);
    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(empty);
}

TEST_CASE("record CSV round trip") {
    auto recs = synthetic_records(1, 5);
    recs[2].nrkurt.reset();
    std::stringstream ss;
    write_records_csv(recs, ss);
    const auto text = ss.str();
    CHECK(text.rfind(std::string(kRecordHeader) + "\n", 0) == 0);
    CHECK(text.find("d1000,,,,") != std::string::npos);
    auto back = read_records_csv(ss);
    REQUIRE(back.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(back[i].date == recs[i].date);
        CHECK(back[i].rvar == recs[i].rvar);  // shortest round-trip text is exact
        CHECK(back[i].dret == recs[i].dret);
        CHECK(back[i].nrkurt == recs[i].nrkurt);
    }
    std::istringstream bad("date,rvar\n");
    CHECK_THROWS_AS(read_records_csv(bad), ParseError);
}

TEST_CASE("alignment is strictly predictive") {
    auto recs = synthetic_records(2, 250);
    AlignmentInfo info;
    auto panel = align_panel(recs, "rvar", {"dret", "rskew", "rkurt"}, 22, &info);
    CHECK(panel.rows() == 227);
    REQUIRE(info.regressor_rows.size() == 227);
    CHECK(info.regressor_rows.front() == 1);
    for (std::size_t i = 0; i < panel.rows(); ++i) {
        const auto t = info.regressor_rows[i];
        CHECK(panel.response[i] == *recs[t + 22].rvar);
        CHECK(panel.columns[2][i] == *recs[t].rkurt);
    }
    CHECK(run_model(recs, find_model("21"), 22).result->n_obs == 227);
    CHECK(run_model(recs, find_model("21"), 1).result->n_obs == 248);
    CHECK_THROWS_AS(align_panel(recs, "rvar", {"rkurt"}, 0), std::invalid_argument);
}

TEST_CASE("missing values drop rows and are counted") {
    auto recs = synthetic_records(3, 50);
    recs[10].nrkurt.reset();
    recs[20].nrkurt.reset();
    auto run = run_model(recs, find_model("22"), 1);
    REQUIRE(run.result);
    // Day 0 has no return, days 10 and 20 no normalized kurtosis.
    CHECK(run.dropped_missing == 3);
    CHECK(run.result->n_obs == 49 - 3);
}

TEST_CASE("lagged variance columns") {
    auto recs = synthetic_records(4, 30);
    CHECK(*panel_value(recs, 5, "rvar_l2") == *recs[3].rvar);
    CHECK_FALSE(panel_value(recs, 1, "rvar_l2"));
    auto run = run_model(recs, find_model("35L5"), 1);
    REQUIRE(run.result);
    CHECK(run.result->n_obs == 25);
    CHECK(run.result->names.size() == 7);
}

TEST_CASE("model catalog") {
    const auto& cat = model_catalog();
    for (int id = 19; id <= 35; ++id) CHECK_NOTHROW(find_model(std::to_string(id)));
    CHECK(find_model("27").regressors == std::vector<std::string>{"rkurt", "tvol", "dret_pos", "dret_neg"});
    CHECK(find_model("19").response == "dret");
    CHECK(find_model("26s").regressors.back() == "sqrt_rkurt");
    CHECK(find_model("24b").response == "bipower");
    CHECK(cat.size() == 17 + 8 + 2);
    CHECK_THROWS_AS(find_model("99"), std::invalid_argument);
    for (const auto& [small, large] : oos_pairs()) {
        for (const auto& r : find_model(small).regressors) {
            const auto& big = find_model(large).regressors;
            CHECK(std::find(big.begin(), big.end(), r) != big.end());
        }
    }
}

TEST_CASE("batch regression continues past failures") {
    auto recs = synthetic_records(5, 40);
    for (auto& r : recs) r.tvol = 7.0;  // collinear with the intercept
    auto runs = cmd_regress(recs, {"21", "23", "24"}, {1, 2});
    REQUIRE(runs.size() == 6);
    CHECK(runs[0].result);
    CHECK_FALSE(runs[2].result);
    CHECK_FALSE(runs[2].error.empty());
    CHECK(runs[1].horizon == 2);
}

TEST_CASE("results CSV codes agree with p-values") {
    auto recs = synthetic_records(6, 120, 0.5);
    auto runs = cmd_regress(recs, {"21", "24", "27"}, {1, 5});
    std::stringstream ss;
    write_results_csv(runs, ss);
    auto rows = csv_rows(ss.str());
    REQUIRE(rows[0].size() == 11);
    CHECK(rows[0][0] == "model_id");
    int summaries = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 11);
        if (rows[i][2] == "(model)") {
            ++summaries;
            CHECK_FALSE(rows[i][7].empty());
            continue;
        }
        CHECK(rows[i][6] == significance_code(std::stod(rows[i][5])));
    }
    CHECK(summaries == 6);
}

TEST_CASE("F test size on pure noise panels") {
    int rejections = 0;
    const int seeds = 500;
    for (int s = 0; s < seeds; ++s) {
        auto run = run_model(synthetic_records(10000 + static_cast<std::uint64_t>(s), 250), find_model("27"), 1);
        if (run.result->f_p_value < 0.05) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / seeds;
    CHECK(rate >= 0.02);
    CHECK(rate <= 0.08);
}

TEST_CASE("out-of-sample comparison") {
    auto recs = synthetic_records(7, 250, 0.8);
    auto res = cmd_oos(recs, find_model("28"), find_model("31"), OosSplit{});
    CHECK(res.truths.size() == 40);
    CHECK(res.mse_augmented < res.mse_restricted);
    CHECK(res.cm.statistic > 1.300);
    CHECK(*res.cm.decision_level == "0.99");
    CHECK(res.lb_p_augmented);

    auto same = cmd_oos(recs, find_model("31"), find_model("31"), OosSplit{});
    CHECK(same.mse_augmented == same.mse_restricted);
    CHECK(same.cm.statistic == 0.0);

    CHECK_THROWS_AS(cmd_oos(recs, find_model("29"), find_model("31"), OosSplit{}), std::invalid_argument);
    CHECK_THROWS_AS(cmd_oos(recs, find_model("28"), find_model("31"), OosSplit{240, 40, OosScheme::fixed}),
                    std::invalid_argument);

    auto rec = cmd_oos(recs, find_model("28"), find_model("31"), OosSplit{200, 40, OosScheme::recursive});
    CHECK(rec.truths == res.truths);
    CHECK(rec.forecasts_augmented.front() == res.forecasts_augmented.front());
    CHECK(rec.forecasts_augmented.back() != res.forecasts_augmented.back());

    std::stringstream ss;
    write_oos_csv({res}, ss);
    auto rows = csv_rows(ss.str());
    CHECK(ss.str().rfind(std::string(kOosHeader) + "\n", 0) == 0);
    CHECK(rows[1][0] == "(31) versus (28)");
    CHECK(rows[1][4] == "0.449");
    CHECK(rows[1][6] == "1.3");
}

TEST_CASE("fixed-scheme training fit equals the in-sample regression on the same window") {
    auto recs = synthetic_records(8, 250, 0.3);
    const OosSplit split{208, 40, OosScheme::fixed};  // 248 aligned rows
    auto res = cmd_oos(recs, find_model("28"), find_model("31"), split);
    // The training rows are regressor days 1..208 with responses up to day 209.
    std::vector<DailyRecord> window(recs.begin(), recs.begin() + 210);
    auto run = run_model(window, find_model("31"), 1);
    REQUIRE(run.result);
    CHECK(run.result->coefficients == res.augmented_fit.coefficients);
    CHECK(run.result->std_errors == res.augmented_fit.std_errors);
}

TEST_CASE("covariate selection tokens") {
    CHECK(covariate_token("dret_pos") == "dret^+");
    CHECK(covariate_token("dret_neg") == "dret^-");
    CHECK(covariate_token("rkurt") == "rkurt");

    auto recs = synthetic_records(9, 250, 1.0);
    auto sel = cmd_select(recs, "rvar", "rkurt");
    CHECK(std::find(sel.selected.begin(), sel.selected.end(), "rkurt") != sel.selected.end());
    CHECK(sel.token.find("rkurt") != std::string::npos);

    // Plant only dret_neg and rkurt.
    int both = 0;
    for (int s = 0; s < 100; ++s) {
        auto r = synthetic_records(20000 + static_cast<std::uint64_t>(s), 250, 0.5);
        for (std::size_t t = 1; t + 1 < r.size(); ++t) {
            if (r[t].dret_neg) *r[t + 1].rvar += -1.0 * *r[t].dret_neg;
        }
        auto tok = cmd_select(r, "rvar", "rkurt").token;
        if (tok.find("dret^-") != std::string::npos && tok.find("rkurt") != std::string::npos) ++both;
    }
    CHECK(both >= 85);

    std::vector<DailyRecord> flat = synthetic_records(10, 250);
    for (std::size_t t = 0; t < flat.size(); ++t) *flat[t].rvar = 1.0 + 0.25 * static_cast<double>(t % 2);
    CHECK(cmd_select(flat, "rvar", "sqrt_rkurt").fit.n_obs == 248);
}

TEST_CASE("report tables") {
    std::vector<SymbolSummary> rows = {
        {"AAA", {"3", "3", "3", "3"}, "rkurt"},
        {"BBB", {"0", "NA", "1", "3"}, "1"},
    };
    std::stringstream ss;
    write_report_csv(rows, ss);
    CHECK(ss.str() == "symbol,dret&rskew,tvol,dret^+&dret^-,all,covariate_selection\n"
                      "AAA,3,3,3,3,rkurt\n"
                      "BBB,0,NA,1,3,1\n");

    std::vector<SymbolSummary> many;
    for (int i = 0; i < 10; ++i) many.push_back({"S" + std::to_string(i), {i < 6 ? "3" : "0", "0", "0", "0"}, "1"});
    std::stringstream counts;
    write_report_counts_csv(many, counts);
    auto c = csv_rows(counts.str());
    CHECK(c[0] == std::vector<std::string>{"context", "code", "count"});
    CHECK(c.size() == 1 + 4 * 5);
    CHECK(c[5] == std::vector<std::string>{"dret&rskew", "3", "6"});
    CHECK(c[1] == std::vector<std::string>{"dret&rskew", "0", "4"});

    auto strong = summarize_symbol("SIM", synthetic_records(11, 250, 2.0), "rvar", "rkurt");
    CHECK(strong.codes == std::array<std::string, 4>{"3", "3", "3", "3"});
}

TEST_CASE("pipeline config") {
    auto cfg = config_from_json(nlohmann::json::parse(R"({
        "clean": {"session_open": "10:30:00", "outlier_window": 7},
        "preavg": {"k_n": 12},
        "simulate": {"days": 12, "jump_kind": "point", "fixed_jump_count": 1},
        "oos": {"scheme": "recursive"},
        "estimator": "naive",
        "models": ["21", "34"],
        "horizons": [1, 2, 5, 22]
    })"));
    CHECK(cfg.clean.session_open == 37800.0);
    CHECK(cfg.clean.outlier_window == 7);
    CHECK(cfg.preavg.k_n == 12);
    CHECK(cfg.sim.days == 12);
    CHECK(cfg.sim.jump_kind == JumpSizeKind::point);
    CHECK(*cfg.sim.fixed_jump_count == 1);
    CHECK(cfg.oos.scheme == OosScheme::recursive);
    CHECK(cfg.estimator == EstimatorKind::naive);
    CHECK(cfg.horizons.size() == 4);

    auto again = config_from_json(config_to_json(cfg));
    CHECK(config_to_json(again) == config_to_json(cfg));

    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"clean": {"sesion_open": "10:00:00"}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"bogus": 1})")), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"horizons": [0]})")), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"simulate": {"sigma": -1}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"preavg": {"weight": "cosine"}})")),
                    std::invalid_argument);
}
