#include <sstream>

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hfm/catalog.hpp"
#include "hfm/config.hpp"
#include "hfm/estimators.hpp"
#include "hfm/ingest.hpp"
#include "hfm/pipeline.hpp"
#include "hfm/records.hpp"
#include "hfm/simulate.hpp"
#include "hfm/stats.hpp"

namespace py = pybind11;
using namespace hfm;

namespace {

template <typename T, typename Write>
std::string to_csv(const T& value, Write write) {
    std::ostringstream out;
    write(value, out);
    return out.str();
}

AlignedPanel make_panel(std::vector<double> response, std::vector<std::string> names,
                        std::vector<std::vector<double>> columns) {
    AlignedPanel p;
    p.response = std::move(response);
    p.names = std::move(names);
    p.columns = std::move(columns);
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Realized moments, forecasting regressions and simulation";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<RankDeficientError>(m, "RankDeficientError", PyExc_ArithmeticError);

    py::enum_<EstimatorKind>(m, "EstimatorKind")
        .value("naive", EstimatorKind::naive)
        .value("preavg", EstimatorKind::preavg);
    py::enum_<JumpSizeKind>(m, "JumpSizeKind").value("normal", JumpSizeKind::normal).value("point", JumpSizeKind::point);
    py::enum_<OosScheme>(m, "OosScheme").value("fixed", OosScheme::fixed).value("recursive", OosScheme::recursive);

    // ingest
    m.def("parse_clock", [](const std::string& s) { return parse_clock(s); });
    m.def("format_clock", &format_clock);
    py::class_<TickRecord>(m, "TickRecord")
        .def(py::init<>())
        .def(py::init([](double t, double p, std::int64_t s) { return TickRecord{t, p, s}; }), py::arg("time"),
             py::arg("price"), py::arg("size"))
        .def_readwrite("time", &TickRecord::time)
        .def_readwrite("price", &TickRecord::price)
        .def_readwrite("size", &TickRecord::size);
    py::class_<TickSeries>(m, "TickSeries")
        .def(py::init<>())
        .def_readwrite("date", &TickSeries::date)
        .def_readwrite("symbol", &TickSeries::symbol)
        .def_readwrite("records", &TickSeries::records)
        .def("__len__", [](const TickSeries& t) { return t.records.size(); });
    py::class_<CleanConfig>(m, "CleanConfig")
        .def(py::init<>())
        .def_readwrite("exchange_open", &CleanConfig::exchange_open)
        .def_readwrite("exchange_close", &CleanConfig::exchange_close)
        .def_readwrite("session_open", &CleanConfig::session_open)
        .def_readwrite("session_close", &CleanConfig::session_close)
        .def_readwrite("outlier_window", &CleanConfig::outlier_window)
        .def_readwrite("outlier_multiplier", &CleanConfig::outlier_multiplier)
        .def("validate", &CleanConfig::validate);
    py::class_<GridPath>(m, "GridPath")
        .def(py::init<>())
        .def_readwrite("date", &GridPath::date)
        .def_readwrite("start", &GridPath::start)
        .def_readwrite("delta", &GridPath::delta)
        .def_readwrite("log_prices", &GridPath::log_prices)
        .def_property_readonly("n", &GridPath::n)
        .def("increments", &GridPath::increments);

    m.def(
        "parse_ticks",
        [](const std::string& text, const std::string& symbol, const std::string& date) {
            std::istringstream in(text);
            return parse_ticks(in, symbol, date);
        },
        py::arg("text"), py::arg("symbol"), py::arg("date"), "Parse `time,price,size` CSV text.");
    m.def("clean_ticks", &clean_ticks, py::arg("raw"), py::arg("cfg") = CleanConfig{});
    m.def("resample", &resample, py::arg("clean"), py::arg("delta"), py::arg("cfg") = CleanConfig{});

    // estimators
    py::class_<RealizedMoments>(m, "RealizedMoments")
        .def_readonly("rvar", &RealizedMoments::rvar)
        .def_readonly("rskew", &RealizedMoments::rskew)
        .def_readonly("rkurt", &RealizedMoments::rkurt)
        .def_readonly("nrskew", &RealizedMoments::nrskew)
        .def_readonly("nrkurt", &RealizedMoments::nrkurt);
    m.def("naive_moments", [](const std::vector<double>& r) { return naive_moments(r); }, py::arg("returns"));
    m.def(
        "preavg_moments",
        [](const GridPath& path, int k_n, const std::string& weight) {
            return preavg_moments(path, PreAvgConfig{k_n, weight});
        },
        py::arg("path"), py::arg("k_n") = 10, py::arg("weight") = "min(x,1-x)");
    m.def(
        "gbar", [](int p, const std::string& weight) { return gbar(weight_by_name(weight), p); }, py::arg("p"),
        py::arg("weight") = "min(x,1-x)");
    m.def("bipower_variation", [](const std::vector<double>& r) { return bipower_variation(r); }, py::arg("returns"));

    // stats
    py::class_<RegressionResult>(m, "RegressionResult")
        .def_readonly("names", &RegressionResult::names)
        .def_readonly("coefficients", &RegressionResult::coefficients)
        .def_readonly("std_errors", &RegressionResult::std_errors)
        .def_readonly("t_stats", &RegressionResult::t_stats)
        .def_readonly("p_values", &RegressionResult::p_values)
        .def_readonly("r_squared", &RegressionResult::r_squared)
        .def_readonly("f_stat", &RegressionResult::f_stat)
        .def_readonly("f_p_value", &RegressionResult::f_p_value)
        .def_readonly("rss", &RegressionResult::rss)
        .def_readonly("aic", &RegressionResult::aic)
        .def_readonly("residuals", &RegressionResult::residuals)
        .def_readonly("fitted", &RegressionResult::fitted)
        .def_readonly("n_obs", &RegressionResult::n_obs)
        .def_readonly("n_params", &RegressionResult::n_params)
        .def("index_of", &RegressionResult::index_of);
    py::class_<TestResult>(m, "TestResult")
        .def_readonly("statistic", &TestResult::statistic)
        .def_readonly("p_value", &TestResult::p_value)
        .def_readonly("decision_level", &TestResult::decision_level);
    py::class_<CmCriticalValues>(m, "CmCriticalValues")
        .def(py::init<>())
        .def_readwrite("p90", &CmCriticalValues::p90)
        .def_readwrite("p95", &CmCriticalValues::p95)
        .def_readwrite("p99", &CmCriticalValues::p99);

    m.def(
        "ols_fit",
        [](std::vector<double> y, std::vector<std::string> names, std::vector<std::vector<double>> columns,
           bool intercept) { return ols_fit(make_panel(std::move(y), std::move(names), std::move(columns)), intercept); },
        py::arg("response"), py::arg("names"), py::arg("columns"), py::arg("intercept") = true);
    m.def(
        "stepwise_aic",
        [](std::vector<double> y, std::vector<std::string> names, std::vector<std::vector<double>> columns) {
            const auto r = stepwise_aic(make_panel(std::move(y), std::move(names), std::move(columns)));
            return py::make_tuple(r.selected, r.fit);
        },
        py::arg("response"), py::arg("names"), py::arg("columns"));
    m.def("ljung_box", [](const std::vector<double>& x, std::size_t lags) { return ljung_box(x, lags); },
          py::arg("series"), py::arg("lags") = 10);
    m.def("dagostino_skewness", [](const std::vector<double>& x) { return dagostino_skewness(x); }, py::arg("series"));
    m.def(
        "cm_encompassing",
        [](const std::vector<double>& small, const std::vector<double>& large, const CmCriticalValues& cv) {
            return cm_encompassing(small, large, cv);
        },
        py::arg("errors_restricted"), py::arg("errors_augmented"), py::arg("cv") = CmCriticalValues{});
    m.def("significance_code", &significance_code, py::arg("p_value"));

    // simulate
    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("n_per_day", &SimConfig::n_per_day)
        .def_readwrite("days", &SimConfig::days)
        .def_readwrite("mu", &SimConfig::mu)
        .def_readwrite("sigma", &SimConfig::sigma)
        .def_readwrite("sigma_high", &SimConfig::sigma_high)
        .def_readwrite("regime_switch_prob", &SimConfig::regime_switch_prob)
        .def_readwrite("jump_intensity", &SimConfig::jump_intensity)
        .def_readwrite("jump_kind", &SimConfig::jump_kind)
        .def_readwrite("jump_size", &SimConfig::jump_size)
        .def_readwrite("fixed_jump_count", &SimConfig::fixed_jump_count)
        .def_readwrite("noise_eta", &SimConfig::noise_eta)
        .def_readwrite("kurt_feedback", &SimConfig::kurt_feedback)
        .def_readwrite("volume_rate", &SimConfig::volume_rate)
        .def_readwrite("volume_jump_coupling", &SimConfig::volume_jump_coupling)
        .def_readwrite("initial_price", &SimConfig::initial_price)
        .def_readwrite("price_decimals", &SimConfig::price_decimals)
        .def_readwrite("start_date", &SimConfig::start_date)
        .def_readwrite("seed", &SimConfig::seed)
        .def("validate", &SimConfig::validate);
    py::class_<Jump>(m, "Jump")
        .def_readonly("increment", &Jump::increment)
        .def_readonly("time", &Jump::time)
        .def_readonly("size", &Jump::size);
    py::class_<SimDay>(m, "SimDay")
        .def_readonly("latent", &SimDay::latent)
        .def_readonly("observed", &SimDay::observed)
        .def_readonly("sigma", &SimDay::sigma)
        .def_readonly("true_iv", &SimDay::true_iv)
        .def_readonly("true_qv", &SimDay::true_qv)
        .def_readonly("jumps", &SimDay::jumps);
    m.def("simulate_day", py::overload_cast<const SimConfig&, std::uint64_t>(&simulate_day), py::arg("cfg"),
          py::arg("day_index") = 0);
    m.def("theoretical_limits", &theoretical_limits, py::arg("day"));
    m.def("write_sim_panel", &write_sim_panel, py::arg("cfg"), py::arg("clock"), py::arg("dir"), py::arg("symbol"));

    // pipeline
    py::class_<OosSplit>(m, "OosSplit")
        .def(py::init<>())
        .def_readwrite("train_len", &OosSplit::train_len)
        .def_readwrite("test_len", &OosSplit::test_len)
        .def_readwrite("scheme", &OosSplit::scheme);
    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("clean", &PipelineConfig::clean)
        .def_readwrite("sim", &PipelineConfig::sim)
        .def_readwrite("oos", &PipelineConfig::oos)
        .def_readwrite("estimator", &PipelineConfig::estimator)
        .def_readwrite("naive_delta", &PipelineConfig::naive_delta)
        .def_readwrite("preavg_delta", &PipelineConfig::preavg_delta)
        .def_readwrite("bipower_delta", &PipelineConfig::bipower_delta)
        .def_readwrite("models", &PipelineConfig::models)
        .def_readwrite("horizons", &PipelineConfig::horizons)
        .def_readwrite("standardize_tvol", &PipelineConfig::standardize_tvol)
        .def_readwrite("symbol", &PipelineConfig::symbol)
        .def("to_json", [](const PipelineConfig& c) { return config_to_json(c).dump(); });
    m.def("config_from_json", [](const std::string& text) { return config_from_json(nlohmann::json::parse(text)); });
    m.def("load_config", &load_config, py::arg("path"));

    py::class_<DailyRecord>(m, "DailyRecord")
        .def_readonly("date", &DailyRecord::date)
        .def("value", &DailyRecord::value, py::arg("column"))
        .def("__getitem__", &DailyRecord::value);
    m.def(
        "read_records_csv",
        [](const std::string& text) {
            std::istringstream in(text);
            return read_records_csv(in);
        },
        py::arg("text"));
    m.def("write_records_csv", [](const std::vector<DailyRecord>& r) { return to_csv(r, write_records_csv); });

    m.def(
        "compute_records",
        [](const std::vector<TickSeries>& raw, EstimatorKind kind, const PipelineConfig& cfg) {
            std::vector<std::string> warnings;
            auto records = compute_records(raw, kind, cfg, &warnings);
            return py::make_tuple(records, warnings);
        },
        py::arg("raw_days"), py::arg("estimator") = EstimatorKind::preavg, py::arg("cfg") = PipelineConfig{});
    m.def(
        "compute",
        [](const std::filesystem::path& dir, EstimatorKind kind, const PipelineConfig& cfg) {
            auto r = cmd_compute(dir, kind, cfg);
            return py::make_tuple(r.by_symbol, r.warnings);
        },
        py::arg("input_dir"), py::arg("estimator") = EstimatorKind::preavg, py::arg("cfg") = PipelineConfig{});

    py::class_<ModelCatalogEntry>(m, "Model")
        .def_readonly("model_id", &ModelCatalogEntry::model_id)
        .def_readonly("response", &ModelCatalogEntry::response)
        .def_readonly("regressors", &ModelCatalogEntry::regressors)
        .def_readonly("description", &ModelCatalogEntry::description);
    m.def("model_catalog", &model_catalog, py::return_value_policy::reference);
    m.def("find_model", &find_model, py::arg("model_id"), py::return_value_policy::reference);
    m.def("oos_pairs", &oos_pairs);

    py::class_<ModelRun>(m, "ModelRun")
        .def_readonly("model_id", &ModelRun::model_id)
        .def_readonly("horizon", &ModelRun::horizon)
        .def_readonly("result", &ModelRun::result)
        .def_readonly("error", &ModelRun::error)
        .def_readonly("dropped_missing", &ModelRun::dropped_missing);
    m.def(
        "run_model",
        [](const std::vector<DailyRecord>& records, const std::string& id, int horizon, bool standardize) {
            return run_model(records, find_model(id), horizon, standardize);
        },
        py::arg("records"), py::arg("model_id"), py::arg("horizon") = 1, py::arg("standardize_tvol") = false);
    m.def("regress", &cmd_regress, py::arg("records"), py::arg("model_ids"), py::arg("horizons") = std::vector<int>{1},
          py::arg("standardize_tvol") = false);
    m.def("write_results_csv", [](const std::vector<ModelRun>& r) { return to_csv(r, write_results_csv); });

    py::class_<OosResult>(m, "OosResult")
        .def_readonly("restricted_id", &OosResult::restricted_id)
        .def_readonly("augmented_id", &OosResult::augmented_id)
        .def_readonly("mse_augmented", &OosResult::mse_augmented)
        .def_readonly("mse_restricted", &OosResult::mse_restricted)
        .def_readonly("cm", &OosResult::cm)
        .def_readonly("lb_p_augmented", &OosResult::lb_p_augmented)
        .def_readonly("lb_p_restricted", &OosResult::lb_p_restricted)
        .def_readonly("truths", &OosResult::truths)
        .def_readonly("forecasts_augmented", &OosResult::forecasts_augmented)
        .def_readonly("forecasts_restricted", &OosResult::forecasts_restricted);
    m.def(
        "oos",
        [](const std::vector<DailyRecord>& records, const std::string& restricted, const std::string& augmented,
           const OosSplit& split) { return cmd_oos(records, find_model(restricted), find_model(augmented), split); },
        py::arg("records"), py::arg("restricted"), py::arg("augmented"), py::arg("split") = OosSplit{});
    m.def("write_oos_csv", [](const std::vector<OosResult>& r) { return to_csv(r, write_oos_csv); });

    m.def(
        "select",
        [](const std::vector<DailyRecord>& records, const std::string& response, const std::string& kform) {
            const auto s = cmd_select(records, response, kform);
            return py::make_tuple(s.selected, s.token, s.fit);
        },
        py::arg("records"), py::arg("response") = "rvar", py::arg("kurtosis") = "rkurt");

    py::class_<SymbolSummary>(m, "SymbolSummary")
        .def_readonly("symbol", &SymbolSummary::symbol)
        .def_readonly("codes", &SymbolSummary::codes)
        .def_readonly("selection", &SymbolSummary::selection);
    m.def("summarize_symbol", &summarize_symbol, py::arg("symbol"), py::arg("records"), py::arg("response") = "rvar",
          py::arg("kurtosis") = "rkurt");
    m.def("write_report_csv", [](const std::vector<SymbolSummary>& r) { return to_csv(r, write_report_csv); });
    m.def("write_report_counts_csv",
          [](const std::vector<SymbolSummary>& r) { return to_csv(r, write_report_counts_csv); });
}
