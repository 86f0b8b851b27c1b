#include "hfm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <stdexcept>

#include "hfm/format.hpp"

namespace hfm {

DayMeasures compute_day(const TickSeries& raw, EstimatorKind estimator, const PipelineConfig& cfg) {
    const TickSeries clean = clean_ticks(raw, cfg.clean);
    if (clean.records.empty()) throw std::runtime_error("empty day after cleaning");

    DayMeasures day;
    day.date = raw.date;
    day.close = closing_price(clean, cfg.clean);
    if (estimator == EstimatorKind::naive) {
        day.moments = naive_moments(resample(clean, cfg.naive_delta, cfg.clean));
    } else {
        day.moments = preavg_moments(resample(clean, cfg.preavg_delta, cfg.clean), cfg.preavg);
    }
    day.bipower = bipower_variation(resample(clean, cfg.bipower_delta, cfg.clean));
    day.tvol = daily_volume(clean);
    return day;
}

std::vector<DailyRecord> build_records(const std::vector<DayMeasures>& days) {
    std::vector<DailyRecord> out;
    out.reserve(days.size());
    for (std::size_t i = 0; i < days.size(); ++i) {
        const auto& d = days[i];
        DailyRecord r;
        r.date = d.date;
        if (i > 0) {
            const double ret = daily_return(d.close, days[i - 1].close);
            r.dret = ret;
            r.dret_pos = std::max(ret, 0.0);
            r.dret_neg = std::min(ret, 0.0);
        }
        r.rvar = d.moments.rvar;
        r.rskew = d.moments.rskew;
        r.rkurt = d.moments.rkurt;
        r.nrskew = d.moments.nrskew;
        r.nrkurt = d.moments.nrkurt;
        r.sqrt_rkurt = std::sqrt(d.moments.rkurt);
        r.bipower = d.bipower;
        r.tvol = static_cast<double>(d.tvol);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<DailyRecord> compute_records(const std::vector<TickSeries>& raw_days, EstimatorKind estimator,
                                         const PipelineConfig& cfg, std::vector<std::string>* warnings) {
    std::vector<DayMeasures> days;
    days.reserve(raw_days.size());
    for (const auto& raw : raw_days) {
        try {
            days.push_back(compute_day(raw, estimator, cfg));
        } catch (const std::exception& e) {
            if (warnings) warnings->push_back(raw.symbol + " " + raw.date + ": skipped (" + e.what() + ")");
        }
    }
    return build_records(days);
}

ComputeOutput cmd_compute(const std::filesystem::path& input_dir, EstimatorKind estimator, const PipelineConfig& cfg) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(input_dir)) throw std::runtime_error("input directory not found: " + input_dir.string());

    static const std::regex pattern(R"(^(.+)_(\d{4}-\d{2}-\d{2})\.csv$)");
    std::map<std::string, std::vector<std::pair<std::string, fs::path>>> files;
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().filename().string();
        std::smatch m;
        if (std::regex_match(name, m, pattern)) files[m[1]].emplace_back(m[2], entry.path());
    }

    ComputeOutput out;
    for (auto& [symbol, days] : files) {
        std::sort(days.begin(), days.end());
        std::vector<TickSeries> raw_days;
        for (const auto& [date, path] : days) {
            std::ifstream in(path);
            if (!in) {
                out.warnings.push_back(path.string() + ": unreadable, skipped");
                continue;
            }
            try {
                raw_days.push_back(parse_ticks(in, symbol, date));
            } catch (const std::exception& e) {
                out.warnings.push_back(path.string() + ": " + e.what() + ", skipped");
            }
        }
        auto records = compute_records(raw_days, estimator, cfg, &out.warnings);
        if (!records.empty()) out.by_symbol.emplace(symbol, std::move(records));
    }
    if (out.by_symbol.empty()) throw std::runtime_error("no day could be computed from " + input_dir.string());
    return out;
}

ModelRun run_model(const std::vector<DailyRecord>& records, const ModelCatalogEntry& model, int horizon,
                   bool standardize_tvol) {
    ModelRun run;
    run.model_id = model.model_id;
    run.horizon = horizon;
    try {
        AlignmentInfo info;
        const auto panel = align_panel(records, model.response, model.regressors, horizon, &info, standardize_tvol);
        run.dropped_missing = info.dropped_missing;
        run.result = ols_fit(panel);
    } catch (const std::exception& e) {
        run.error = e.what();
    }
    return run;
}

std::vector<ModelRun> cmd_regress(const std::vector<DailyRecord>& records, const std::vector<std::string>& model_ids,
                                  const std::vector<int>& horizons, bool standardize_tvol) {
    std::vector<ModelRun> runs;
    for (const auto& id : model_ids) {
        const auto& model = find_model(id);
        for (int d : horizons) runs.push_back(run_model(records, model, d, standardize_tvol));
    }
    return runs;
}

void write_results_csv(const std::vector<ModelRun>& runs, std::ostream& out) {
    out << kResultsHeader << '\n';
    for (const auto& run : runs) {
        if (!run.result) continue;
        const auto& r = *run.result;
        for (std::size_t j = 0; j < r.names.size(); ++j) {
            out << run.model_id << ',' << run.horizon << ',' << r.names[j] << ',' << format_real(r.coefficients[j])
                << ',' << format_real(r.std_errors[j]) << ',' << format_real(r.p_values[j]) << ','
                << significance_code(r.p_values[j]) << ",,,,\n";
        }
        out << run.model_id << ',' << run.horizon << ",(model),,,,," << format_real(r.r_squared) << ','
            << format_real(r.f_p_value) << ',' << format_real(r.aic) << ',' << r.n_obs << '\n';
    }
}

namespace {

AlignedPanel slice_rows(const AlignedPanel& panel, std::size_t begin, std::size_t end,
                        const std::vector<std::string>& names) {
    const auto sub = panel.select(names);
    AlignedPanel out;
    out.names = sub.names;
    out.response.assign(sub.response.begin() + static_cast<std::ptrdiff_t>(begin),
                        sub.response.begin() + static_cast<std::ptrdiff_t>(end));
    for (const auto& col : sub.columns) {
        out.columns.emplace_back(col.begin() + static_cast<std::ptrdiff_t>(begin),
                                 col.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

std::vector<double> row_of(const AlignedPanel& panel, std::size_t row, const std::vector<std::string>& names) {
    std::vector<double> out;
    for (const auto& name : names) {
        const auto it = std::find(panel.names.begin(), panel.names.end(), name);
        out.push_back(panel.columns[static_cast<std::size_t>(it - panel.names.begin())][row]);
    }
    return out;
}

std::optional<double> forecast_error_whiteness(const std::vector<double>& errors) {
    constexpr std::size_t kLags = 10;
    if (errors.size() <= kLags) return std::nullopt;
    try {
        return ljung_box(errors, kLags).p_value;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

}  // namespace

OosResult cmd_oos(const std::vector<DailyRecord>& records, const ModelCatalogEntry& restricted,
                  const ModelCatalogEntry& augmented, const OosSplit& split, const CmCriticalValues& cv) {
    const bool nested = restricted.response == augmented.response &&
                        std::all_of(restricted.regressors.begin(), restricted.regressors.end(), [&](const auto& r) {
                            return std::find(augmented.regressors.begin(), augmented.regressors.end(), r) !=
                                   augmented.regressors.end();
                        });
    if (!nested) {
        throw std::invalid_argument("model " + restricted.model_id + " is not nested in model " + augmented.model_id);
    }
    if (split.train_len == 0 || split.test_len < 2) {
        throw std::invalid_argument("oos split needs train_len >= 1 and test_len >= 2");
    }

    const auto panel = align_panel(records, augmented.response, augmented.regressors, 1);
    if (split.train_len + split.test_len > panel.rows()) {
        throw std::invalid_argument("oos split needs " + std::to_string(split.train_len + split.test_len) +
                                    " aligned rows, panel has " + std::to_string(panel.rows()));
    }

    OosResult out;
    out.restricted_id = restricted.model_id;
    out.augmented_id = augmented.model_id;
    out.critical_values = cv;

    const std::size_t first_test = split.train_len;
    const std::size_t end_test = split.train_len + split.test_len;
    out.augmented_fit = ols_fit(slice_rows(panel, 0, first_test, augmented.regressors));
    out.restricted_fit = ols_fit(slice_rows(panel, 0, first_test, restricted.regressors));

    std::vector<double> err_aug, err_res;
    for (std::size_t s = first_test; s < end_test; ++s) {
        if (split.scheme == OosScheme::recursive && s > first_test) {
            out.augmented_fit = ols_fit(slice_rows(panel, 0, s, augmented.regressors));
            out.restricted_fit = ols_fit(slice_rows(panel, 0, s, restricted.regressors));
        }
        const double truth = panel.response[s];
        const double f_aug = out.augmented_fit.predict(row_of(panel, s, augmented.regressors));
        const double f_res = out.restricted_fit.predict(row_of(panel, s, restricted.regressors));
        out.truths.push_back(truth);
        out.forecasts_augmented.push_back(f_aug);
        out.forecasts_restricted.push_back(f_res);
        err_aug.push_back(truth - f_aug);
        err_res.push_back(truth - f_res);
    }

    out.mse_augmented = normalized_mse(out.forecasts_augmented, out.truths);
    out.mse_restricted = normalized_mse(out.forecasts_restricted, out.truths);
    out.cm = cm_encompassing(err_res, err_aug, cv);
    out.lb_p_augmented = forecast_error_whiteness(err_aug);
    out.lb_p_restricted = forecast_error_whiteness(err_res);
    return out;
}

void write_oos_csv(const std::vector<OosResult>& results, std::ostream& out) {
    out << kOosHeader << '\n';
    for (const auto& r : results) {
        out << '(' << r.augmented_id << ") versus (" << r.restricted_id << ")," << format_real(r.mse_augmented) << ','
            << format_real(r.mse_restricted) << ',' << format_real(r.cm.statistic) << ','
            << format_real(r.critical_values.p90) << ',' << format_real(r.critical_values.p95) << ','
            << format_real(r.critical_values.p99) << ',' << r.cm.decision_level.value_or("") << ','
            << format_real(r.lb_p_augmented) << ',' << format_real(r.lb_p_restricted) << '\n';
    }
}

std::string covariate_token(const std::string& column) {
    if (column == "dret_pos") return "dret^+";
    if (column == "dret_neg") return "dret^-";
    return column;
}

SelectionResult cmd_select(const std::vector<DailyRecord>& records, const std::string& response,
                           const std::string& kurtosis_form) {
    const std::vector<std::string> candidates = {"dret_pos", "dret_neg", "rskew", kurtosis_form, "tvol"};
    const auto panel = align_panel(records, response, candidates, 1);
    auto step = stepwise_aic(panel);
    SelectionResult out;
    out.selected = step.selected;
    out.fit = std::move(step.fit);
    if (out.selected.empty()) {
        out.token = "1";
    } else {
        for (std::size_t i = 0; i < out.selected.size(); ++i) {
            if (i) out.token += '+';
            out.token += covariate_token(out.selected[i]);
        }
    }
    return out;
}

SymbolSummary summarize_symbol(const std::string& symbol, const std::vector<DailyRecord>& records,
                               const std::string& response, const std::string& kurtosis_form) {
    SymbolSummary s;
    s.symbol = symbol;
    for (std::size_t c = 0; c < kReportContexts.size(); ++c) {
        const auto model = model_variant(find_model(kReportContexts[c]), response, kurtosis_form);
        const auto run = run_model(records, model, 1);
        if (run.result) {
            s.codes[c] = significance_code(run.result->p_values[run.result->index_of(kurtosis_form)]);
        } else {
            s.codes[c] = "NA";
        }
    }
    try {
        s.selection = cmd_select(records, response, kurtosis_form).token;
    } catch (const std::exception&) {
        s.selection = "NA";
    }
    return s;
}

void write_report_csv(const std::vector<SymbolSummary>& rows, std::ostream& out) {
    out << "symbol";
    for (const char* label : kReportContextLabels) out << ',' << label;
    out << ",covariate_selection\n";
    for (const auto& r : rows) {
        out << r.symbol;
        for (const auto& code : r.codes) out << ',' << code;
        out << ',' << r.selection << '\n';
    }
}

void write_report_counts_csv(const std::vector<SymbolSummary>& rows, std::ostream& out) {
    out << "context,code,count\n";
    for (std::size_t c = 0; c < kReportContexts.size(); ++c) {
        for (const char* code : kCodes) {
            const auto n = std::count_if(rows.begin(), rows.end(), [&](const auto& r) { return r.codes[c] == code; });
            out << kReportContextLabels[c] << ',' << code << ',' << n << '\n';
        }
    }
}

}  // namespace hfm
