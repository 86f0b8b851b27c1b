#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hfm/catalog.hpp"
#include "hfm/config.hpp"
#include "hfm/estimators.hpp"
#include "hfm/ingest.hpp"
#include "hfm/records.hpp"
#include "hfm/stats.hpp"

namespace hfm {

/// Realized measures of one cleaned day, before daily returns are attached.
struct DayMeasures {
    std::string date;
    double close = 0.0;
    RealizedMoments moments;
    double bipower = 0.0;
    std::int64_t tvol = 0;
};

/// clean -> resample -> moments (+ bipower on its own grid) -> volume.
DayMeasures compute_day(const TickSeries& raw, EstimatorKind estimator, const PipelineConfig& cfg);

/// Attaches daily returns from consecutive closes; the first row has no return.
std::vector<DailyRecord> build_records(const std::vector<DayMeasures>& days);

/// Days that fail (parse error, empty after cleaning, too short) are reported in `warnings` and skipped.
std::vector<DailyRecord> compute_records(const std::vector<TickSeries>& raw_days, EstimatorKind estimator,
                                         const PipelineConfig& cfg, std::vector<std::string>* warnings = nullptr);

struct ComputeOutput {
    std::map<std::string, std::vector<DailyRecord>> by_symbol;
    std::vector<std::string> warnings;
};

/**
 * Reads every `<SYMBOL>_<YYYY-MM-DD>.csv` in `input_dir` (other files are ignored), groups
 * by symbol and orders by date. Throws std::runtime_error if no day could be computed.
 */
ComputeOutput cmd_compute(const std::filesystem::path& input_dir, EstimatorKind estimator, const PipelineConfig& cfg);

struct ModelRun {
    std::string model_id;
    int horizon = 1;
    std::optional<RegressionResult> result;
    std::string error;             ///< set when the fit failed
    std::size_t dropped_missing = 0;
};

ModelRun run_model(const std::vector<DailyRecord>& records, const ModelCatalogEntry& model, int horizon,
                   bool standardize_tvol = false);

/// Every model at every horizon; a failing fit is recorded in its ModelRun and the batch continues.
std::vector<ModelRun> cmd_regress(const std::vector<DailyRecord>& records, const std::vector<std::string>& model_ids,
                                  const std::vector<int>& horizons, bool standardize_tvol = false);

inline constexpr const char* kResultsHeader =
    "model_id,horizon,regressor,estimate,std_error,p_value,code,r_squared,f_p_value,aic,n_obs";

/// One row per coefficient plus a "(model)" summary row per successful run.
void write_results_csv(const std::vector<ModelRun>& runs, std::ostream& out);

struct OosResult {
    std::string restricted_id;
    std::string augmented_id;
    double mse_augmented = 0.0;   ///< MSE_1
    double mse_restricted = 0.0;  ///< MSE_2
    TestResult cm;
    CmCriticalValues critical_values;
    std::optional<double> lb_p_augmented;   ///< Ljung-Box(10) on forecast errors, when P > 10
    std::optional<double> lb_p_restricted;
    RegressionResult augmented_fit;   ///< fit on the training window (last refit for the recursive scheme)
    RegressionResult restricted_fit;
    std::vector<double> truths;
    std::vector<double> forecasts_augmented;
    std::vector<double> forecasts_restricted;
};

/**
 * Fits both models on the first train_len aligned rows (one-day horizon) and forecasts the
 * next test_len rows. The recursive scheme refits on all rows before each forecast.
 * Throws std::invalid_argument when the models are not nested or the panel is too short.
 */
OosResult cmd_oos(const std::vector<DailyRecord>& records, const ModelCatalogEntry& restricted,
                  const ModelCatalogEntry& augmented, const OosSplit& split, const CmCriticalValues& cv = {});

inline constexpr const char* kOosHeader =
    "comparison,mse_1,mse_2,cm_statistic,cv_0.90,cv_0.95,cv_0.99,cm_level,lb_p_1,lb_p_2";
void write_oos_csv(const std::vector<OosResult>& results, std::ostream& out);

struct SelectionResult {
    std::vector<std::string> selected;
    std::string token;  ///< e.g. "dret^-+rkurt+tvol", "1" when nothing is selected
    RegressionResult fit;
};

/// Display token for a column name: dret_pos -> dret^+, dret_neg -> dret^-.
std::string covariate_token(const std::string& column);

/// Stepwise AIC over {dret_pos, dret_neg, rskew, kurtosis_form, tvol} for the one-day-ahead response.
SelectionResult cmd_select(const std::vector<DailyRecord>& records, const std::string& response,
                           const std::string& kurtosis_form);

/// Regression contexts of the cross-sectional summary, in column order.
inline constexpr std::array<const char*, 4> kReportContexts = {"21", "24", "26", "27"};
inline constexpr std::array<const char*, 4> kReportContextLabels = {"dret&rskew", "tvol", "dret^+&dret^-", "all"};
inline constexpr std::array<const char*, 5> kCodes = {"0", "0.5", "1", "2", "3"};

struct SymbolSummary {
    std::string symbol;
    std::array<std::string, 4> codes;  ///< kurtosis significance per context, "NA" if the fit failed
    std::string selection;
};

SymbolSummary summarize_symbol(const std::string& symbol, const std::vector<DailyRecord>& records,
                               const std::string& response, const std::string& kurtosis_form);

/// Header `symbol,dret&rskew,tvol,dret^+&dret^-,all,covariate_selection`.
void write_report_csv(const std::vector<SymbolSummary>& rows, std::ostream& out);

/// `context,code,count` for every context and code: the bar heights of the summary figures.
void write_report_counts_csv(const std::vector<SymbolSummary>& rows, std::ostream& out);

}  // namespace hfm
