#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfm {

/// Response plus named regressor columns, all of equal length, no missing values.
struct AlignedPanel {
    std::vector<double> response;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return response.size(); }
    /// Panel restricted to the named columns, in the given order.
    AlignedPanel select(const std::vector<std::string>& keep) const;
};

struct RegressionResult {
    std::vector<std::string> names;  ///< "(intercept)" first when an intercept is fitted
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;
    double r_squared = 0.0;
    double f_stat = 0.0;
    double f_p_value = 1.0;
    double rss = 0.0;
    double aic = 0.0;
    std::vector<double> residuals;
    std::vector<double> fitted;
    std::size_t n_obs = 0;
    std::size_t n_params = 0;

    /// Index of the named coefficient; throws std::out_of_range if absent.
    std::size_t index_of(const std::string& name) const;
    /// Prediction for one row of regressor values (same order as the fitted columns, no intercept entry).
    double predict(std::span<const double> regressors) const;
};

inline constexpr const char* kInterceptName = "(intercept)";

/// Design matrix does not have full column rank.
class RankDeficientError : public std::invalid_argument {
public:
    explicit RankDeficientError(std::vector<std::string> collinear);
    const std::vector<std::string>& collinear() const noexcept { return collinear_; }

private:
    std::vector<std::string> collinear_;
};

/**
 * Ordinary least squares with classical inference.
 *
 * Standard errors come from sigma^2 (X'X)^{-1} with sigma^2 = RSS / (n - p); t p-values are
 * two-sided Student-t(n - p); the F test is all non-intercept coefficients jointly zero
 * against F(p - 1, n - p); AIC = n ln(RSS / n) + 2p. Columns are scaled to unit norm
 * before a column-pivoted QR so regressors on very different scales (share volumes next
 * to fourth powers of returns) do not trip the rank check.
 *
 * Throws std::invalid_argument when n <= p and RankDeficientError when columns are collinear.
 */
RegressionResult ols_fit(const AlignedPanel& panel, bool intercept = true);

struct TestResult {
    double statistic = 0.0;
    std::optional<double> p_value;
    std::optional<std::string> decision_level;
};

/// Sample autocorrelation at lags 1..max_lag. Throws on zero variance.
std::vector<double> autocorrelations(std::span<const double> series, std::size_t max_lag);

/// Q = n(n+2) sum_k rho_k^2 / (n-k), p-value from chi-square(h). Requires n > h >= 1.
TestResult ljung_box(std::span<const double> series, std::size_t lags);

/// D'Agostino (1970) skewness test: Z transform of sqrt(b1), two-sided normal p-value. Requires n >= 8.
TestResult dagostino_skewness(std::span<const double> series);

/// sum (pred - truth)^2 / sum truth^2.
double normalized_mse(std::span<const double> predictions, std::span<const double> truths);

struct CmCriticalValues {
    double p90 = 0.449;
    double p95 = 0.698;
    double p99 = 1.300;
};

/**
 * Clark-McCracken ENC-NEW statistic P * cbar / sigma2^2 for nested forecasts, where
 * cbar = mean(e1^2 - e1 e2) and sigma2^2 = mean(e2^2). `errors_small` come from the
 * restricted model. decision_level is "0.99", "0.95" or "0.90" for the highest critical
 * value strictly exceeded, and absent otherwise.
 */
TestResult cm_encompassing(std::span<const double> errors_small, std::span<const double> errors_large,
                           const CmCriticalValues& cv = {});

/// "3" (p < .001), "2" (< .01), "1" (< .05), "0.5" (< .1), "0" otherwise. Throws for p outside [0, 1].
std::string significance_code(double p_value);

struct StepwiseResult {
    std::vector<std::string> selected;  ///< in candidate order
    RegressionResult fit;
};

/**
 * Bidirectional stepwise search on AIC starting from the full candidate model. Each round
 * considers dropping every included candidate and re-adding every excluded one, takes the
 * move with the strictly lowest AIC (first in candidate order on ties) and stops at a local
 * minimum. An intercept is always kept.
 */
StepwiseResult stepwise_aic(const AlignedPanel& candidates);

}  // namespace hfm
