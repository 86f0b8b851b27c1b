#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hfm/stats.hpp"

namespace hfm {

/// One row of the regression panel. Missing values are empty optionals.
struct DailyRecord {
    std::string date;
    std::optional<double> dret;
    std::optional<double> dret_pos;  ///< max(dret, 0)
    std::optional<double> dret_neg;  ///< min(dret, 0), keeps its sign
    std::optional<double> rvar;
    std::optional<double> rskew;
    std::optional<double> rkurt;
    std::optional<double> nrskew;
    std::optional<double> nrkurt;
    std::optional<double> sqrt_rkurt;
    std::optional<double> bipower;
    std::optional<double> tvol;

    /// Column value by CSV name; throws std::out_of_range for unknown names.
    std::optional<double> value(const std::string& column) const;
};

inline constexpr const char* kRecordHeader =
    "date,dret,dret_pos,dret_neg,rvar,rskew,rkurt,nrskew,nrkurt,sqrt_rkurt,bipower,tvol";

void write_records_csv(const std::vector<DailyRecord>& records, std::ostream& out);

/// Throws ParseError (with line number) on a bad header or malformed field.
std::vector<DailyRecord> read_records_csv(std::istream& in);

/**
 * Value of `column` for row `row`. Lagged columns are written `<name>_l<k>` and read
 * `<name>` at row - k (missing before the panel start).
 */
std::optional<double> panel_value(const std::vector<DailyRecord>& records, std::size_t row, const std::string& column);

struct AlignmentInfo {
    std::vector<std::size_t> regressor_rows;  ///< record index t of each aligned row
    std::size_t dropped_missing = 0;          ///< candidate rows dropped for a missing value
};

/**
 * Pairs the response at t + horizon with regressors at t, keeping only rows where every
 * value is present. With standardize_tvol the `tvol` column is z-scored over the kept rows.
 */
AlignedPanel align_panel(const std::vector<DailyRecord>& records, const std::string& response,
                         const std::vector<std::string>& regressors, int horizon, AlignmentInfo* info = nullptr,
                         bool standardize_tvol = false);

}  // namespace hfm
