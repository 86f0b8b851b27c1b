#include "hfm/records.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hfm/format.hpp"
#include "hfm/ingest.hpp"

namespace hfm {

namespace {

using Member = std::optional<double> DailyRecord::*;

struct ColumnDef {
    const char* name;
    Member member;
};

constexpr ColumnDef kColumns[] = {
    {"dret", &DailyRecord::dret},       {"dret_pos", &DailyRecord::dret_pos},
    {"dret_neg", &DailyRecord::dret_neg}, {"rvar", &DailyRecord::rvar},
    {"rskew", &DailyRecord::rskew},     {"rkurt", &DailyRecord::rkurt},
    {"nrskew", &DailyRecord::nrskew},   {"nrkurt", &DailyRecord::nrkurt},
    {"sqrt_rkurt", &DailyRecord::sqrt_rkurt}, {"bipower", &DailyRecord::bipower},
    {"tvol", &DailyRecord::tvol},
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::optional<double> DailyRecord::value(const std::string& column) const {
    for (const auto& c : kColumns) {
        if (column == c.name) return this->*(c.member);
    }
    throw std::out_of_range("unknown record column '" + column + "'");
}

void write_records_csv(const std::vector<DailyRecord>& records, std::ostream& out) {
    out << kRecordHeader << '\n';
    for (const auto& r : records) {
        out << r.date;
        for (const auto& c : kColumns) out << ',' << format_real(r.*(c.member));
        out << '\n';
    }
}

std::vector<DailyRecord> read_records_csv(std::istream& in) {
    std::vector<DailyRecord> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kRecordHeader) throw ParseError(line_no, "unexpected header '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != std::size(kColumns) + 1) {
            throw ParseError(line_no, "expected " + std::to_string(std::size(kColumns) + 1) + " fields");
        }
        DailyRecord rec;
        rec.date = fields[0];
        for (std::size_t c = 0; c < std::size(kColumns); ++c) {
            const auto& f = fields[c + 1];
            if (f.empty()) continue;
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size()) {
                throw ParseError(line_no, std::string("malformed ") + kColumns[c].name + " value '" + f + "'");
            }
            rec.*(kColumns[c].member) = v;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::optional<double> panel_value(const std::vector<DailyRecord>& records, std::size_t row, const std::string& column) {
    const auto pos = column.rfind("_l");
    if (pos != std::string::npos && pos + 2 < column.size()) {
        const auto digits = column.substr(pos + 2);
        std::size_t lag = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), lag);
        if (ec == std::errc() && ptr == digits.data() + digits.size()) {
            if (lag > row) return std::nullopt;
            return records[row - lag].value(column.substr(0, pos));
        }
    }
    return records[row].value(column);
}

AlignedPanel align_panel(const std::vector<DailyRecord>& records, const std::string& response,
                         const std::vector<std::string>& regressors, int horizon, AlignmentInfo* info,
                         bool standardize_tvol) {
    if (horizon < 1) throw std::invalid_argument("align_panel: horizon must be >= 1");
    const auto d = static_cast<std::size_t>(horizon);
    AlignedPanel panel;
    panel.names = regressors;
    panel.columns.resize(regressors.size());
    AlignmentInfo local;
    std::vector<double> row_values(regressors.size());
    for (std::size_t t = 0; t + d < records.size(); ++t) {
        const auto y = panel_value(records, t + d, response);
        bool complete = y.has_value();
        for (std::size_t j = 0; complete && j < regressors.size(); ++j) {
            const auto v = panel_value(records, t, regressors[j]);
            if (!v) {
                complete = false;
            } else {
                row_values[j] = *v;
            }
        }
        if (!complete) {
            ++local.dropped_missing;
            continue;
        }
        panel.response.push_back(*y);
        for (std::size_t j = 0; j < regressors.size(); ++j) panel.columns[j].push_back(row_values[j]);
        local.regressor_rows.push_back(t);
    }
    if (standardize_tvol) {
        for (std::size_t j = 0; j < regressors.size(); ++j) {
            if (regressors[j] != "tvol" || panel.columns[j].size() < 2) continue;
            auto& col = panel.columns[j];
            const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
            double ss = 0.0;
            for (double v : col) ss += (v - mean) * (v - mean);
            const double sd = std::sqrt(ss / static_cast<double>(col.size() - 1));
            if (sd > 0.0) {
                for (double& v : col) v = (v - mean) / sd;
            }
        }
    }
    if (info) *info = std::move(local);
    return panel;
}

}  // namespace hfm
