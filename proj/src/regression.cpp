#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "hfm/distributions.hpp"
#include "hfm/stats.hpp"

namespace hfm {

namespace {

constexpr double kRankTolerance = 1e-10;

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

Eigen::Index rank_of(const Eigen::MatrixXd& m) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(kRankTolerance);
    return qr.rank();
}

// Greedy scan in column order: a column that adds no rank to the ones before it is collinear.
std::vector<std::string> find_collinear(const Eigen::MatrixXd& xs, const std::vector<std::string>& names) {
    std::vector<std::string> out;
    std::vector<Eigen::Index> basis;
    for (Eigen::Index j = 0; j < xs.cols(); ++j) {
        Eigen::MatrixXd trial(xs.rows(), static_cast<Eigen::Index>(basis.size()) + 1);
        for (std::size_t b = 0; b < basis.size(); ++b) trial.col(static_cast<Eigen::Index>(b)) = xs.col(basis[b]);
        trial.col(trial.cols() - 1) = xs.col(j);
        if (rank_of(trial) == trial.cols()) {
            basis.push_back(j);
        } else {
            out.push_back(names[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

}  // namespace

AlignedPanel AlignedPanel::select(const std::vector<std::string>& keep) const {
    AlignedPanel out;
    out.response = response;
    for (const auto& name : keep) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw std::out_of_range("panel has no column '" + name + "'");
        out.names.push_back(name);
        out.columns.push_back(columns[static_cast<std::size_t>(it - names.begin())]);
    }
    return out;
}

std::size_t RegressionResult::index_of(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::out_of_range("regression has no coefficient '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
}

double RegressionResult::predict(std::span<const double> regressors) const {
    const bool intercept = !names.empty() && names.front() == kInterceptName;
    const std::size_t offset = intercept ? 1 : 0;
    if (regressors.size() + offset != coefficients.size()) {
        throw std::invalid_argument("predict: regressor count does not match the fitted model");
    }
    double y = intercept ? coefficients.front() : 0.0;
    for (std::size_t j = 0; j < regressors.size(); ++j) y += coefficients[j + offset] * regressors[j];
    return y;
}

RankDeficientError::RankDeficientError(std::vector<std::string> collinear)
    : std::invalid_argument("rank-deficient design; collinear columns: " + join(collinear, ", ")),
      collinear_(std::move(collinear)) {}

RegressionResult ols_fit(const AlignedPanel& panel, bool intercept) {
    const std::size_t n = panel.rows();
    if (panel.columns.size() != panel.names.size()) {
        throw std::invalid_argument("ols_fit: column/name count mismatch");
    }
    for (const auto& c : panel.columns) {
        if (c.size() != n) throw std::invalid_argument("ols_fit: column length does not match response");
    }
    const std::size_t p = panel.columns.size() + (intercept ? 1 : 0);
    if (p == 0) throw std::invalid_argument("ols_fit: empty model");
    if (n <= p) {
        throw std::invalid_argument("ols_fit: need more observations (" + std::to_string(n) + ") than parameters (" +
                                    std::to_string(p) + ")");
    }

    RegressionResult res;
    if (intercept) res.names.emplace_back(kInterceptName);
    res.names.insert(res.names.end(), panel.names.begin(), panel.names.end());

    const auto rows = static_cast<Eigen::Index>(n);
    const auto cols = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd x(rows, cols);
    Eigen::Index c = 0;
    if (intercept) x.col(c++).setOnes();
    for (const auto& col : panel.columns) {
        x.col(c++) = Eigen::Map<const Eigen::VectorXd>(col.data(), rows);
    }
    const Eigen::Map<const Eigen::VectorXd> y(panel.response.data(), rows);

    Eigen::VectorXd scale = x.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < cols; ++j) {
        if (scale(j) == 0.0) scale(j) = 1.0;  // all-zero column; caught by the rank check below
    }
    const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < cols) throw RankDeficientError(find_collinear(xs, res.names));

    const Eigen::VectorXd beta_s = qr.solve(y);
    const Eigen::VectorXd fitted = xs * beta_s;
    const Eigen::VectorXd resid = y - fitted;

    // (Xs'Xs)^{-1} = P R^{-1} R^{-T} P'
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(cols, cols));
    const Eigen::MatrixXd perm = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv_s = perm * (r_inv * r_inv.transpose()) * perm.transpose();

    const double rss = resid.squaredNorm();
    const double dof = static_cast<double>(n - p);
    const double sigma2 = rss / dof;

    res.coefficients.resize(p);
    res.std_errors.resize(p);
    res.t_stats.resize(p);
    res.p_values.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double b = beta_s(jj) / scale(jj);
        const double var = sigma2 * xtx_inv_s(jj, jj) / (scale(jj) * scale(jj));
        const double se = std::sqrt(std::max(var, 0.0));
        res.coefficients[j] = b;
        res.std_errors[j] = se;
        if (se > 0.0) {
            res.t_stats[j] = b / se;
            res.p_values[j] = dist::student_t_two_sided(res.t_stats[j], dof);
        } else {
            res.t_stats[j] = b == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), b);
            res.p_values[j] = b == 0.0 ? 1.0 : 0.0;
        }
    }

    double tss = 0.0;
    if (intercept) {
        const double mean = y.mean();
        tss = (y.array() - mean).square().sum();
    } else {
        tss = y.squaredNorm();
    }
    res.rss = rss;
    res.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;

    const std::size_t k = p - (intercept ? 1 : 0);
    if (k == 0) {
        res.f_stat = 0.0;
        res.f_p_value = 1.0;
    } else if (rss == 0.0) {
        res.f_stat = std::numeric_limits<double>::infinity();
        res.f_p_value = 0.0;
    } else {
        res.f_stat = (std::max(tss - rss, 0.0) / static_cast<double>(k)) / sigma2;
        res.f_p_value = dist::f_upper(res.f_stat, static_cast<double>(k), dof);
    }

    const double nd = static_cast<double>(n);
    res.aic = nd * std::log(rss / nd) + 2.0 * static_cast<double>(p);
    res.residuals.assign(resid.data(), resid.data() + rows);
    res.fitted.assign(fitted.data(), fitted.data() + rows);
    res.n_obs = n;
    res.n_params = p;
    return res;
}

}  // namespace hfm
