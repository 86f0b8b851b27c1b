#pragma once

// Reference implementations used only by the tests. They deliberately take a different
// numerical route from the library: normal equations with Gauss-Jordan elimination instead
// of QR, Simpson quadrature instead of closed forms or special functions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Regularized incomplete beta I_x(a, b) for a >= 1, b >= 1/2, through s = 1 - w^2.
inline double ibeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    auto integrand = [&](double w) {
        const double one_minus = 1.0 - w * w;
        if (one_minus <= 0.0) return a == 1.0 ? 2.0 * std::pow(w, 2.0 * b - 1.0) : 0.0;
        return 2.0 * std::exp((a - 1.0) * std::log(one_minus) - log_beta) * std::pow(w, 2.0 * b - 1.0);
    };
    return simpson(integrand, std::sqrt(1.0 - x), 1.0, 40000);
}

inline double t_two_sided(double t, double df) {
    if (std::isinf(t)) return 0.0;
    return ibeta(df / 2.0, 0.5, df / (df + t * t));
}

inline double f_upper(double f, double d1, double d2) {
    if (std::isinf(f)) return 0.0;
    if (f <= 0.0) return 1.0;
    return ibeta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

/// Gauss-Jordan inverse with partial pivoting.
inline std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        if (std::abs(a[piv][c]) < 1e-300) throw std::runtime_error("singular");
        std::swap(a[c], a[piv]);
        std::swap(inv[c], inv[piv]);
        const double d = a[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] /= d;
            inv[c][k] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double m = a[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= m * a[c][k];
                inv[r][k] -= m * inv[c][k];
            }
        }
    }
    return inv;
}

struct Ols {
    std::vector<double> beta, se, t, p, residuals, fitted;
    double r2 = 0, f = 0, f_p = 1, rss = 0, aic = 0;
};

/// Intercept plus the given columns.
inline Ols ols(const std::vector<double>& y, const std::vector<std::vector<double>>& cols) {
    const std::size_t n = y.size();
    const std::size_t p = cols.size() + 1;
    auto x = [&](std::size_t i, std::size_t j) { return j == 0 ? 1.0 : cols[j - 1][i]; };
    std::vector<std::vector<double>> xtx(p, std::vector<double>(p, 0.0));
    std::vector<double> xty(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < p; ++a) {
            xty[a] += x(i, a) * y[i];
            for (std::size_t b = 0; b < p; ++b) xtx[a][b] += x(i, a) * x(i, b);
        }
    }
    const auto inv = invert(xtx);
    Ols o;
    o.beta.assign(p, 0.0);
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) o.beta[a] += inv[a][b] * xty[b];
    }
    double ybar = 0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double tss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0;
        for (std::size_t a = 0; a < p; ++a) fit += x(i, a) * o.beta[a];
        o.fitted.push_back(fit);
        o.residuals.push_back(y[i] - fit);
        o.rss += (y[i] - fit) * (y[i] - fit);
        tss += (y[i] - ybar) * (y[i] - ybar);
    }
    const double df = static_cast<double>(n - p);
    const double s2 = o.rss / df;
    for (std::size_t a = 0; a < p; ++a) {
        o.se.push_back(std::sqrt(s2 * inv[a][a]));
        o.t.push_back(o.beta[a] / o.se.back());
        o.p.push_back(t_two_sided(o.t.back(), df));
    }
    o.r2 = 1.0 - o.rss / tss;
    if (p > 1) {
        o.f = ((tss - o.rss) / static_cast<double>(p - 1)) / s2;
        o.f_p = f_upper(o.f, static_cast<double>(p - 1), df);
    }
    o.aic = static_cast<double>(n) * std::log(o.rss / static_cast<double>(n)) + 2.0 * static_cast<double>(p);
    return o;
}

/// Step-5 rule written out directly: neighbors are the window of m + 1 indices holding i,
/// clamped to the series, minus i itself.
inline std::vector<bool> outlier_keep(const std::vector<double>& p, int m_cfg, double k) {
    const long n = static_cast<long>(p.size());
    std::vector<bool> keep(p.size(), true);
    if (n < 2) return keep;
    const long m = std::min<long>(m_cfg, n - 1);
    for (long i = 0; i < n; ++i) {
        long lo = std::clamp(i - m / 2, 0L, n - 1 - m);
        std::vector<double> nb;
        for (long j = lo; j <= lo + m; ++j) {
            if (j != i) nb.push_back(p[j]);
        }
        double mean = 0;
        for (double v : nb) mean += v;
        mean /= static_cast<double>(nb.size());
        double var = 0;
        for (double v : nb) var += (v - mean) * (v - mean);
        const double sd = nb.size() > 1 ? std::sqrt(var / static_cast<double>(nb.size() - 1)) : 0.0;
        keep[i] = sd == 0.0 ? p[i] == mean : std::abs(p[i] - mean) <= k * sd;
    }
    return keep;
}

inline bool close(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace oracle
