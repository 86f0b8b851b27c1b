#include "hfm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hfm {

std::string to_string(EstimatorKind kind) {
    return kind == EstimatorKind::naive ? "naive" : "preavg";
}

EstimatorKind estimator_from_string(const std::string& name) {
    if (name == "naive") return EstimatorKind::naive;
    if (name == "preavg") return EstimatorKind::preavg;
    throw std::invalid_argument("unknown estimator '" + name + "' (expected naive or preavg)");
}

NormalizedMoments normalize_moments(double rvar, double rskew, double rkurt) {
    if (!(rvar > 0.0)) return {};
    return {rskew / std::pow(rvar, 1.5), rkurt / (rvar * rvar)};
}

RealizedMoments naive_moments(std::span<const double> returns) {
    if (returns.empty()) throw std::invalid_argument("naive_moments: no increments");
    RealizedMoments m;
    m.kind = EstimatorKind::naive;
    for (double r : returns) {
        const double r2 = r * r;
        m.rvar += r2;
        m.rskew += r2 * r;
        m.rkurt += r2 * r2;
    }
    const auto norm = normalize_moments(m.rvar, m.rskew, m.rkurt);
    m.nrskew = norm.nrskew;
    m.nrkurt = norm.nrkurt;
    return m;
}

RealizedMoments naive_moments(const GridPath& path) {
    const auto r = path.increments();
    return naive_moments(std::span<const double>(r));
}

Weight::Weight(std::string name, Fn g, std::vector<double> breakpoints, ClosedForm closed_form)
    : name_(std::move(name)), g_(std::move(g)) {
    std::vector<double> edges{0.0};
    for (double b : breakpoints) {
        if (b > 0.0 && b < 1.0) edges.push_back(b);
    }
    edges.push_back(1.0);
    std::sort(edges.begin(), edges.end());
    for (int p = 2; p <= 4; ++p) {
        double value = 0.0;
        if (closed_form) {
            value = closed_form(p);
        } else {
            auto integrand = [this, p](double x) { return std::pow((*this)(x), p); };
            for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
                value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, edges[e], edges[e + 1],
                                                                                      15, 1e-14);
            }
        }
        if (!(value > 0.0)) throw std::invalid_argument("weight '" + name_ + "': gbar(p) must be positive");
        gbar_[static_cast<std::size_t>(p - 2)] = value;
    }
}

double Weight::gbar(int p) const {
    if (p < 2 || p > 4) throw std::invalid_argument("gbar: p must be 2, 3 or 4");
    return gbar_[static_cast<std::size_t>(p - 2)];
}

const Weight& triangular_weight() {
    // \int_0^1 min(x,1-x)^p dx = 2 \int_0^{1/2} x^p dx = 1 / (2^p (p + 1))
    static const Weight w("min(x,1-x)", [](double x) { return std::min(x, 1.0 - x); }, {0.5},
                          [](int p) { return 1.0 / (std::ldexp(1.0, p) * (p + 1)); });
    return w;
}

const Weight& weight_by_name(const std::string& name) {
    if (name == triangular_weight().name() || name == "triangular") return triangular_weight();
    throw std::invalid_argument("unknown pre-averaging weight '" + name + "'");
}

double gbar(const Weight& weight, int p) { return weight.gbar(p); }

namespace {

struct BlockWeights {
    std::vector<double> g;      // g(j/k), j = 1..k
    std::vector<double> dg_sq;  // (g(j/k) - g((j-1)/k))^2, j = 1..k
};

BlockWeights block_weights(const Weight& w, int k) {
    BlockWeights bw;
    bw.g.resize(static_cast<std::size_t>(k));
    bw.dg_sq.resize(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j) {
        const double gj = w(static_cast<double>(j) / k);
        const double gprev = w(static_cast<double>(j - 1) / k);
        bw.g[static_cast<std::size_t>(j - 1)] = gj;
        bw.dg_sq[static_cast<std::size_t>(j - 1)] = (gj - gprev) * (gj - gprev);
    }
    return bw;
}

// returns[m] = Y_{t_{m+1}} - Y_{t_m}, so the increment ending at t_{i+j} is returns[i + j - 1].
PreAvgReturn block_return(const std::vector<double>& returns, const BlockWeights& bw, std::size_t i) {
    PreAvgReturn out;
    for (std::size_t j = 1; j <= bw.g.size(); ++j) {
        const double r = returns[i + j - 1];
        out.weighted += bw.g[j - 1] * r;
        out.weighted_sq += bw.dg_sq[j - 1] * r * r;
    }
    return out;
}

}  // namespace

PreAvgReturn preavg_return(const GridPath& path, const PreAvgConfig& cfg, std::size_t i) {
    const std::size_t n = path.n();
    const auto k = static_cast<std::size_t>(cfg.k_n);
    if (cfg.k_n < 1 || i < 1 || i + k > n) {
        throw std::out_of_range("preavg_return: block index out of range");
    }
    const auto bw = block_weights(weight_by_name(cfg.weight), cfg.k_n);
    return block_return(path.increments(), bw, i);
}

RealizedMoments preavg_moments(const GridPath& path, const PreAvgConfig& cfg) {
    const std::size_t n = path.n();
    if (cfg.k_n < 2) throw std::invalid_argument("preavg_moments: k_n must be >= 2");
    const auto k = static_cast<std::size_t>(cfg.k_n);
    if (n <= k) throw std::invalid_argument("preavg_moments: need n > k_n");

    const Weight& w = weight_by_name(cfg.weight);
    const auto bw = block_weights(w, cfg.k_n);
    const auto returns = path.increments();

    double s2 = 0.0, s3 = 0.0, s4 = 0.0, sbar = 0.0;
    for (std::size_t i = 1; i <= n - k; ++i) {
        const auto b = block_return(returns, bw, i);
        const double y2 = b.weighted * b.weighted;
        s2 += y2;
        s3 += y2 * b.weighted;
        s4 += y2 * y2;
        sbar += b.weighted_sq;
    }
    const double kd = static_cast<double>(k);
    RealizedMoments m;
    m.kind = EstimatorKind::preavg;
    m.rvar = (s2 / kd - sbar / (2.0 * kd)) / w.gbar(2);
    m.rskew = (s3 / kd) / w.gbar(3);
    m.rkurt = (s4 / kd) / w.gbar(4);
    const auto norm = normalize_moments(m.rvar, m.rskew, m.rkurt);
    m.nrskew = norm.nrskew;
    m.nrkurt = norm.nrkurt;
    return m;
}

double bipower_variation(std::span<const double> returns) {
    if (returns.size() < 2) throw std::invalid_argument("bipower_variation: need at least 2 increments");
    double acc = 0.0;
    for (std::size_t i = 1; i < returns.size(); ++i) acc += std::abs(returns[i]) * std::abs(returns[i - 1]);
    return std::numbers::pi / 2.0 * acc;
}

double bipower_variation(const GridPath& path) {
    const auto r = path.increments();
    return bipower_variation(std::span<const double>(r));
}

}  // namespace hfm
