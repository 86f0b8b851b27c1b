#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hfm/ingest.hpp"

namespace hfm {

enum class EstimatorKind { naive, preavg };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);

struct NormalizedMoments {
    std::optional<double> nrskew;
    std::optional<double> nrkurt;
};

struct RealizedMoments {
    double rvar = 0.0;
    double rskew = 0.0;
    double rkurt = 0.0;
    std::optional<double> nrskew;  ///< missing when rvar <= 0
    std::optional<double> nrkurt;
    EstimatorKind kind = EstimatorKind::naive;
};

/// rskew / rvar^{3/2} and rkurt / rvar^2; both missing unless rvar > 0.
NormalizedMoments normalize_moments(double rvar, double rskew, double rkurt);

/// Power sums of the given log-returns. Throws std::invalid_argument if `returns` is empty.
RealizedMoments naive_moments(std::span<const double> returns);
RealizedMoments naive_moments(const GridPath& path);

/**
 * Pre-averaging weight function g on [0, 1] with g(0) = g(1) = 0.
 *
 * The integrals gbar(p) = \int_0^1 g(x)^p dx for p = 2, 3, 4 are computed once at
 * construction (closed form when supplied, otherwise Gauss-Kronrod between the
 * listed breakpoints) and are read-only afterwards.
 */
class Weight {
public:
    using Fn = std::function<double(double)>;
    using ClosedForm = std::function<double(int)>;

    Weight(std::string name, Fn g, std::vector<double> breakpoints = {}, ClosedForm closed_form = {});

    const std::string& name() const { return name_; }
    double operator()(double x) const { return (x <= 0.0 || x >= 1.0) ? 0.0 : g_(x); }
    /// Throws std::invalid_argument unless p is 2, 3 or 4.
    double gbar(int p) const;

private:
    std::string name_;
    Fn g_;
    std::array<double, 3> gbar_{};
};

/// g(x) = min(x, 1 - x).
const Weight& triangular_weight();

/// Registry lookup; throws std::invalid_argument for unknown names.
const Weight& weight_by_name(const std::string& name);

/// \int_0^1 g(x)^p dx for the registered weight.
double gbar(const Weight& weight, int p);

struct PreAvgConfig {
    int k_n = 10;
    std::string weight = "min(x,1-x)";
};

struct PreAvgReturn {
    double weighted = 0.0;     ///< sum_j g(j/k) * r_{i+j}
    double weighted_sq = 0.0;  ///< sum_j (g(j/k) - g((j-1)/k))^2 * r_{i+j}^2
};

/**
 * Pre-averaged return of block i (1-based, 1 <= i <= n - k_n) built from the
 * increments Y_{t_{i+j}} - Y_{t_{i+j-1}}, j = 1..k_n.
 */
PreAvgReturn preavg_return(const GridPath& path, const PreAvgConfig& cfg, std::size_t i);

/**
 * Pre-averaging realized variance, skewness and kurtosis over the overlapping
 * blocks i = 1..n - k_n. rvar carries the noise-bias subtraction and may come out
 * negative, in which case the normalized moments are left missing.
 * Throws std::invalid_argument unless n > k_n >= 2.
 */
RealizedMoments preavg_moments(const GridPath& path, const PreAvgConfig& cfg);

/// (pi/2) * sum_{i>=2} |r_i| |r_{i-1}|. Throws std::invalid_argument if n < 2.
double bipower_variation(std::span<const double> returns);
double bipower_variation(const GridPath& path);

}  // namespace hfm
