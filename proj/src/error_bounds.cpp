#include "fieldcdf/error_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fieldcdf/numeric.hpp"

namespace fieldcdf {

namespace {

void check_unit_interval(double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::domain_error("path coordinate s must lie in [0,1], got " +
                                format_double(s));
}

double location_variance_core(const BoundParams& p, double s) {
    return (p.n + p.lambda - 1.0) * s * (1.0 - s) + p.C;
}

} // namespace

void BoundParams::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (!(n > 0.0)) throw std::invalid_argument("n must be > 0");
    if (!(lambda > 1.0)) throw std::invalid_argument("lambda must be > 1");
    if (!(C > 0.0)) throw std::invalid_argument("C must be > 0");
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("beta must lie in (0,1]");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1)");
    if (!(N >= 1.0)) throw std::invalid_argument("N must be >= 1");
    if (!(max_pdf > 0.0)) throw std::invalid_argument("max_pdf must be > 0");
}

double location_mse_bound(const BoundParams& p, double s) {
    check_unit_interval(s);
    return location_variance_core(p, s) * p.lambda * p.lambda / (p.n * p.n);
}

double value_deviation_prob_bound(const BoundParams& p, double s) {
    if (!(p.eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    return (p.alpha * p.alpha) / (p.eps * p.eps) * location_mse_bound(p, s);
}

double value_deviation_prob_sup_bound(const BoundParams& p) {
    if (!(p.eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    if (!(p.beta > 0.0 && p.beta <= 1.0))
        throw std::invalid_argument("beta must lie in (0,1]");
    return (32.0 / p.beta) * (p.alpha * p.alpha) / (p.eps * p.eps) *
           (p.n + p.lambda - 1.0) * p.lambda * p.lambda / (p.n * p.n);
}

double cdf_shift_bound(const BoundParams& p, double s) {
    check_unit_interval(s);
    return 2.0 * p.alpha * p.max_pdf * (p.lambda / p.n) *
           std::sqrt(location_variance_core(p, s));
}

double cdf_pointwise_error_bound(const BoundParams& p, double s) {
    return value_deviation_prob_bound(p, s) + cdf_shift_bound(p, s);
}

double dkw_epsilon(double N, double delta) {
    if (!(N >= 1.0)) throw std::invalid_argument("N must be >= 1");
    if (!(delta > 0.0 && delta <= 2.0))
        throw std::invalid_argument("delta must lie in (0,2]");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * N));
}

SupErrorBound cdf_sup_error_bound(const BoundParams& p, double s) {
    check_unit_interval(s);
    if (!(p.eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    double a = p.alpha * std::sqrt(location_variance_core(p, s)) * p.lambda /
               p.n;
    double dkw = dkw_epsilon(p.N, p.delta);
    return SupErrorBound{a * a / (p.eps * p.eps) + 2.0 * p.max_pdf * a + dkw,
                         a, dkw};
}

EpsChoice minimize_pointwise_bound(const BoundParams& p, double s,
                                   const std::vector<double>& eps_grid) {
    if (eps_grid.empty())
        throw std::invalid_argument("eps grid must not be empty");
    EpsChoice best{0.0, 0.0};
    bool have = false;
    for (double eps : eps_grid) {
        if (!(eps > 0.0))
            throw std::invalid_argument("eps grid values must be > 0");
        BoundParams q = p;
        q.eps = eps;
        double bound = cdf_pointwise_error_bound(q, s);
        // Strictly-less keeps the first (smallest) eps among exact ties
        // when the grid is sorted; for unsorted grids prefer smaller eps
        // explicitly.
        if (!have || bound < best.bound ||
            (bound == best.bound && eps < best.eps)) {
            best = EpsChoice{eps, bound};
            have = true;
        }
    }
    return best;
}

double estimate_max_pdf(const std::vector<double>& values,
                        double safety_factor) {
    if (values.size() < 2)
        throw std::invalid_argument("density estimate needs >= 2 values");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    double lo = sorted.front();
    double hi = sorted.back();
    if (hi == lo)
        throw std::invalid_argument(
            "density estimate is degenerate: all values equal");
    std::size_t m = sorted.size();
    // Type-7 quantiles for the interquartile range.
    auto quantile = [&](double q) {
        double pos = q * static_cast<double>(m - 1);
        std::size_t base = static_cast<std::size_t>(pos);
        double frac = pos - static_cast<double>(base);
        if (base + 1 >= m) return sorted[m - 1];
        return sorted[base] + frac * (sorted[base + 1] - sorted[base]);
    };
    double iqr = quantile(0.75) - quantile(0.25);
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(m));
    if (!(width > 0.0))
        width = (hi - lo) / std::sqrt(static_cast<double>(m));
    std::size_t bins =
        static_cast<std::size_t>(std::ceil((hi - lo) / width));
    bins = std::clamp<std::size_t>(bins, 1, 1u << 20);
    width = (hi - lo) / static_cast<double>(bins);

    std::vector<std::int64_t> counts(bins, 0);
    for (double v : sorted) {
        std::size_t b = static_cast<std::size_t>((v - lo) / width);
        if (b >= bins) b = bins - 1;
        ++counts[b];
    }
    std::int64_t tallest = *std::max_element(counts.begin(), counts.end());
    double density =
        static_cast<double>(tallest) / (static_cast<double>(m) * width);
    return density * safety_factor;
}

} // namespace fieldcdf
