#pragma once

#include <cstdint>
#include <vector>

namespace fieldcdf {

// Inputs shared by the analytic error bounds.
//
//   alpha    Lipschitz constant of the field (field units per unit path)
//   n        average spatial sampling rate (samples per unit path)
//   lambda   gap-support multiplier (gaps lie in (0, lambda/n])
//   C        additive constant in the location-MSE bound (configurable;
//            the analysis leaves it free, default 1)
//   beta     asymptotic constant in (0,1] of the sup-probability bound
//   eps      accuracy level for the value-deviation bounds (field units)
//   delta    failure probability for the finite-trial band
//   N        number of trials
//   max_pdf  max over x of the density of the field value at s
struct BoundParams {
    double alpha;
    double n;
    double lambda;
    double C = 1.0;
    double beta = 1.0;
    double eps;
    double delta;
    double N;
    double max_pdf;

    // Throws std::invalid_argument on any out-of-range member.
    void validate() const;
};

// E[(S_k - s)^2] <= ((n+lambda-1)*s*(1-s) + C) * lambda^2 / n^2:
// mean squared distance between the estimator's chosen sampling location
// and the target s.
double location_mse_bound(const BoundParams& p, double s);

// P(|X_hat(s) - X(s)| > eps) <= (alpha^2/eps^2) * location_mse_bound:
// Chebyshev through the Lipschitz constant.  May exceed 1 (vacuous) and is
// reported as-is.
double value_deviation_prob_bound(const BoundParams& p, double s);

// Uniform-in-s version: (32/beta) * (alpha^2/eps^2) * (n+lambda-1) *
// lambda^2 / n^2.
double value_deviation_prob_sup_bound(const BoundParams& p);

// 2 * alpha * max_pdf * (lambda/n) * sqrt((n+lambda-1)*s*(1-s) + C):
// how far the value CDF can shift when evaluation moves by the location
// error; independent of eps.
double cdf_shift_bound(const BoundParams& p, double s);

// Pointwise |F_estimated(x) - F_true(x)| bound: the deviation probability
// plus the CDF shift term.
double cdf_pointwise_error_bound(const BoundParams& p, double s);

// sqrt(log(2/delta) / (2N)): half-width of the distribution-free empirical
// CDF confidence band at level delta.
double dkw_epsilon(double N, double delta);

// Finite-trial bound on sup_x |F_{estimated,N}(x) - F_true(x)| holding with
// probability >= 1 - delta: A^2/eps^2 + 2*max_pdf*A + dkw_epsilon, with
// A = alpha * sqrt((n+lambda-1)*s*(1-s) + C) * lambda / n.
struct SupErrorBound {
    double value;
    double amplitude;  // the A above
    double dkw_term;
};
SupErrorBound cdf_sup_error_bound(const BoundParams& p, double s);

// Grid-argmin of cdf_pointwise_error_bound over eps; ties break toward the
// smaller eps.
struct EpsChoice {
    double eps;
    double bound;
};
EpsChoice minimize_pointwise_bound(const BoundParams& p, double s,
                                   const std::vector<double>& eps_grid);

// A probability bound above 1 carries no information; reports flag it.
inline bool is_vacuous(double bound_value) { return bound_value > 1.0; }

// Histogram estimate of max_x density(x) from a sample: Freedman-Diaconis
// bin width, tallest bin, times a safety factor (density peaks between grid
// points would otherwise be clipped).
double estimate_max_pdf(const std::vector<double>& values,
                        double safety_factor = 1.25);

} // namespace fieldcdf
