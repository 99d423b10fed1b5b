#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fieldcdf/numeric.hpp"
#include "fieldcdf/renewal_sampling.hpp"

namespace fieldcdf {

// Right-continuous empirical CDF over a finite sample.  Evaluation counts
// with integers and divides once, so F(x) is always an exact multiple of
// 1/count.
class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(std::vector<double> values);

    // F(x) = (#values <= x) / count.
    double operator()(double x) const;
    std::int64_t count_at_most(double x) const;

    std::int64_t count() const { return static_cast<std::int64_t>(values_.size()); }
    const std::vector<double>& sorted_values() const { return values_; }
    double min_value() const { return values_.front(); }
    double max_value() const { return values_.back(); }

  private:
    std::vector<double> values_;  // sorted ascending
};

inline EmpiricalCdf build_empirical_cdf(std::vector<double> values) {
    return EmpiricalCdf(std::move(values));
}

inline double cdf_eval(const EmpiricalCdf& cdf, double x) { return cdf(x); }

// Which sample stands in for location s on a trial with M samples:
// k = floor((M-1)*s) + 1, 1-based.  The rational overloads keep the floor
// exact when s came from a decimal literal (0.3 as a double times 10 lands
// just below 3 and would otherwise select the wrong sample).
std::int64_t select_index(std::int64_t sample_count, double s);
std::int64_t select_index(std::int64_t sample_count, std::int64_t s_num,
                          std::int64_t s_den);
std::int64_t select_index(std::int64_t sample_count, const DecimalValue& s);

// The location-unaware estimate: the selected sample's value.
double estimate_field_at(const TrialView& trial, double s);
double estimate_field_at(const TrialView& trial, const DecimalValue& s);
double estimate_field_at(const TrialRecord& trial, double s);
double estimate_field_at(const TrialRecord& trial, const DecimalValue& s);

// Mean |a(x) - b(x)| over the given evaluation points.
double avg_pointwise_diff(const EmpiricalCdf& a, const EmpiricalCdf& b,
                          const std::vector<double>& grid);

// Exact sup over all x of |a(x) - b(x)|: both CDFs are step functions, so
// scanning the merged jump set covers every plateau (this is the two-sample
// Kolmogorov-Smirnov statistic).
double max_pointwise_diff(const EmpiricalCdf& a, const EmpiricalCdf& b);

// Equispaced evaluation points spanning both samples' ranges, padded by 1%
// on each side so the grid sees the flat tails.
std::vector<double> make_metric_grid(const EmpiricalCdf& a,
                                     const EmpiricalCdf& b,
                                     std::int64_t size);

// Writes the jump set as CSV `x,F` (one row per distinct value).
void export_cdf_csv(const EmpiricalCdf& cdf, const std::string& path);

} // namespace fieldcdf
