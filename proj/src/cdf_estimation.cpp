#include "fieldcdf/cdf_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace fieldcdf {

namespace {

void check_unit_interval(double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::domain_error("path coordinate s must lie in [0,1], got " +
                                format_double(s));
}

} // namespace

EmpiricalCdf::EmpiricalCdf(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty())
        throw std::invalid_argument("empirical CDF needs at least one value");
    for (double v : values_)
        if (std::isnan(v))
            throw std::invalid_argument("empirical CDF values must not be NaN");
    std::sort(values_.begin(), values_.end());
}

std::int64_t EmpiricalCdf::count_at_most(double x) const {
    return std::upper_bound(values_.begin(), values_.end(), x) -
           values_.begin();
}

double EmpiricalCdf::operator()(double x) const {
    return static_cast<double>(count_at_most(x)) /
           static_cast<double>(values_.size());
}

std::int64_t select_index(std::int64_t sample_count, double s) {
    if (sample_count < 1)
        throw std::invalid_argument("sample count must be >= 1");
    check_unit_interval(s);
    long double p =
        static_cast<long double>(sample_count - 1) * static_cast<long double>(s);
    long double f = std::floor(p);
    // (M-1)*s carries at most (M-1)*half-ulp(s) of representation error;
    // when the product sits within that band just below an integer, the
    // intended value is the integer itself.
    long double snap =
        static_cast<long double>(sample_count - 1) * 0x1.0p-52L;
    if (p - f > 1.0L - snap && f + 1.0L <= static_cast<long double>(sample_count - 1))
        f += 1.0L;
    return static_cast<std::int64_t>(f) + 1;
}

std::int64_t select_index(std::int64_t sample_count, std::int64_t s_num,
                          std::int64_t s_den) {
    if (sample_count < 1)
        throw std::invalid_argument("sample count must be >= 1");
    if (s_den <= 0 || s_num < 0 || s_num > s_den)
        throw std::domain_error("path coordinate must be a fraction in [0,1]");
    std::int64_t prod;
    if (__builtin_mul_overflow(sample_count - 1, s_num, &prod))
        throw std::overflow_error("index computation overflow");
    return prod / s_den + 1;  // exact floor: all terms nonnegative
}

std::int64_t select_index(std::int64_t sample_count, const DecimalValue& s) {
    if (s.exact) return select_index(sample_count, s.num, s.den);
    return select_index(sample_count, s.value);
}

double estimate_field_at(const TrialView& trial, double s) {
    std::int64_t k = select_index(trial.sample_count, s);
    return (*trial.values)[static_cast<std::size_t>(k - 1)];
}

double estimate_field_at(const TrialView& trial, const DecimalValue& s) {
    std::int64_t k = select_index(trial.sample_count, s);
    return (*trial.values)[static_cast<std::size_t>(k - 1)];
}

double estimate_field_at(const TrialRecord& trial, double s) {
    TrialView view = estimator_view(trial);
    return estimate_field_at(view, s);
}

double estimate_field_at(const TrialRecord& trial, const DecimalValue& s) {
    TrialView view = estimator_view(trial);
    return estimate_field_at(view, s);
}

double avg_pointwise_diff(const EmpiricalCdf& a, const EmpiricalCdf& b,
                          const std::vector<double>& grid) {
    if (grid.empty())
        throw std::invalid_argument("metric grid must not be empty");
    double total = 0.0;
    for (double x : grid) total += std::abs(a(x) - b(x));
    return total / static_cast<double>(grid.size());
}

double max_pointwise_diff(const EmpiricalCdf& a, const EmpiricalCdf& b) {
    const std::vector<double>& va = a.sorted_values();
    const std::vector<double>& vb = b.sorted_values();
    double na = static_cast<double>(va.size());
    double nb = static_cast<double>(vb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double best = 0.0;
    // Between jumps both CDFs are constant, so the sup is attained at a
    // merged jump value; absorb all ties at each value before comparing.
    while (i < va.size() || j < vb.size()) {
        double v;
        if (i < va.size() && j < vb.size())
            v = std::min(va[i], vb[j]);
        else if (i < va.size())
            v = va[i];
        else
            v = vb[j];
        while (i < va.size() && va[i] == v) ++i;
        while (j < vb.size() && vb[j] == v) ++j;
        best = std::max(best, std::abs(static_cast<double>(i) / na -
                                       static_cast<double>(j) / nb));
    }
    return best;
}

std::vector<double> make_metric_grid(const EmpiricalCdf& a,
                                     const EmpiricalCdf& b,
                                     std::int64_t size) {
    if (size < 1)
        throw std::invalid_argument("metric grid size must be >= 1");
    double lo = std::min(a.min_value(), b.min_value());
    double hi = std::max(a.max_value(), b.max_value());
    double pad = 0.01 * (hi - lo);
    if (pad == 0.0) pad = 0.01 * std::max(std::abs(hi), 1.0);
    lo -= pad;
    hi += pad;
    std::vector<double> grid(static_cast<std::size_t>(size));
    if (size == 1) {
        grid[0] = 0.5 * (lo + hi);
        return grid;
    }
    double step = (hi - lo) / static_cast<double>(size - 1);
    for (std::int64_t i = 0; i < size; ++i)
        grid[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
    return grid;
}

void export_cdf_csv(const EmpiricalCdf& cdf, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << "x,F\n";
    const std::vector<double>& vals = cdf.sorted_values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i + 1 < vals.size() && vals[i + 1] == vals[i]) continue;
        out << format_double(vals[i]) << ','
            << format_double(static_cast<double>(i + 1) /
                             static_cast<double>(vals.size()))
            << '\n';
    }
    if (!out)
        throw std::runtime_error("failed writing output file: " + path);
}

} // namespace fieldcdf
