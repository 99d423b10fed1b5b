#pragma once

#include <cstdint>
#include <vector>

#include "fieldcdf/field_model.hpp"
#include "fieldcdf/rng.hpp"

namespace fieldcdf {

enum class IntersampleKind { triangular_symmetric, scaled_beta, deterministic };

// Law of the gap between consecutive samples along the path.  Every built-in
// has mean 1/n and support inside (0, lambda/n]: n is the average sampling
// rate and lambda caps how far a single gap can stretch.
class IntersampleDistribution {
  public:
    // Symmetric triangular on (0, 2/n) with mode 1/n (lambda = 2).
    static IntersampleDistribution triangular(std::int64_t n);
    // (lambda/n) * B with B ~ Beta(shape, shape*(lambda-1)); the Beta mean
    // 1/lambda scales the gap mean to exactly 1/n.
    static IntersampleDistribution scaled_beta(std::int64_t n, double lambda,
                                               double shape = 2.0);
    // Every gap exactly the largest double <= 1/n (see draw()).
    static IntersampleDistribution deterministic(std::int64_t n);

    static IntersampleDistribution from_kind(IntersampleKind kind,
                                             std::int64_t n, double lambda,
                                             double shape);

    IntersampleKind kind() const { return kind_; }
    std::int64_t n() const { return n_; }
    double lambda() const { return lambda_; }
    double max_gap() const { return lambda_ / static_cast<double>(n_); }

    // One gap draw; guaranteed 0 < theta <= lambda/n.
    double draw(Rng& rng) const;

  private:
    IntersampleDistribution(IntersampleKind kind, std::int64_t n,
                            double lambda, double shape);
    IntersampleKind kind_;
    std::int64_t n_;
    double lambda_;
    double shape_;
    double deterministic_gap_ = 0.0;
};

// Sample locations on one unit-path traversal: partial sums of the gaps,
// stopped at the last sum that still fits on the path.
struct LocationSequence {
    std::vector<double> locations;  // S_1..S_M, each the compensated prefix sum
    std::vector<double> intervals;  // theta_1..theta_M
    double overshoot_interval;      // theta_{M+1}, the draw that left the path
    std::int64_t sample_count() const {
        return static_cast<std::int64_t>(locations.size());
    }
};

// One traversal's samples.  hidden_locations and the overshoot witness are
// oracle-side data: estimators only ever see the TrialView below.
struct TrialRecord {
    std::int64_t trial_id = 0;
    std::vector<double> values;
    std::int64_t sample_count = 0;
    std::vector<double> hidden_locations;  // empty for ingested real data
    double overshoot_interval = 0.0;       // meaningful iff hidden present
    double epoch_time = 0.0;
    bool has_hidden() const { return !hidden_locations.empty(); }
};

// What estimators are allowed to look at: values and their count, nothing
// about where they were taken.
struct TrialView {
    std::int64_t trial_id;
    const std::vector<double>* values;
    std::int64_t sample_count;
};

inline TrialView estimator_view(const TrialRecord& r) {
    return TrialView{r.trial_id, &r.values, r.sample_count};
}

// Trial timing: trial i starts at epoch i*epoch_spacing and samples every
// sample_period from there (times in the same unit as the field's envelope
// period).  Defaults: one time-unit between trials, one second (1/3600 of
// a unit) between samples.
struct TimingModel {
    double epoch_spacing = 1.0;
    double sample_period = 1.0 / 3600.0;
};

// Draws gaps until the next one would leave the unit path.  The returned
// sequence satisfies sum(intervals) <= 1 < sum(intervals)+overshoot exactly
// under compensated summation (see CompensatedSum).
LocationSequence generate_locations(const IntersampleDistribution& dist,
                                    Rng& rng);

// One full traversal against a field: freezes the trial's amplitudes, walks
// the path, records the field value at each (hidden) location.
TrialRecord run_trial(const FieldSpec& spec,
                      const IntersampleDistribution& dist,
                      std::int64_t trial_id, std::uint64_t seed,
                      const TimingModel& timing = {});

// run_trial plus the frozen field, for callers that need reference values
// X(s) from the same amplitude draw (the experiment harness does).
struct TrialWithField {
    TrialRecord record;
    FieldRealization field;
};
TrialWithField run_trial_full(const FieldSpec& spec,
                              const IntersampleDistribution& dist,
                              std::int64_t trial_id, std::uint64_t seed,
                              const TimingModel& timing = {});

// Monte-Carlo mean and standard error of the sample count M.
struct SampleCountStats {
    double mean;
    double std_error;
};
SampleCountStats mean_sample_count(const IntersampleDistribution& dist,
                                   std::int64_t repetitions,
                                   std::uint64_t seed);

} // namespace fieldcdf
