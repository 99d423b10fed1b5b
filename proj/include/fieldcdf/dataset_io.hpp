#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fieldcdf/cdf_estimation.hpp"
#include "fieldcdf/renewal_sampling.hpp"

namespace fieldcdf {

// Malformed dataset file; line is 1-based, 0 when not line-specific.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line_no = 0)
        : std::runtime_error(msg), line(line_no) {}
    int line;
};

// `# key: value` lines at the top of a dataset file, kept verbatim and in
// order so a load/save round-trip is byte-identical.  Known keys: device,
// path_length_m, sample_period_s, range_min, range_max.
struct DatasetMetadata {
    std::vector<std::pair<std::string, std::string>> entries;

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    // NaN when absent or non-numeric.
    double get_double(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
};

// Mobile-sensor trial logs: values in sampling order, no locations.
struct TrialSet {
    std::vector<TrialRecord> trials;  // hidden_locations always empty
    DatasetMetadata metadata;
    std::vector<std::string> warnings;  // e.g. values outside device range
};

// Fixed-sensor samples at one marked path location.
struct ReferenceEntry {
    std::string location_id;
    DecimalValue s;
    std::vector<double> samples;
};

struct ReferenceSet {
    std::vector<ReferenceEntry> entries;
    DatasetMetadata metadata;

    const ReferenceEntry* find(const std::string& location_id) const;
};

// CSV `trial_id,sample_index,value` under optional metadata lines;
// sample_index is 1-based and contiguous within each trial.
TrialSet load_trials(const std::string& path);
void save_trials(const TrialSet& set, const std::string& path);

// CSV `location_id,s,value`, one row per fixed-sensor sample.
ReferenceSet load_reference(const std::string& path);
void save_reference(const ReferenceSet& set, const std::string& path);

// Mobile-vs-fixed CDF comparison at one marked location: the estimated CDF
// uses only each trial's (values, M) through the estimator view.
struct ComparisonReport {
    std::string location_id;
    double s;
    std::int64_t trial_count;
    std::int64_t ref_count;
    double avg_diff;
    double max_diff;
    double dkw_mobile;  // band half-width for the trial-count CDF
    double dkw_fixed;   // band half-width for the reference-sample CDF
    EmpiricalCdf estimated;
    EmpiricalCdf reference;
};

ComparisonReport compare_mobile_vs_fixed(const TrialSet& trials,
                                         const ReferenceSet& ref,
                                         const std::string& location_id,
                                         double delta = 0.05,
                                         std::int64_t grid_size = 512);

// One row per report: location_id,s,trials,ref_samples,avg_diff,max_diff,
// dkw_mobile,dkw_fixed.
void save_comparison_csv(const std::vector<ComparisonReport>& reports,
                         double delta, std::int64_t grid_size,
                         const std::string& path);

} // namespace fieldcdf
