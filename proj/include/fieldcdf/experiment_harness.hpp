#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fieldcdf/cdf_estimation.hpp"
#include "fieldcdf/error_bounds.hpp"
#include "fieldcdf/field_model.hpp"
#include "fieldcdf/kv_config.hpp"
#include "fieldcdf/renewal_sampling.hpp"

namespace fieldcdf {

// How the accuracy level eps is chosen per sweep cell:
//   fixed:<v>   use v as-is
//   n^<p>       eps = n to the power p ("n^-1/4" and "n^-0.25" both work)
//   minimize    grid-argmin of the pointwise CDF-error bound
struct EpsRule {
    enum class Kind { fixed, power_of_n, minimize };
    Kind kind = Kind::minimize;
    double value = 0.0;  // the fixed eps, or the exponent

    static EpsRule parse(const std::string& text);
    std::string to_string() const;

    // Resolves eps for one cell; base carries everything but eps.
    double resolve(const BoundParams& base, double s, double n) const;

    // The documented grid the minimize rule searches (61 geometric points
    // spanning [1e-3, 1e3]).
    static std::vector<double> default_eps_grid();
};

// Full description of a simulation study: the field, the gap law, the
// (s, n, N) sweep, and the bound configuration.
struct ExperimentConfig {
    FieldSpec field = FieldSpec::cosine_sum(500.0, 5.0, 5, 10.0);
    std::string field_table_path;  // source path when field.kind=user_table
    IntersampleKind dist_kind = IntersampleKind::triangular_symmetric;
    double lambda = 2.0;
    double beta_shape = 2.0;
    std::vector<DecimalValue> s_eval;
    std::vector<std::int64_t> n_sweep;
    std::vector<std::int64_t> N_sweep;
    std::int64_t repetitions = 200;
    std::uint64_t seed = 1;
    std::int64_t metric_grid_size = 512;
    double C = 1.0;
    double beta = 1.0;
    double delta = 0.05;
    EpsRule eps_rule;
    double scale = 1.0;
    std::int64_t threads = 1;
    TimingModel timing;
    std::int64_t max_pdf_sample = 20000;
    std::int64_t ref_sample = 20000;

    static ExperimentConfig from_config(const KeyValueConfig& cfg);
    void validate() const;

    // repetitions scaled by `scale`, never below 1.
    std::int64_t effective_repetitions() const;

    // Every effective setting as key = value text, for the config echo
    // written into result files.
    std::map<std::string, std::string> to_entries() const;
};

// One repetition's metrics at one (s, n, N).
struct RepetitionRow {
    DecimalValue s;
    std::int64_t n;
    std::int64_t N;
    std::int64_t rep;
    double avg_diff;
    double max_diff;
    double bound;
    bool exceeded;
    double eps;
};

struct AggregateRow {
    DecimalValue s;
    std::int64_t n;
    std::int64_t N;
    double mean_avg_diff;
    double mean_max_diff;
    double coverage_rate;  // fraction of repetitions with exceeded set
};

struct ExperimentResult {
    std::vector<RepetitionRow> rows;        // sorted by (s, n, N, rep)
    std::vector<AggregateRow> aggregates;   // one per (s, n, N)
};

// One repetition at one cell: N fresh trials, estimated-vs-reference CDF
// metrics for every s in cfg.s_eval.  Reproducible from (cfg.seed, n, N,
// rep_id) alone.
std::vector<RepetitionRow> run_repetition(const ExperimentConfig& cfg,
                                          std::int64_t n, std::int64_t N,
                                          std::int64_t rep_id);

// The full Cartesian sweep with aggregation.
ExperimentResult run_sweep(const ExperimentConfig& cfg);

// Writes per-repetition rows as CSV under a `# key = value` config echo.
// The file is complete-or-absent (temp file + rename), and identical
// configurations produce byte-identical files.
void export_results(const ExperimentResult& result,
                    const std::map<std::string, std::string>& config_echo,
                    const std::string& path);

// Reads an exported file back: rows from the CSV body, aggregates
// recomputed (the means are deterministic sums in rep order, so they match
// the originals exactly).
ExperimentResult parse_results(const std::string& path);

// Writes the aggregate rows as CSV `metric,s,n,N,value`, one row per
// metric (mean_avg_diff, mean_max_diff, coverage_rate) per cell.
void export_aggregates_csv(const ExperimentResult& result,
                           const std::string& path);

// Bound-soundness experiment: R independent simulated experiments at one
// (s, n, N), each comparing its estimated CDF against a fixed reference
// built from ref_sample true-location draws, counting how often the
// sup-error bound is exceeded.
struct CoverageResult {
    double bound;
    bool vacuous;
    double exceed_fraction;
    std::int64_t experiments;
    double eps;
    double max_pdf;
};
CoverageResult run_coverage(const ExperimentConfig& cfg, const DecimalValue& s,
                            std::int64_t n, std::int64_t N,
                            std::int64_t experiments);

} // namespace fieldcdf
