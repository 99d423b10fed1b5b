#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fieldcdf/kv_config.hpp"
#include "fieldcdf/rng.hpp"

namespace fieldcdf {

enum class FieldKind { cosine_sum, user_table };

// One point of a piecewise-linear field table.
struct TablePoint {
    double s;
    double value;
};

// A single field observation; true_location is an oracle-side quantity and
// never reaches the estimators.
struct FieldSample {
    double value;
    double time;
    double true_location;
};

// Immutable description of a field on the unit path.
//
// cosine_sum: X(s,t) = a0 + sum_{k=1..K} a_k(t) * cos(2*pi*k*f*s), where
// each amplitude a_k(t) is drawn uniformly on [0, c_k*(1 + 0.5*sin(2*pi*
// t/T))].  The ceiling c_k and envelope period T are configurable; the
// envelope keeps amplitudes in [0, 1.5*c_k], which gives closed-form
// ceilings for the bound and the Lipschitz constant.
//
// user_table: time-constant piecewise-linear interpolation of (s, value)
// pairs with s strictly increasing in [0,1].
class FieldSpec {
  public:
    // c_k = amp_scale / k for k = 1..num_harmonics.
    static FieldSpec cosine_sum(double a0, double f, int num_harmonics,
                                double amp_scale,
                                double envelope_period = 24.0);
    // Explicit per-harmonic ceilings c_1..c_K.
    static FieldSpec cosine_sum_explicit(double a0, double f,
                                         std::vector<double> amp_ceiling,
                                         double envelope_period = 24.0);
    static FieldSpec user_table(std::vector<TablePoint> points);

    FieldKind kind() const { return kind_; }
    double a0() const { return a0_; }
    double frequency() const { return f_; }
    int num_harmonics() const { return static_cast<int>(amp_ceiling_.size()); }
    const std::vector<double>& amp_ceiling() const { return amp_ceiling_; }
    double envelope_period() const { return envelope_period_; }
    double declared_bound() const { return declared_bound_; }
    double declared_lipschitz() const { return declared_lipschitz_; }
    const std::vector<TablePoint>& table() const { return *table_; }

    // Tightens or relaxes the declared ceilings (they are declarations to
    // be verified, not guarantees).
    void set_declared_bound(double b);
    void set_declared_lipschitz(double alpha);

    // Amplitude ceiling at time t for harmonic k (1-based).
    double amplitude_ceiling_at(int k, double t) const;

  private:
    FieldSpec() = default;
    FieldKind kind_ = FieldKind::cosine_sum;
    double a0_ = 0.0;
    double f_ = 0.0;
    std::vector<double> amp_ceiling_;
    double envelope_period_ = 24.0;
    double declared_bound_ = 0.0;
    double declared_lipschitz_ = 0.0;
    // Shared so copies of a spec (handed to worker threads) stay cheap.
    std::shared_ptr<const std::vector<TablePoint>> table_;
};

// A field with its time-varying amplitudes frozen at one epoch.  Trials
// hold one realization each: within a trial the field is a deterministic
// function of s, while different trials see different amplitude draws.
class FieldRealization {
  public:
    FieldRealization(const FieldSpec& spec, double epoch_time,
                     std::vector<double> amplitudes);

    // X(s) for this realization; throws std::domain_error outside [0,1]
    // and std::runtime_error on a non-finite result.
    double evaluate(double s) const;

    double epoch_time() const { return epoch_time_; }
    const std::vector<double>& amplitudes() const { return amplitudes_; }

  private:
    FieldSpec spec_;
    double epoch_time_;
    std::vector<double> amplitudes_;
};

// Draws the per-epoch amplitudes and freezes them.
FieldRealization realize(const FieldSpec& spec, double epoch_time, Rng& rng);

// Convenience single-point evaluation, deterministic in (spec, s, t, seed).
double eval_field(const FieldSpec& spec, double s, double t,
                  std::uint64_t seed);

// Max adjacent-pair difference quotient over a uniform grid, with
// amplitudes frozen at one draw.  grid_size must be >= 2.
double estimate_lipschitz(const FieldSpec& spec, int grid_size, double t,
                          std::uint64_t seed);

// Result of checking |X(s,t)| <= declared_bound over a (s, t) grid.
struct BoundCheckReport {
    bool pass = true;
    std::vector<FieldSample> violations;
};

BoundCheckReport verify_bounded(const FieldSpec& spec, int grid_size,
                                int num_time_draws, std::uint64_t seed);

// Loads a piecewise-linear field table: CSV with header `s,value`,
// s strictly increasing within [0,1].
std::vector<TablePoint> load_field_table(const std::string& path);

// Builds a FieldSpec from `field.*` config keys (documented in README).
FieldSpec field_spec_from_config(const KeyValueConfig& cfg);

} // namespace fieldcdf
