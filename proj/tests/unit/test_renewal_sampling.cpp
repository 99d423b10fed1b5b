#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fieldcdf/numeric.hpp"
#include "fieldcdf/renewal_sampling.hpp"
#include "fieldcdf/rng.hpp"

using namespace fieldcdf;

TEST_CASE("deterministic gaps with exact binary reciprocal") {
    IntersampleDistribution dist = IntersampleDistribution::deterministic(4);
    Rng rng(1);
    LocationSequence seq = generate_locations(dist, rng);
    CHECK(seq.sample_count() == 4);
    REQUIRE(seq.locations.size() == 4);
    CHECK(seq.locations[0] == 0.25);
    CHECK(seq.locations[1] == 0.5);
    CHECK(seq.locations[2] == 0.75);
    CHECK(seq.locations[3] == 1.0);
    CHECK(seq.overshoot_interval == 0.25);
}

TEST_CASE("deterministic gaps yield exactly n samples for awkward n") {
    // 1.0/n rounds upward for several of these n; the sampler must still
    // fit exactly n gaps onto the unit path, never n-1.
    for (std::int64_t n : {1, 3, 7, 10, 49, 100, 1000, 10000}) {
        IntersampleDistribution dist =
            IntersampleDistribution::deterministic(n);
        Rng rng(static_cast<std::uint64_t>(n));
        LocationSequence seq = generate_locations(dist, rng);
        CHECK(seq.sample_count() == n);
        CHECK(seq.locations.back() <= 1.0);
        // One more gap must overflow the path.
        CompensatedSum sum;
        for (double theta : seq.intervals) sum.add(theta);
        sum.add(seq.overshoot_interval);
        CHECK(sum.value() > 1.0);
    }
}

TEST_CASE("triangular gaps live on (0, 2/n) with mean 1/n") {
    const std::int64_t n = 10;
    IntersampleDistribution dist = IntersampleDistribution::triangular(n);
    CHECK(dist.lambda() == 2.0);
    CHECK(dist.max_gap() == 0.2);
    Rng rng(2718);
    const int draws = 100000;
    double sum = 0.0;
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < draws; ++i) {
        double theta = dist.draw(rng);
        REQUIRE(theta > 0.0);
        REQUIRE(theta <= 0.2);
        sum += theta;
        lo = std::min(lo, theta);
        hi = std::max(hi, theta);
    }
    // Symmetric triangle on (0, 2c) with mode c: mean c, sd c/sqrt(6).
    const double c = 0.1;
    const double se = c / std::sqrt(6.0) / std::sqrt(double(draws));
    CHECK(std::abs(sum / draws - c) < 4.0 * se);
    // The tails actually get exercised.
    CHECK(lo < 0.02);
    CHECK(hi > 0.18);
}

TEST_CASE("scaled beta gaps live on (0, lambda/n] with mean 1/n") {
    const std::int64_t n = 100;
    const double lambda = 3.0;
    IntersampleDistribution dist =
        IntersampleDistribution::scaled_beta(n, lambda, 2.0);
    CHECK(dist.max_gap() == doctest::Approx(0.03).epsilon(1e-15));
    Rng rng(31);
    const int draws = 100000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        double theta = dist.draw(rng);
        REQUIRE(theta > 0.0);
        REQUIRE(theta <= dist.max_gap());
        sum += theta;
    }
    // theta = (lambda/n) B, B ~ Beta(2, 4): mean 1/n, var of B = 8/252.
    const double sd_theta = dist.max_gap() * std::sqrt(8.0 / 252.0);
    CHECK(std::abs(sum / draws - 0.01) <
          4.0 * sd_theta / std::sqrt(double(draws)));
}

TEST_CASE("stopping rule holds exactly on random gap sequences") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        IntersampleDistribution dist = IntersampleDistribution::triangular(10);
        Rng rng(seed);
        LocationSequence seq = generate_locations(dist, rng);
        REQUIRE(seq.sample_count() >= 1);
        REQUIRE(seq.intervals.size() == seq.locations.size());

        // Recompute the compensated prefix sums independently.
        CompensatedSum sum;
        for (std::size_t i = 0; i < seq.intervals.size(); ++i) {
            CHECK(seq.intervals[i] > 0.0);
            CHECK(seq.intervals[i] <= dist.max_gap());
            sum.add(seq.intervals[i]);
            CHECK(seq.locations[i] == sum.value());
            if (i > 0) CHECK(seq.locations[i] > seq.locations[i - 1]);
        }
        CHECK(sum.value() <= 1.0);
        CHECK(seq.overshoot_interval > 0.0);
        CHECK(seq.overshoot_interval <= dist.max_gap());
        sum.add(seq.overshoot_interval);
        CHECK(sum.value() > 1.0);
    }
}

TEST_CASE("a single full-path gap gives one sample at the far end") {
    IntersampleDistribution dist = IntersampleDistribution::deterministic(1);
    Rng rng(1);
    LocationSequence seq = generate_locations(dist, rng);
    CHECK(seq.sample_count() == 1);
    CHECK(seq.locations[0] == 1.0);
}

TEST_CASE("distribution constructors validate their parameters") {
    CHECK_THROWS_AS((void)IntersampleDistribution::triangular(0),
                    std::invalid_argument);
    // Stochastic gaps can reach lambda/n, which must stay on the path.
    CHECK_THROWS_AS((void)IntersampleDistribution::triangular(1),
                    std::invalid_argument);
    CHECK_NOTHROW((void)IntersampleDistribution::triangular(2));
    CHECK_THROWS_AS((void)IntersampleDistribution::scaled_beta(2, 3.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)IntersampleDistribution::scaled_beta(10, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)IntersampleDistribution::scaled_beta(10, 2.0, 0.0),
                    std::invalid_argument);
    CHECK_NOTHROW((void)IntersampleDistribution::scaled_beta(10, 2.0, 2.0));
    // The deterministic 1/n gap always fits, even for n = 1.
    CHECK_NOTHROW((void)IntersampleDistribution::deterministic(1));
}

TEST_CASE("run_trial on a constant field records the constant") {
    FieldSpec spec = FieldSpec::cosine_sum(500.0, 5.0, 1, 0.0);
    IntersampleDistribution dist = IntersampleDistribution::deterministic(2);
    TrialRecord record = run_trial(spec, dist, 0, 42);
    CHECK(record.sample_count == 2);
    REQUIRE(record.values.size() == 2);
    CHECK(record.values[0] == 500.0);
    CHECK(record.values[1] == 500.0);
    CHECK(record.has_hidden());
    REQUIRE(record.hidden_locations.size() == 2);
    CHECK(record.hidden_locations[0] == 0.5);
    CHECK(record.hidden_locations[1] == 1.0);
}

TEST_CASE("run_trial on the identity table reveals the locations") {
    FieldSpec spec =
        FieldSpec::user_table({TablePoint{0.0, 0.0}, TablePoint{1.0, 1.0}});
    IntersampleDistribution dist = IntersampleDistribution::deterministic(4);
    TrialRecord record = run_trial(spec, dist, 0, 7);
    REQUIRE(record.values.size() == 4);
    CHECK(record.values[0] == 0.25);
    CHECK(record.values[1] == 0.5);
    CHECK(record.values[2] == 0.75);
    CHECK(record.values[3] == 1.0);
}

TEST_CASE("run_trial is deterministic in trial id and seed") {
    FieldSpec spec = FieldSpec::cosine_sum(500.0, 5.0, 5, 10.0);
    IntersampleDistribution dist = IntersampleDistribution::triangular(50);
    TrialRecord a = run_trial(spec, dist, 3, 1234);
    TrialRecord b = run_trial(spec, dist, 3, 1234);
    CHECK(a.values == b.values);
    CHECK(a.hidden_locations == b.hidden_locations);
    CHECK(a.sample_count == b.sample_count);
    TrialRecord c = run_trial(spec, dist, 3, 1235);
    CHECK(a.values != c.values);
}

TEST_CASE("run_trial timing controls the trial epoch") {
    FieldSpec spec = FieldSpec::cosine_sum(500.0, 5.0, 5, 10.0);
    IntersampleDistribution dist = IntersampleDistribution::triangular(10);
    TrialRecord dflt = run_trial(spec, dist, 3, 1);
    CHECK(dflt.epoch_time == 3.0);
    TimingModel timing;
    timing.epoch_spacing = 2.5;
    TrialRecord spaced = run_trial(spec, dist, 3, 1, timing);
    CHECK(spaced.epoch_time == 7.5);
}

TEST_CASE("run_trial_full exposes the frozen field realization") {
    FieldSpec spec = FieldSpec::cosine_sum(500.0, 5.0, 5, 10.0);
    IntersampleDistribution dist = IntersampleDistribution::triangular(20);
    TrialWithField trial = run_trial_full(spec, dist, 2, 99);
    REQUIRE(trial.record.has_hidden());
    // The recorded values are exactly the frozen field at the hidden spots.
    for (std::size_t i = 0; i < trial.record.values.size(); ++i) {
        CHECK(trial.record.values[i] ==
              trial.field.evaluate(trial.record.hidden_locations[i]));
    }
    CHECK(trial.field.epoch_time() == trial.record.epoch_time);
}

TEST_CASE("estimator view hides everything but the values") {
    FieldSpec spec = FieldSpec::cosine_sum(500.0, 5.0, 5, 10.0);
    IntersampleDistribution dist = IntersampleDistribution::triangular(20);
    TrialRecord record = run_trial(spec, dist, 5, 8);
    TrialView view = estimator_view(record);
    CHECK(view.trial_id == 5);
    CHECK(view.sample_count == record.sample_count);
    CHECK(view.values == &record.values);
}

TEST_CASE("mean sample count is exact for deterministic gaps") {
    IntersampleDistribution dist = IntersampleDistribution::deterministic(10);
    SampleCountStats stats = mean_sample_count(dist, 100, 1);
    CHECK(stats.mean == 10.0);
    CHECK(stats.std_error == 0.0);
}

TEST_CASE("mean sample count brackets n for stochastic gaps") {
    // Wald's identity on the first sum past 1.0 pins the expectation of M
    // into (n-1, n+lambda-1]; the Monte-Carlo mean must agree.
    IntersampleDistribution dist = IntersampleDistribution::triangular(100);
    SampleCountStats stats = mean_sample_count(dist, 2000, 7);
    CHECK(stats.std_error > 0.0);
    CHECK(stats.mean > 99.0 - 3.0 * stats.std_error);
    CHECK(stats.mean <= 101.0 + 3.0 * stats.std_error);

    // Same seed, same answer.
    SampleCountStats again = mean_sample_count(dist, 2000, 7);
    CHECK(again.mean == stats.mean);
    CHECK(again.std_error == stats.std_error);

    CHECK_THROWS_AS((void)mean_sample_count(dist, 0, 1),
                    std::invalid_argument);
}
