#include "fieldcdf/renewal_sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "fieldcdf/numeric.hpp"

namespace fieldcdf {

namespace {

// Largest double g with g*n <= 1 exactly.  1.0/n rounds to nearest, which
// for many n (49, 100, 1000, ...) lands *above* 1/n, and n such gaps then
// sum past 1.0 and lose the final sample.  fma gives the correctly rounded
// g*n - 1, so its sign is the sign of the exact product's excess.
double exact_unit_gap(std::int64_t n) {
    double g = 1.0 / static_cast<double>(n);
    if (std::fma(g, static_cast<double>(n), -1.0) > 0.0)
        g = std::nextafter(g, 0.0);
    return g;
}

} // namespace

IntersampleDistribution::IntersampleDistribution(IntersampleKind kind,
                                                 std::int64_t n, double lambda,
                                                 double shape)
    : kind_(kind), n_(n), lambda_(lambda), shape_(shape) {
    if (n < 1)
        throw std::invalid_argument("sampling rate n must be >= 1");
    if (!(lambda > 1.0))
        throw std::invalid_argument("support multiplier lambda must be > 1");
    // Keep the first location on the path: gaps must not exceed 1.  The
    // deterministic gap 1/n fits for any n; the stochastic families need
    // n >= lambda rather than a silent clamp.
    if (kind != IntersampleKind::deterministic &&
        static_cast<double>(n) < lambda)
        throw std::invalid_argument(
            "sampling rate n must be >= lambda so gaps fit on the path");
    if (kind == IntersampleKind::scaled_beta && !(shape > 0.0))
        throw std::invalid_argument("beta shape must be positive");
    if (kind == IntersampleKind::deterministic)
        deterministic_gap_ = exact_unit_gap(n);
}

IntersampleDistribution IntersampleDistribution::triangular(std::int64_t n) {
    return IntersampleDistribution(IntersampleKind::triangular_symmetric, n,
                                   2.0, 0.0);
}

IntersampleDistribution IntersampleDistribution::scaled_beta(std::int64_t n,
                                                             double lambda,
                                                             double shape) {
    return IntersampleDistribution(IntersampleKind::scaled_beta, n, lambda,
                                   shape);
}

IntersampleDistribution IntersampleDistribution::deterministic(
    std::int64_t n) {
    return IntersampleDistribution(IntersampleKind::deterministic, n, 2.0,
                                   0.0);
}

IntersampleDistribution IntersampleDistribution::from_kind(
    IntersampleKind kind, std::int64_t n, double lambda, double shape) {
    switch (kind) {
        case IntersampleKind::triangular_symmetric:
            return triangular(n);
        case IntersampleKind::scaled_beta:
            return scaled_beta(n, lambda, shape);
        case IntersampleKind::deterministic:
            return deterministic(n);
    }
    throw std::invalid_argument("unknown intersample distribution kind");
}

double IntersampleDistribution::draw(Rng& rng) const {
    double theta = 0.0;
    switch (kind_) {
        case IntersampleKind::triangular_symmetric: {
            // Inverse CDF of the symmetric triangle on (0, 2c), mode c.
            double c = 1.0 / static_cast<double>(n_);
            double u = rng.u01_open();
            theta = (u <= 0.5) ? c * std::sqrt(2.0 * u)
                               : c * (2.0 - std::sqrt(2.0 * (1.0 - u)));
            break;
        }
        case IntersampleKind::scaled_beta: {
            double b = rng.beta(shape_, shape_ * (lambda_ - 1.0));
            theta = max_gap() * b;
            break;
        }
        case IntersampleKind::deterministic:
            theta = deterministic_gap_;
            break;
    }
    if (!(theta > 0.0 && theta <= max_gap()))
        throw std::logic_error("intersample draw left its support");
    return theta;
}

LocationSequence generate_locations(const IntersampleDistribution& dist,
                                    Rng& rng) {
    LocationSequence seq;
    CompensatedSum sum;
    for (;;) {
        double theta = dist.draw(rng);
        CompensatedSum candidate = sum;
        candidate.add(theta);
        if (candidate.value() > 1.0) {
            seq.overshoot_interval = theta;
            break;
        }
        sum = candidate;
        seq.intervals.push_back(theta);
        seq.locations.push_back(sum.value());
    }
    // theta <= lambda/n <= 1 by construction, so the first draw always
    // lands on the path and M >= 1.
    return seq;
}

TrialRecord run_trial(const FieldSpec& spec,
                      const IntersampleDistribution& dist,
                      std::int64_t trial_id, std::uint64_t seed,
                      const TimingModel& timing) {
    return run_trial_full(spec, dist, trial_id, seed, timing).record;
}

TrialWithField run_trial_full(const FieldSpec& spec,
                              const IntersampleDistribution& dist,
                              std::int64_t trial_id, std::uint64_t seed,
                              const TimingModel& timing) {
    Rng rng(seed);
    double epoch = static_cast<double>(trial_id) * timing.epoch_spacing;
    FieldRealization field = realize(spec, epoch, rng);
    LocationSequence seq = generate_locations(dist, rng);

    TrialRecord record;
    record.trial_id = trial_id;
    record.sample_count = seq.sample_count();
    record.values.reserve(seq.locations.size());
    for (double s : seq.locations) record.values.push_back(field.evaluate(s));
    record.hidden_locations = std::move(seq.locations);
    record.overshoot_interval = seq.overshoot_interval;
    record.epoch_time = epoch;
    return TrialWithField{std::move(record), std::move(field)};
}

SampleCountStats mean_sample_count(const IntersampleDistribution& dist,
                                   std::int64_t repetitions,
                                   std::uint64_t seed) {
    if (repetitions < 1)
        throw std::invalid_argument("repetitions must be >= 1");
    // Welford's online mean/variance keeps one pass and no overflow.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::int64_t i = 0; i < repetitions; ++i) {
        Rng rng(seed_chain(seed, static_cast<std::uint64_t>(i)));
        double m = static_cast<double>(generate_locations(dist, rng).sample_count());
        double d = m - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (m - mean);
    }
    double variance =
        repetitions > 1 ? m2 / static_cast<double>(repetitions - 1) : 0.0;
    return SampleCountStats{
        mean, std::sqrt(variance / static_cast<double>(repetitions))};
}

} // namespace fieldcdf
