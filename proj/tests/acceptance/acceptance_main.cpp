// End-to-end acceptance checks for the field-CDF library and CLI.  Each
// criterion prints exactly one PASS/FAIL line; the process exits nonzero if
// any criterion fails.  argv[1] must be the path to the fieldcdf CLI binary
// (used by the determinism criterion).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fieldcdf/cdf_estimation.hpp"
#include "fieldcdf/dataset_io.hpp"
#include "fieldcdf/error_bounds.hpp"
#include "fieldcdf/experiment_harness.hpp"
#include "fieldcdf/field_model.hpp"
#include "fieldcdf/numeric.hpp"
#include "fieldcdf/renewal_sampling.hpp"
#include "fieldcdf/rng.hpp"

using namespace fieldcdf;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

bool rel_close(double a, double b, double tol) {
    if (a == b) return true;
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= tol * scale;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// --- criterion 1: the stopping rule holds exactly on every sequence -------

bool criterion_stopping_rule(std::string& detail) {
    const std::int64_t total = 100000;
    std::int64_t ok = 0;
    for (std::int64_t i = 0; i < total; ++i) {
        IntersampleDistribution dist = [&]() {
            switch (i % 6) {
                case 0: return IntersampleDistribution::triangular(10);
                case 1: return IntersampleDistribution::triangular(137);
                case 2: return IntersampleDistribution::scaled_beta(50, 3.0, 2.0);
                case 3:
                    // shape < 1 exercises the boosted gamma path
                    return IntersampleDistribution::scaled_beta(20, 1.5, 0.7);
                case 4: return IntersampleDistribution::deterministic(33);
                default: return IntersampleDistribution::deterministic(1);
            }
        }();
        Rng rng(seed_chain(42, static_cast<std::uint64_t>(i)));
        LocationSequence seq = generate_locations(dist, rng);

        CompensatedSum partial;
        bool good = seq.sample_count() >= 1;
        double prev = 0.0;
        for (std::size_t k = 0; k < seq.intervals.size() && good; ++k) {
            double theta = seq.intervals[k];
            good = theta > 0.0 && theta <= dist.max_gap();
            partial.add(theta);
            good = good && seq.locations[k] > prev;
            prev = seq.locations[k];
        }
        good = good && partial.value() <= 1.0;
        partial.add(seq.overshoot_interval);
        good = good && partial.value() > 1.0;
        if (good) ++ok;
    }
    detail = std::to_string(ok) + "/" + std::to_string(total) +
             " sequences satisfy sum <= 1 < sum + overshoot";
    return ok == total;
}

// --- criterion 2: E[M] stays within its analytic ceiling ------------------

bool criterion_expected_count(std::string& detail) {
    std::ostringstream msg;
    bool pass = true;
    for (std::int64_t n : {INT64_C(10), INT64_C(100), INT64_C(1000)}) {
        IntersampleDistribution dist = IntersampleDistribution::triangular(n);
        SampleCountStats stats = mean_sample_count(dist, 100000, 900 + n);
        // ceiling n + lambda - 1 with lambda = 2; the mean also cannot sit
        // below n - 1 (every gap is under lambda/n), checked as a sanity net.
        double ceiling = static_cast<double>(n) + 1.0;
        bool ok = stats.mean <= ceiling + 3.0 * stats.std_error &&
                  stats.mean > static_cast<double>(n) - 1.0 -
                                   3.0 * stats.std_error;
        if (!ok) pass = false;
        msg << "n=" << n << " mean=" << format_double(stats.mean)
            << " ceiling=" << format_double(ceiling) << "  ";
    }
    detail = msg.str();
    return pass;
}

// --- criterion 3: CDF evaluation equals the indicator-sum oracle ----------

bool criterion_cdf_oracle(std::string& detail) {
    std::int64_t checked = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        Rng rng(seed_chain(7, static_cast<std::uint64_t>(rep)));
        std::int64_t size =
            1 + static_cast<std::int64_t>(rng.next_u64() % 200);
        std::vector<double> values(static_cast<std::size_t>(size));
        for (auto& v : values) {
            double x = rng.normal() * 3.0;
            // round half the draws to one decimal so ties are common
            v = (rng.u01() < 0.5) ? std::round(x * 10.0) / 10.0 : x;
        }
        EmpiricalCdf cdf = build_empirical_cdf(values);

        std::vector<double> queries = cdf.sorted_values();
        for (std::size_t i = 1; i < cdf.sorted_values().size(); ++i)
            queries.push_back(0.5 * (cdf.sorted_values()[i - 1] +
                                     cdf.sorted_values()[i]));
        queries.push_back(cdf.min_value() - 1.0);
        queries.push_back(cdf.max_value() + 1.0);

        for (double x : queries) {
            std::int64_t naive = 0;
            for (double v : values)
                if (v <= x) ++naive;
            if (cdf.count_at_most(x) != naive) {
                detail = "count mismatch at rep " + std::to_string(rep);
                return false;
            }
            double expected = static_cast<double>(naive) /
                              static_cast<double>(size);
            if (cdf_eval(cdf, x) != expected) {
                detail = "value mismatch at rep " + std::to_string(rep);
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " queries over 1000 multisets, all exact";
    return true;
}

// --- criterion 4: the sup statistic agrees with a dense-grid scan ---------

bool criterion_ks_statistic(std::string& detail) {
    double worst_gap = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        Rng rng(seed_chain(13, static_cast<std::uint64_t>(rep)));
        auto draw_sample = [&](std::int64_t size) {
            std::vector<double> v(static_cast<std::size_t>(size));
            for (auto& x : v) {
                double d = rng.normal() * 2.0 + 1.0;
                // integer-valued draws create ties across the two samples
                x = (rng.u01() < 0.3) ? std::round(d) : d;
            }
            return v;
        };
        std::int64_t na = 1 + static_cast<std::int64_t>(rng.next_u64() % 150);
        std::int64_t nb = 1 + static_cast<std::int64_t>(rng.next_u64() % 150);
        EmpiricalCdf a(draw_sample(na));
        EmpiricalCdf b(draw_sample(nb));

        double exact = max_pointwise_diff(a, b);

        double lo = std::min(a.min_value(), b.min_value()) - 0.5;
        double hi = std::max(a.max_value(), b.max_value()) + 0.5;
        double grid_max = 0.0;
        const int points = 100000;
        for (int i = 0; i < points; ++i) {
            double x = lo + (hi - lo) * static_cast<double>(i) /
                                static_cast<double>(points - 1);
            grid_max = std::max(grid_max, std::abs(a(x) - b(x)));
        }

        double tol = 0.5 / static_cast<double>(std::min(na, nb));
        // the grid can only miss plateaus, so it may sit below the exact
        // sup, never above it
        if (grid_max > exact + 1e-12 || exact - grid_max > tol + 1e-12) {
            detail = "rep " + std::to_string(rep) + ": exact " +
                     format_double(exact) + " vs grid " +
                     format_double(grid_max);
            return false;
        }
        worst_gap = std::max(worst_gap, exact - grid_max);
    }
    detail = "200 pairs, worst exact-vs-grid gap " + format_double(worst_gap);
    return true;
}

// --- criterion 5: error metrics shrink with the sampling rate -------------

const AggregateRow* find_cell(const ExperimentResult& result, std::int64_t n,
                              std::int64_t N) {
    for (const auto& row : result.aggregates)
        if (row.n == n && row.N == N) return &row;
    return nullptr;
}

double loglog_slope(const std::vector<double>& xs,
                    const std::vector<double>& ys) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = std::log(xs[i]) - mx;
        num += dx * (std::log(ys[i]) - my);
        den += dx * dx;
    }
    return num / den;
}

bool criterion_error_trends(std::string& detail) {
    ExperimentConfig cfg;
    cfg.s_eval = {DecimalValue::parse("0.5")};
    cfg.n_sweep = {10, 100, 1000, 10000};
    cfg.N_sweep = {50, 500};
    cfg.repetitions = 200;
    cfg.scale = 0.25;  // 50 effective repetitions
    cfg.seed = 1;
    ExperimentResult result = run_sweep(cfg);

    std::ostringstream msg;
    bool pass = true;
    for (std::int64_t N : cfg.N_sweep) {
        std::vector<double> ns, avg, mx;
        for (std::int64_t n : cfg.n_sweep) {
            const AggregateRow* cell = find_cell(result, n, N);
            if (cell == nullptr) {
                detail = "missing aggregate cell";
                return false;
            }
            ns.push_back(static_cast<double>(n));
            avg.push_back(cell->mean_avg_diff);
            mx.push_back(cell->mean_max_diff);
        }
        for (std::size_t i = 1; i < ns.size(); ++i) {
            if (!(avg[i] < avg[i - 1]) || !(mx[i] < mx[i - 1])) {
                pass = false;
                msg << "no strict decrease at N=" << N << " step " << i << "  ";
            }
        }
        double slope = loglog_slope(ns, mx);
        if (!(slope <= -0.25)) {
            pass = false;
            msg << "slope " << format_double(slope) << " at N=" << N
                << " above -0.25  ";
        }
        msg << "N=" << N << " slope=" << format_double(slope) << "  ";
    }
    for (std::int64_t n : cfg.n_sweep) {
        const AggregateRow* small = find_cell(result, n, 50);
        const AggregateRow* large = find_cell(result, n, 500);
        if (!(large->mean_avg_diff <= small->mean_avg_diff &&
              large->mean_max_diff <= small->mean_max_diff)) {
            pass = false;
            msg << "N=500 not <= N=50 at n=" << n << "  ";
        }
    }
    detail = msg.str();
    return pass;
}

// --- criterion 6: bound formulas match a second transcription -------------

namespace naive {

// Deliberately independent transcription of the analytic bounds (different
// grouping and std::pow instead of explicit products); used only here.

double core(const BoundParams& p, double s) {
    return (p.n + p.lambda - 1.0) * s * (1.0 - s) + p.C;
}

double mse(const BoundParams& p, double s) {
    return core(p, s) * std::pow(p.lambda / p.n, 2.0);
}

double dev_prob(const BoundParams& p, double s) {
    return std::pow(p.alpha / p.eps, 2.0) * mse(p, s);
}

double dev_prob_sup(const BoundParams& p) {
    return 32.0 / p.beta * std::pow(p.alpha / p.eps, 2.0) *
           (p.n + p.lambda - 1.0) * std::pow(p.lambda / p.n, 2.0);
}

double shift(const BoundParams& p, double s) {
    return 2.0 * p.alpha * p.max_pdf * (p.lambda / p.n) *
           std::sqrt(core(p, s));
}

double pointwise(const BoundParams& p, double s) {
    return dev_prob(p, s) + shift(p, s);
}

double dkw(double N, double delta) {
    return std::sqrt(std::log(2.0 / delta) / (2.0 * N));
}

double sup_error(const BoundParams& p, double s) {
    double amplitude = p.alpha * std::sqrt(core(p, s)) * p.lambda / p.n;
    return std::pow(amplitude / p.eps, 2.0) + 2.0 * p.max_pdf * amplitude +
           dkw(p.N, p.delta);
}

} // namespace naive

bool criterion_bound_fidelity(std::string& detail) {
    Rng rng(2718281828);
    auto log_uniform = [&](double lo, double hi) {
        return lo * std::exp(rng.u01() * std::log(hi / lo));
    };
    for (int i = 0; i < 10000; ++i) {
        BoundParams p;
        p.alpha = log_uniform(0.1, 50.0);
        p.n = log_uniform(2.0, 1e5);
        p.lambda = 1.0 + 4.0 * rng.u01_open();
        p.C = 10.0 * rng.u01_open();
        p.beta = rng.u01_open();
        p.eps = log_uniform(1e-3, 1e3);
        p.delta = rng.u01_open();
        p.N = log_uniform(1.0, 1e6);
        p.max_pdf = log_uniform(1e-3, 10.0);
        double s = rng.u01();

        bool ok = rel_close(location_mse_bound(p, s), naive::mse(p, s), 1e-12);
        ok = ok && rel_close(value_deviation_prob_bound(p, s),
                             naive::dev_prob(p, s), 1e-12);
        ok = ok && rel_close(value_deviation_prob_sup_bound(p),
                             naive::dev_prob_sup(p), 1e-12);
        ok = ok && rel_close(cdf_shift_bound(p, s), naive::shift(p, s), 1e-12);
        ok = ok && rel_close(cdf_pointwise_error_bound(p, s),
                             naive::pointwise(p, s), 1e-12);
        ok = ok && rel_close(dkw_epsilon(p.N, p.delta),
                             naive::dkw(p.N, p.delta), 1e-12);
        ok = ok && rel_close(cdf_sup_error_bound(p, s).value,
                             naive::sup_error(p, s), 1e-12);
        if (!ok) {
            detail = "transcription mismatch at draw " + std::to_string(i);
            return false;
        }
    }

    // Frozen worked values at alpha=1, n=100, lambda=2, C=1, eps=0.1,
    // delta=0.05, N=50, max_pdf=1, s=0.5; the published reference digits
    // are checked at their printed precision.
    BoundParams p{1.0, 100.0, 2.0, 1.0, 1.0, 0.1, 0.05, 50.0, 1.0};
    double s = 0.5;
    bool ok = rel_close(location_mse_bound(p, s), 0.0105, 1e-12);
    ok = ok && rel_close(cdf_shift_bound(p, s), 0.204939, 1e-4);
    ok = ok && rel_close(cdf_pointwise_error_bound(p, s), 1.254939, 1e-4);
    ok = ok && rel_close(dkw_epsilon(50.0, 0.05), 0.1920707, 1e-4);
    ok = ok && rel_close(cdf_sup_error_bound(p, s).value, 1.4470098, 1e-4);
    if (!ok) {
        detail = "worked reference values not reproduced";
        return false;
    }
    detail = "10000 draws within 1e-12 of the second transcription; "
             "worked values reproduced";
    return true;
}

// --- criterion 7: the sup-error bound covers simulated experiments --------

bool criterion_coverage(std::string& detail) {
    auto base = []() {
        ExperimentConfig cfg;
        cfg.s_eval = {DecimalValue::parse("0.25")};
        cfg.n_sweep = {1000};
        cfg.N_sweep = {100};
        cfg.delta = 0.1;
        cfg.seed = 2026;
        return cfg;
    };
    const DecimalValue s = DecimalValue::parse("0.25");
    const double limit = 0.1 + 3.0 * std::sqrt(0.09 / 200.0);
    std::ostringstream msg;

    // A gently varying field keeps the bound informative at n = 1000, so the
    // exceedance-fraction branch actually runs.
    ExperimentConfig tame = base();
    tame.field = FieldSpec::cosine_sum(500.0, 0.5, 1, 10.0);
    CoverageResult informative = run_coverage(tame, s, 1000, 100, 200);
    if (informative.vacuous) {
        detail = "expected an informative bound for the gentle field, got " +
                 format_double(informative.bound);
        return false;
    }
    if (informative.exceed_fraction > limit) {
        detail = "exceed fraction " + format_double(informative.exceed_fraction) +
                 " above " + format_double(limit);
        return false;
    }
    msg << "informative bound " << format_double(informative.bound)
        << ", exceed " << format_double(informative.exceed_fraction) << " <= "
        << format_double(limit) << "; ";

    // The reference field's steep Lipschitz constant makes the bound vacuous
    // here; that must be flagged, and the check retried at a higher rate.
    ExperimentConfig steep = base();
    CoverageResult first = run_coverage(steep, s, 1000, 100, 200);
    if (!first.vacuous || !is_vacuous(first.bound)) {
        detail = "steep field unexpectedly informative at n=1000";
        return false;
    }
    CoverageResult retry = run_coverage(steep, s, 10000, 100, 200);
    if (retry.vacuous) {
        msg << "steep field vacuous at n=1000 (" << format_double(first.bound)
            << ") and still at n=10000 (" << format_double(retry.bound)
            << "), flagged both times";
    } else if (retry.exceed_fraction > limit) {
        detail = "steep-field exceed fraction " +
                 format_double(retry.exceed_fraction) + " above limit";
        return false;
    } else {
        msg << "steep field vacuous at n=1000, informative at n=10000 with "
            << "exceed " << format_double(retry.exceed_fraction);
    }
    detail = msg.str();
    return true;
}

// --- criterion 8: identity field recovers the location to 1/n -------------

bool criterion_identity_field(std::string& detail) {
    FieldSpec identity =
        FieldSpec::user_table({TablePoint{0.0, 0.0}, TablePoint{1.0, 1.0}});
    double worst = 0.0;
    for (std::int64_t n : {INT64_C(10), INT64_C(100), INT64_C(1000)}) {
        IntersampleDistribution dist =
            IntersampleDistribution::deterministic(n);
        TrialRecord trial = run_trial(identity, dist, 0, 5);
        if (trial.sample_count != n) {
            detail = "deterministic gaps produced " +
                     std::to_string(trial.sample_count) + " samples at n=" +
                     std::to_string(n);
            return false;
        }
        Rng rng(seed_chain(31, static_cast<std::uint64_t>(n)));
        std::vector<double> targets{0.0, 1.0};
        for (int i = 0; i < 1000; ++i) targets.push_back(rng.u01());
        double tol = 1.0 / static_cast<double>(n);
        for (double s : targets) {
            double err = std::abs(estimate_field_at(trial, s) - s);
            if (err > tol) {
                detail = "estimate off by " + format_double(err) + " > 1/" +
                         std::to_string(n) + " at s=" + format_double(s);
                return false;
            }
            worst = std::max(worst, err * static_cast<double>(n));
        }
    }
    detail = "1002 targets per rate, worst |estimate - s|*n = " +
             format_double(worst);
    return true;
}

// --- criterion 9: faster sampling beats slower sampling at every marker ---

bool criterion_mobile_vs_fixed(std::string& detail) {
    FieldSpec field = FieldSpec::cosine_sum(500.0, 5.0, 5, 10.0);
    const int replications = 50;
    const std::int64_t trials_per_set = 43;
    const std::int64_t ref_per_location = 200;
    std::vector<double> sum_fast(10, 0.0), sum_slow(10, 0.0);

    auto make_trials = [&](std::int64_t n, std::uint64_t tag, int rep) {
        TrialSet set;
        IntersampleDistribution dist = IntersampleDistribution::triangular(n);
        for (std::int64_t i = 0; i < trials_per_set; ++i)
            set.trials.push_back(
                run_trial(field, dist, i,
                          seed_chain(11, tag, static_cast<std::uint64_t>(rep),
                                     static_cast<std::uint64_t>(i))));
        return set;
    };

    for (int rep = 0; rep < replications; ++rep) {
        TrialSet fast = make_trials(200, 1, rep);
        TrialSet slow = make_trials(50, 2, rep);

        if (rep == 0) {
            // Round-trip fidelity: saving and reloading a trial set must
            // preserve every value bit for bit.
            auto path = std::filesystem::temp_directory_path() /
                        "fieldcdf_acceptance_trials.csv";
            save_trials(fast, path.string());
            TrialSet reloaded = load_trials(path.string());
            std::filesystem::remove(path);
            if (reloaded.trials.size() != fast.trials.size()) {
                detail = "round-trip changed the trial count";
                return false;
            }
            for (std::size_t i = 0; i < fast.trials.size(); ++i) {
                if (reloaded.trials[i].values != fast.trials[i].values ||
                    reloaded.trials[i].sample_count !=
                        fast.trials[i].sample_count) {
                    detail = "round-trip changed trial " + std::to_string(i);
                    return false;
                }
            }
        }

        ReferenceSet ref;
        for (int l = 1; l <= 9; ++l) {
            ReferenceEntry entry;
            entry.location_id = "L" + std::to_string(l);
            entry.s = DecimalValue::parse("0." + std::to_string(l));
            for (std::int64_t j = 0; j < ref_per_location; ++j) {
                Rng rng(seed_chain(11, 3,
                                   static_cast<std::uint64_t>(rep * 16 + l),
                                   static_cast<std::uint64_t>(j)));
                FieldRealization frozen = realize(
                    field, static_cast<double>(j % trials_per_set), rng);
                entry.samples.push_back(frozen.evaluate(entry.s.value));
            }
            ref.entries.push_back(std::move(entry));
        }

        for (int l = 1; l <= 9; ++l) {
            std::string id = "L" + std::to_string(l);
            sum_fast[static_cast<std::size_t>(l)] +=
                compare_mobile_vs_fixed(fast, ref, id).max_diff;
            sum_slow[static_cast<std::size_t>(l)] +=
                compare_mobile_vs_fixed(slow, ref, id).max_diff;
        }
    }

    std::ostringstream msg;
    bool pass = true;
    for (int l = 1; l <= 9; ++l) {
        double fast_mean = sum_fast[static_cast<std::size_t>(l)] / replications;
        double slow_mean = sum_slow[static_cast<std::size_t>(l)] / replications;
        if (!(fast_mean < slow_mean)) {
            pass = false;
            msg << "L" << l << ": fast " << format_double(fast_mean)
                << " !< slow " << format_double(slow_mean) << "  ";
        }
    }
    if (pass) {
        msg << "round-trip exact; mean max_diff lower at n=200 than n=50 at "
            << "all 9 locations (e.g. L5: "
            << format_double(sum_fast[5] / replications) << " vs "
            << format_double(sum_slow[5] / replications) << ")";
    }
    detail = msg.str();
    return pass;
}

// --- criterion 10: the CLI is deterministic across runs and threads -------

bool criterion_cli_determinism(const std::string& cli, std::string& detail) {
    if (cli.empty()) {
        detail = "CLI binary path not provided (argv[1])";
        return false;
    }
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "fieldcdf_acceptance_cli";
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir);

    fs::path cfg = dir / "run.toml";
    {
        std::ofstream out(cfg);
        out << "seed = 77\n"
               "repetitions = 5\n"
               "n_sweep = 10, 50\n"
               "N_sweep = 20\n"
               "s_eval = 0.25, 0.5\n"
               "metric_grid = 64\n"
               "max_pdf_sample = 400\n"
               "ref_sample = 400\n"
               "[field]\n"
               "kind = cosine_sum\n";
    }

    auto run = [&](const std::string& extra, const std::string& out_name,
                   const std::string& metrics_name) {
        std::string cmd = cli + " simulate --config " + cfg.string() +
                          " --out " + (dir / out_name).string() +
                          " --metrics-out " + (dir / metrics_name).string() +
                          extra + " > /dev/null";
        return std::system(cmd.c_str()) == 0;
    };

    bool ok = run("", "out1.csv", "m1.csv") && run("", "out2.csv", "m2.csv") &&
              run(" --override threads=2", "out3.csv", "m3.csv");
    if (!ok) {
        detail = "CLI invocation failed";
        fs::remove_all(dir, ec);
        return false;
    }

    std::string out1 = slurp((dir / "out1.csv").string());
    bool same_seed = !out1.empty() &&
                     out1 == slurp((dir / "out2.csv").string()) &&
                     slurp((dir / "m1.csv").string()) ==
                         slurp((dir / "m2.csv").string());
    bool same_threads = out1 == slurp((dir / "out3.csv").string()) &&
                        slurp((dir / "m1.csv").string()) ==
                            slurp((dir / "m3.csv").string());
    fs::remove_all(dir, ec);

    if (!same_seed) {
        detail = "reruns with the same seed differ";
        return false;
    }
    if (!same_threads) {
        detail = "thread-count setting changed the output";
        return false;
    }
    detail = "results and metrics byte-identical across reruns and threads";
    return true;
}

} // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    struct Criterion {
        int id;
        const char* name;
        bool pass;
        std::string detail;
        double seconds;
    };
    std::vector<Criterion> results;

    auto record = [&](int id, const char* name, auto&& fn) {
        Timer timer;
        std::string detail;
        bool pass = false;
        try {
            pass = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        results.push_back({id, name, pass, detail, timer.seconds()});
        std::cout << (pass ? "PASS" : "FAIL") << ": [" << id << "] " << name
                  << " (" << format_double(std::round(timer.seconds() * 10.0) /
                                           10.0)
                  << " s) - " << detail << '\n'
                  << std::flush;
    };

    record(1, "stopping-rule exactness", criterion_stopping_rule);
    record(2, "expected-sample-count ceiling", criterion_expected_count);
    record(3, "CDF oracle equivalence", criterion_cdf_oracle);
    record(4, "sup-statistic correctness", criterion_ks_statistic);
    record(5, "error trends across rates", criterion_error_trends);
    record(6, "bound-formula fidelity", criterion_bound_fidelity);
    record(7, "sup-bound coverage", criterion_coverage);
    record(8, "identity-field sanity", criterion_identity_field);
    record(9, "mobile-vs-fixed comparison", criterion_mobile_vs_fixed);
    record(10, "CLI determinism", [&](std::string& detail) {
        return criterion_cli_determinism(cli, detail);
    });

    int failures = 0;
    for (const auto& r : results)
        if (!r.pass) ++failures;
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all 10 criteria passed\n";
    return 0;
}
