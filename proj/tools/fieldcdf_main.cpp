// Command-line front end: simulation sweeps, analytic bound tables,
// mobile-vs-fixed dataset comparison, and synthetic fixture generation.
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fieldcdf/dataset_io.hpp"
#include "fieldcdf/error_bounds.hpp"
#include "fieldcdf/experiment_harness.hpp"
#include "fieldcdf/numeric.hpp"

namespace {

using namespace fieldcdf;

constexpr std::uint64_t kSeedTagFixtureFast = 0x66697874666173ULL;
constexpr std::uint64_t kSeedTagFixtureSlow = 0x66697874736c6fULL;
constexpr std::uint64_t kSeedTagFixtureRef = 0x6669787472656600ULL;

KeyValueConfig load_config(const std::string& config_path,
                           const std::vector<std::string>& overrides) {
    KeyValueConfig cfg;
    if (!config_path.empty()) cfg = KeyValueConfig::parse_file(config_path);
    for (const std::string& assignment : overrides)
        cfg.apply_override(assignment);
    return cfg;
}

int cmd_simulate(const std::string& config_path,
                 const std::vector<std::string>& overrides,
                 const std::string& out, const std::string& metrics_out,
                 const std::optional<std::int64_t>& seed,
                 const std::optional<double>& scale) {
    KeyValueConfig kv = load_config(config_path, overrides);
    if (seed) kv.set("seed", std::to_string(*seed));
    if (scale) kv.set("scale", format_double(*scale));
    ExperimentConfig cfg = ExperimentConfig::from_config(kv);
    ExperimentResult result = run_sweep(cfg);
    export_results(result, cfg.to_entries(), out);
    std::cout << "wrote " << out << " (" << result.rows.size()
              << " rows, " << result.aggregates.size() << " cells)\n";
    if (!metrics_out.empty()) {
        export_aggregates_csv(result, metrics_out);
        std::cout << "wrote " << metrics_out << '\n';
    }
    return 0;
}

int cmd_bounds(const std::string& config_path,
               const std::vector<std::string>& overrides,
               const std::string& out, const std::optional<double>& delta_flag,
               const std::string& eps_rule_flag) {
    KeyValueConfig kv = load_config(config_path, overrides);
    if (delta_flag) kv.set("delta", format_double(*delta_flag));
    if (!eps_rule_flag.empty()) kv.set("eps_rule", eps_rule_flag);

    BoundParams base;
    base.alpha = kv.get_double("alpha", 1.0);
    base.max_pdf = kv.get_double("max_pdf", 1.0);
    base.lambda = kv.get_double("lambda", 2.0);
    base.C = kv.get_double("C", 1.0);
    base.beta = kv.get_double("beta", 1.0);
    base.delta = kv.get_double("delta", 0.05);
    base.eps = 1.0;  // placeholder; the rule sets it per row
    base.n = 100.0;
    base.N = 50.0;
    EpsRule rule = EpsRule::parse(kv.get_string("eps_rule", "minimize"));

    std::vector<DecimalValue> s_eval;
    std::vector<std::string> s_tokens{"0.5"};
    if (kv.has("s_eval")) s_tokens = kv.get_string_list("s_eval");
    for (const std::string& tok : s_tokens)
        s_eval.push_back(DecimalValue::parse(tok));
    std::vector<std::int64_t> n_sweep{100};
    if (kv.has("n_sweep")) n_sweep = kv.get_int_list("n_sweep");
    std::vector<std::int64_t> N_sweep{50};
    if (kv.has("N_sweep")) N_sweep = kv.get_int_list("N_sweep");

    {
        BoundParams check = base;
        check.validate();
    }

    std::string tmp = out + ".tmp";
    std::ofstream file(tmp, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + tmp);
    file << "# alpha = " << format_double(base.alpha) << '\n';
    file << "# max_pdf = " << format_double(base.max_pdf) << '\n';
    file << "# lambda = " << format_double(base.lambda) << '\n';
    file << "# eps_rule = " << rule.to_string() << '\n';
    file << "bound_name,s,n,N,eps,delta,C,beta,value,vacuous\n";

    // location_mse is a squared-distance bound, not a probability, so the
    // vacuous flag never applies to it.
    auto row = [&](const char* name, double s, std::int64_t n, std::int64_t N,
                   double eps, double value, bool probability_like) {
        file << name << ',' << format_double(s) << ',' << n << ',' << N << ','
             << format_double(eps) << ',' << format_double(base.delta) << ','
             << format_double(base.C) << ',' << format_double(base.beta) << ','
             << format_double(value) << ','
             << ((probability_like && is_vacuous(value)) ? '1' : '0') << '\n';
    };

    for (const DecimalValue& s : s_eval) {
        for (std::int64_t n : n_sweep) {
            for (std::int64_t N : N_sweep) {
                BoundParams p = base;
                p.n = static_cast<double>(n);
                p.N = static_cast<double>(N);
                p.eps = rule.resolve(p, s.value, p.n);
                row("location_mse", s.value, n, N, p.eps,
                    location_mse_bound(p, s.value), false);
                row("value_deviation_prob", s.value, n, N, p.eps,
                    value_deviation_prob_bound(p, s.value), true);
                row("value_deviation_prob_sup", s.value, n, N, p.eps,
                    value_deviation_prob_sup_bound(p), true);
                row("cdf_shift", s.value, n, N, p.eps,
                    cdf_shift_bound(p, s.value), true);
                row("cdf_pointwise_error", s.value, n, N, p.eps,
                    cdf_pointwise_error_bound(p, s.value), true);
                row("cdf_sup_error", s.value, n, N, p.eps,
                    cdf_sup_error_bound(p, s.value).value, true);
                row("dkw_halfwidth", s.value, n, N, p.eps,
                    dkw_epsilon(p.N, p.delta), true);
            }
        }
    }
    if (!file) throw std::runtime_error("failed writing output file: " + tmp);
    file.close();
    if (std::rename(tmp.c_str(), out.c_str()) != 0)
        throw std::runtime_error("cannot move output into place: " + out);
    std::cout << "wrote " << out << '\n';
    return 0;
}

int cmd_compare(const std::string& config_path,
                const std::vector<std::string>& overrides,
                const std::string& trials_path, const std::string& ref_path,
                const std::string& location, const std::string& out,
                const std::optional<double>& delta_flag) {
    KeyValueConfig kv = load_config(config_path, overrides);
    double delta = delta_flag ? *delta_flag : kv.get_double("delta", 0.05);
    if (!(delta > 0.0 && delta < 1.0))
        throw ConfigError("delta must lie in (0,1)");
    std::int64_t grid = kv.get_int("metric_grid", 512);

    TrialSet trials = load_trials(trials_path);
    for (const std::string& w : trials.warnings)
        std::cerr << "warning: " << w << '\n';
    ReferenceSet ref = load_reference(ref_path);

    std::vector<std::string> ids;
    if (!location.empty()) {
        if (!ref.find(location))
            throw std::invalid_argument("unknown location_id '" + location +
                                        "'");
        ids.push_back(location);
    } else {
        for (const ReferenceEntry& e : ref.entries)
            ids.push_back(e.location_id);
    }
    std::vector<ComparisonReport> reports;
    for (const std::string& id : ids)
        reports.push_back(
            compare_mobile_vs_fixed(trials, ref, id, delta, grid));
    save_comparison_csv(reports, delta, grid, out);
    std::cout << "wrote " << out << " (" << reports.size() << " locations)\n";
    return 0;
}

int cmd_gen_fixtures(const std::string& config_path,
                     const std::vector<std::string>& overrides,
                     const std::string& out_dir,
                     const std::optional<std::int64_t>& seed_flag) {
    KeyValueConfig kv = load_config(config_path, overrides);
    if (seed_flag) kv.set("seed", std::to_string(*seed_flag));
    FieldSpec field = field_spec_from_config(kv);
    std::uint64_t seed = static_cast<std::uint64_t>(kv.get_int("seed", 1));
    std::int64_t n_fast = kv.get_int("fixture.n_fast", 200);
    std::int64_t n_slow = kv.get_int("fixture.n_slow", 50);
    std::int64_t num_trials = kv.get_int("fixture.trials", 43);
    std::int64_t ref_samples = kv.get_int("fixture.ref_samples", 200);
    std::int64_t num_locations = kv.get_int("fixture.locations", 9);
    if (num_trials < 1 || ref_samples < 1 || num_locations < 1)
        throw ConfigError("fixture sizes must be >= 1");
    TimingModel timing;
    timing.epoch_spacing = kv.get_double("epoch_spacing", 1.0);
    timing.sample_period = kv.get_double("sample_period", 1.0 / 3600.0);

    std::filesystem::create_directories(out_dir);

    auto make_trials = [&](std::int64_t n, std::uint64_t tag) {
        IntersampleDistribution dist = IntersampleDistribution::triangular(n);
        TrialSet set;
        set.metadata.set("device", "synthetic mobile sensor");
        set.metadata.set("path_length_m", "1015");
        set.metadata.set("sample_period_s", "1");
        set.metadata.set("spatial_rate_n", std::to_string(n));
        for (std::int64_t i = 0; i < num_trials; ++i) {
            TrialRecord record = run_trial(field, dist, i,
                                           seed_chain(seed, tag,
                                                      static_cast<std::uint64_t>(i)),
                                           timing);
            // Fixture files carry no oracle data.
            record.hidden_locations.clear();
            record.overshoot_interval = 0.0;
            set.trials.push_back(std::move(record));
        }
        return set;
    };

    std::string fast_path = out_dir + "/trials_fast.csv";
    std::string slow_path = out_dir + "/trials_slow.csv";
    std::string ref_path = out_dir + "/reference.csv";
    save_trials(make_trials(n_fast, kSeedTagFixtureFast), fast_path);
    save_trials(make_trials(n_slow, kSeedTagFixtureSlow), slow_path);

    ReferenceSet ref;
    ref.metadata.set("device", "synthetic fixed sensor");
    ref.metadata.set("path_length_m", "1015");
    for (std::int64_t l = 1; l <= num_locations; ++l) {
        ReferenceEntry entry;
        entry.location_id = std::to_string(l);
        entry.s = DecimalValue::from_fraction(l, num_locations + 1);
        for (std::int64_t r = 0; r < ref_samples; ++r) {
            // Epochs cycle over the trial epochs so the fixed sensor sees
            // the same amplitude-law mixture as the mobile trials.
            double epoch =
                static_cast<double>(r % num_trials) * timing.epoch_spacing;
            Rng rng(seed_chain(seed, kSeedTagFixtureRef,
                               static_cast<std::uint64_t>(l),
                               static_cast<std::uint64_t>(r)));
            entry.samples.push_back(
                realize(field, epoch, rng).evaluate(entry.s.value));
        }
        ref.entries.push_back(std::move(entry));
    }
    save_reference(ref, ref_path);
    std::cout << "wrote " << fast_path << '\n'
              << "wrote " << slow_path << '\n'
              << "wrote " << ref_path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Learns and validates field-value distributions sampled along a "
        "unit path at renewal-process locations"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out;
    std::optional<std::int64_t> seed;
    std::optional<double> scale;
    std::optional<double> delta;
    std::string eps_rule;
    std::string metrics_out;
    std::string trials_path;
    std::string ref_path;
    std::string location;
    std::string out_dir;

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run the Monte-Carlo sweep and write per-repetition "
                    "CDF-difference metrics");
    simulate->add_option("--config", config_path, "Config file (key = value)");
    simulate->add_option("--override", overrides,
                         "Config override KEY=VAL (repeatable)");
    simulate->add_option("--out", out, "Output CSV path")->required();
    simulate->add_option("--metrics-out", metrics_out,
                         "Also write per-cell aggregates (metric,s,n,N,value)");
    simulate->add_option("--seed", seed, "Master seed (overrides config)");
    simulate->add_option("--scale", scale,
                         "Repetition scale factor (overrides config)");

    CLI::App* bounds = app.add_subcommand(
        "bounds", "Evaluate the analytic error bounds over a parameter grid");
    bounds->add_option("--config", config_path, "Config file (key = value)");
    bounds->add_option("--override", overrides,
                       "Config override KEY=VAL (repeatable)");
    bounds->add_option("--out", out, "Output CSV path")->required();
    bounds->add_option("--delta", delta, "Failure probability (overrides config)");
    bounds->add_option("--eps-rule", eps_rule,
                       "Accuracy rule: minimize, fixed:<v>, or n^<p>");

    CLI::App* compare = app.add_subcommand(
        "compare", "Compare mobile-trial CDF estimates against fixed-sensor "
                   "reference samples");
    compare->add_option("--config", config_path, "Config file (key = value)");
    compare->add_option("--override", overrides,
                        "Config override KEY=VAL (repeatable)");
    compare->add_option("--trials", trials_path, "Trial CSV path")->required();
    compare->add_option("--ref", ref_path, "Reference CSV path")->required();
    compare->add_option("--location", location,
                        "Only this location_id (default: all)");
    compare->add_option("--out", out, "Output CSV path")->required();
    compare->add_option("--delta", delta, "Band failure probability");

    CLI::App* gen = app.add_subcommand(
        "gen-fixtures", "Generate synthetic trial and reference datasets");
    gen->add_option("--config", config_path, "Config file (key = value)");
    gen->add_option("--override", overrides,
                    "Config override KEY=VAL (repeatable)");
    gen->add_option("--out-dir", out_dir, "Output directory")->required();
    gen->add_option("--seed", seed, "Master seed (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(config_path, overrides, out, metrics_out, seed,
                                scale);
        if (bounds->parsed())
            return cmd_bounds(config_path, overrides, out, delta, eps_rule);
        if (compare->parsed())
            return cmd_compare(config_path, overrides, trials_path, ref_path,
                               location, out, delta);
        if (gen->parsed())
            return cmd_gen_fixtures(config_path, overrides, out_dir, seed);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
