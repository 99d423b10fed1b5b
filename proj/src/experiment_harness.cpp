#include "fieldcdf/experiment_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fieldcdf/numeric.hpp"

namespace fieldcdf {

namespace {

// Fixed tags keep the density-estimation and reference-sample streams
// disjoint from the per-repetition trial streams.
constexpr std::uint64_t kSeedTagMaxPdf = 0x6d61787064660001ULL;
constexpr std::uint64_t kSeedTagReference = 0x7265666572656e63ULL;

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::string join_ints(const std::vector<std::int64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

const char* dist_kind_name(IntersampleKind k) {
    switch (k) {
        case IntersampleKind::triangular_symmetric: return "triangular";
        case IntersampleKind::scaled_beta: return "beta";
        case IntersampleKind::deterministic: return "deterministic";
    }
    return "?";
}

IntersampleKind dist_kind_from_name(const std::string& name) {
    if (name == "triangular") return IntersampleKind::triangular_symmetric;
    if (name == "beta") return IntersampleKind::scaled_beta;
    if (name == "deterministic") return IntersampleKind::deterministic;
    throw ConfigError("unknown dist '" + name +
                      "' (expected triangular, beta, or deterministic)");
}

// One true-location field value whose law matches trial i = j mod N of a
// repetition: same epoch pattern, fresh amplitude draw.
double draw_reference_value(const ExperimentConfig& cfg, double s,
                            std::int64_t N, std::uint64_t tag,
                            std::int64_t j) {
    double epoch = static_cast<double>(j % N) * cfg.timing.epoch_spacing;
    Rng rng(seed_chain(cfg.seed, tag, static_cast<std::uint64_t>(N),
                       static_cast<std::uint64_t>(j)));
    return realize(cfg.field, epoch, rng).evaluate(s);
}

// A point-mass value distribution has no bounded density; the bounds that
// use max_pdf are vacuous there, which infinity expresses directly.
double max_pdf_or_inf(const std::vector<double>& values) {
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (lo == hi) return std::numeric_limits<double>::infinity();
    return estimate_max_pdf(values);
}

BoundParams base_params(const ExperimentConfig& cfg, double lambda,
                        std::int64_t n, std::int64_t N) {
    BoundParams p;
    p.alpha = cfg.field.declared_lipschitz();
    p.n = static_cast<double>(n);
    p.lambda = lambda;
    p.C = cfg.C;
    p.beta = cfg.beta;
    p.eps = 1.0;  // placeholder until the rule resolves it
    p.delta = cfg.delta;
    p.N = static_cast<double>(N);
    p.max_pdf = 1.0;  // placeholder
    return p;
}

// Shared per-(n, N) quantities: the bound and its inputs do not vary
// across repetitions.
struct CellContext {
    std::vector<double> max_pdf;  // per s_eval entry
    std::vector<double> eps;
    std::vector<double> bound;
};

CellContext make_cell_context(const ExperimentConfig& cfg,
                              const IntersampleDistribution& dist,
                              std::int64_t n, std::int64_t N) {
    CellContext ctx;
    for (std::size_t si = 0; si < cfg.s_eval.size(); ++si) {
        double s = cfg.s_eval[si].value;
        std::vector<double> sample(
            static_cast<std::size_t>(cfg.max_pdf_sample));
        for (std::int64_t j = 0; j < cfg.max_pdf_sample; ++j)
            sample[static_cast<std::size_t>(j)] = draw_reference_value(
                cfg, s, N, kSeedTagMaxPdf + si, j);
        double max_pdf = max_pdf_or_inf(sample);
        BoundParams p = base_params(cfg, dist.lambda(), n, N);
        p.max_pdf = max_pdf;
        double eps = cfg.eps_rule.resolve(p, s, static_cast<double>(n));
        p.eps = eps;
        ctx.max_pdf.push_back(max_pdf);
        ctx.eps.push_back(eps);
        ctx.bound.push_back(cdf_sup_error_bound(p, s).value);
    }
    return ctx;
}

std::vector<RepetitionRow> run_repetition_internal(
    const ExperimentConfig& cfg, const IntersampleDistribution& dist,
    const CellContext& ctx, std::int64_t n, std::int64_t N,
    std::int64_t rep_id) {
    std::uint64_t rep_seed =
        seed_chain(cfg.seed, static_cast<std::uint64_t>(n),
                   static_cast<std::uint64_t>(N),
                   static_cast<std::uint64_t>(rep_id));
    std::size_t num_s = cfg.s_eval.size();
    std::vector<std::vector<double>> estimated(num_s);
    std::vector<std::vector<double>> reference(num_s);
    for (std::size_t si = 0; si < num_s; ++si) {
        estimated[si].reserve(static_cast<std::size_t>(N));
        reference[si].reserve(static_cast<std::size_t>(N));
    }
    // Trials are processed one at a time; only the per-s values survive,
    // so memory stays O(N * |s_eval|) even at n = 10^4.
    for (std::int64_t i = 0; i < N; ++i) {
        TrialWithField tw =
            run_trial_full(cfg.field, dist, i,
                           seed_chain(rep_seed, static_cast<std::uint64_t>(i)),
                           cfg.timing);
        TrialView view = estimator_view(tw.record);
        for (std::size_t si = 0; si < num_s; ++si) {
            estimated[si].push_back(estimate_field_at(view, cfg.s_eval[si]));
            reference[si].push_back(tw.field.evaluate(cfg.s_eval[si].value));
        }
    }
    std::vector<RepetitionRow> rows;
    rows.reserve(num_s);
    for (std::size_t si = 0; si < num_s; ++si) {
        EmpiricalCdf est(std::move(estimated[si]));
        EmpiricalCdf ref(std::move(reference[si]));
        std::vector<double> grid =
            make_metric_grid(est, ref, cfg.metric_grid_size);
        double mx = max_pointwise_diff(est, ref);
        rows.push_back(RepetitionRow{cfg.s_eval[si], n, N, rep_id,
                                     avg_pointwise_diff(est, ref, grid), mx,
                                     ctx.bound[si], mx > ctx.bound[si],
                                     ctx.eps[si]});
    }
    return rows;
}

bool row_key_less(const RepetitionRow& a, const RepetitionRow& b) {
    if (a.s.value != b.s.value) return a.s.value < b.s.value;
    if (a.n != b.n) return a.n < b.n;
    if (a.N != b.N) return a.N < b.N;
    return a.rep < b.rep;
}

// Means per (s, n, N) over repetitions in row order; callers pass rows
// already sorted by the same key, so the summation order is fixed and the
// recomputation after a file round-trip is bit-identical.
std::vector<AggregateRow> aggregate_rows(
    const std::vector<RepetitionRow>& rows) {
    std::vector<AggregateRow> aggs;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        double sum_avg = 0.0;
        double sum_max = 0.0;
        std::int64_t exceed_count = 0;
        while (j < rows.size() && rows[j].s.value == rows[i].s.value &&
               rows[j].n == rows[i].n && rows[j].N == rows[i].N) {
            sum_avg += rows[j].avg_diff;
            sum_max += rows[j].max_diff;
            exceed_count += rows[j].exceeded ? 1 : 0;
            ++j;
        }
        double count = static_cast<double>(j - i);
        aggs.push_back(AggregateRow{rows[i].s, rows[i].n, rows[i].N,
                                    sum_avg / count, sum_max / count,
                                    static_cast<double>(exceed_count) / count});
        i = j;
    }
    return aggs;
}

} // namespace

EpsRule EpsRule::parse(const std::string& text) {
    EpsRule rule;
    if (text == "minimize") {
        rule.kind = Kind::minimize;
        return rule;
    }
    if (text.rfind("fixed:", 0) == 0) {
        rule.kind = Kind::fixed;
        if (!parse_double(text.substr(6), rule.value) || !(rule.value > 0.0))
            throw ConfigError("eps rule needs a positive number after "
                              "'fixed:', got '" + text + "'");
        return rule;
    }
    if (text == "n^-1/4") {  // common spelling of the quarter-power rule
        rule.kind = Kind::power_of_n;
        rule.value = -0.25;
        return rule;
    }
    if (text.rfind("n^", 0) == 0) {
        rule.kind = Kind::power_of_n;
        if (!parse_double(text.substr(2), rule.value))
            throw ConfigError("eps rule needs a numeric exponent after 'n^', "
                              "got '" + text + "'");
        return rule;
    }
    throw ConfigError("unknown eps rule '" + text +
                      "' (expected minimize, fixed:<v>, or n^<p>)");
}

std::string EpsRule::to_string() const {
    switch (kind) {
        case Kind::minimize: return "minimize";
        case Kind::fixed: return "fixed:" + format_double(value);
        case Kind::power_of_n: return "n^" + format_double(value);
    }
    return "?";
}

std::vector<double> EpsRule::default_eps_grid() {
    std::vector<double> grid;
    grid.reserve(61);
    for (int i = 0; i <= 60; ++i)
        grid.push_back(std::pow(10.0, -3.0 + 0.1 * static_cast<double>(i)));
    return grid;
}

double EpsRule::resolve(const BoundParams& base, double s, double n) const {
    switch (kind) {
        case Kind::fixed: return value;
        case Kind::power_of_n: return std::pow(n, value);
        case Kind::minimize:
            return minimize_pointwise_bound(base, s, default_eps_grid()).eps;
    }
    throw std::logic_error("unhandled eps rule");
}

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& cfg) {
    ExperimentConfig out;
    out.field = field_spec_from_config(cfg);
    out.field_table_path = cfg.get_string("field.table", "");
    out.dist_kind = dist_kind_from_name(cfg.get_string("dist", "triangular"));
    out.lambda = cfg.get_double("lambda", 2.0);
    out.beta_shape = cfg.get_double("beta_shape", 2.0);
    out.s_eval.clear();
    std::vector<std::string> s_tokens{"0.25", "0.5", "0.75"};
    if (cfg.has("s_eval")) s_tokens = cfg.get_string_list("s_eval");
    for (const std::string& tok : s_tokens)
        out.s_eval.push_back(DecimalValue::parse(tok));
    out.n_sweep = {10, 100, 1000, 10000};
    if (cfg.has("n_sweep")) out.n_sweep = cfg.get_int_list("n_sweep");
    out.N_sweep = {50, 500};
    if (cfg.has("N_sweep")) out.N_sweep = cfg.get_int_list("N_sweep");
    out.repetitions = cfg.get_int("repetitions", 200);
    out.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
    out.metric_grid_size = cfg.get_int("metric_grid", 512);
    out.C = cfg.get_double("C", 1.0);
    out.beta = cfg.get_double("beta", 1.0);
    out.delta = cfg.get_double("delta", 0.05);
    out.eps_rule = EpsRule::parse(cfg.get_string("eps_rule", "minimize"));
    out.scale = cfg.get_double("scale", 1.0);
    out.threads = cfg.get_int("threads", 1);
    out.timing.epoch_spacing = cfg.get_double("epoch_spacing", 1.0);
    out.timing.sample_period = cfg.get_double("sample_period", 1.0 / 3600.0);
    out.max_pdf_sample = cfg.get_int("max_pdf_sample", 20000);
    out.ref_sample = cfg.get_int("ref_sample", 20000);
    out.validate();
    return out;
}

void ExperimentConfig::validate() const {
    for (const DecimalValue& s : s_eval)
        if (!(s.value >= 0.0 && s.value <= 1.0))
            throw ConfigError("s_eval entries must lie in [0,1]");
    if (s_eval.empty()) throw ConfigError("s_eval must not be empty");
    if (n_sweep.empty()) throw ConfigError("n_sweep must not be empty");
    if (N_sweep.empty()) throw ConfigError("N_sweep must not be empty");
    for (std::int64_t n : n_sweep)
        if (n < 1) throw ConfigError("n_sweep entries must be >= 1");
    for (std::int64_t N : N_sweep)
        if (N < 1) throw ConfigError("N_sweep entries must be >= 1");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (metric_grid_size < 1) throw ConfigError("metric_grid must be >= 1");
    if (!(C > 0.0)) throw ConfigError("C must be > 0");
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta must be in (0,1]");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0,1)");
    if (!(scale > 0.0)) throw ConfigError("scale must be > 0");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (max_pdf_sample < 2) throw ConfigError("max_pdf_sample must be >= 2");
    if (ref_sample < 2) throw ConfigError("ref_sample must be >= 2");
    if (!(timing.epoch_spacing >= 0.0))
        throw ConfigError("epoch_spacing must be >= 0");
    if (!(timing.sample_period > 0.0))
        throw ConfigError("sample_period must be > 0");
}

std::int64_t ExperimentConfig::effective_repetitions() const {
    double scaled = static_cast<double>(repetitions) * scale;
    return std::max<std::int64_t>(1, std::llround(scaled));
}

std::map<std::string, std::string> ExperimentConfig::to_entries() const {
    std::map<std::string, std::string> e;
    if (field.kind() == FieldKind::cosine_sum) {
        e["field.kind"] = "cosine_sum";
        e["field.a0"] = format_double(field.a0());
        e["field.f"] = format_double(field.frequency());
        e["field.amp"] = join_doubles(field.amp_ceiling());
        e["field.envelope_period"] = format_double(field.envelope_period());
    } else {
        e["field.kind"] = "user_table";
        if (!field_table_path.empty()) e["field.table"] = field_table_path;
    }
    e["field.bound"] = format_double(field.declared_bound());
    e["field.lipschitz"] = format_double(field.declared_lipschitz());
    e["dist"] = dist_kind_name(dist_kind);
    e["lambda"] = format_double(
        dist_kind == IntersampleKind::scaled_beta ? lambda : 2.0);
    e["beta_shape"] = format_double(beta_shape);
    std::string s_list;
    for (std::size_t i = 0; i < s_eval.size(); ++i) {
        if (i) s_list += ',';
        s_list += format_double(s_eval[i].value);
    }
    e["s_eval"] = s_list;
    e["n_sweep"] = join_ints(n_sweep);
    e["N_sweep"] = join_ints(N_sweep);
    e["repetitions"] = std::to_string(repetitions);
    e["effective_repetitions"] = std::to_string(effective_repetitions());
    e["seed"] = std::to_string(seed);
    e["metric_grid"] = std::to_string(metric_grid_size);
    e["C"] = format_double(C);
    e["beta"] = format_double(beta);
    e["delta"] = format_double(delta);
    e["eps_rule"] = eps_rule.to_string();
    e["scale"] = format_double(scale);
    // threads is deliberately not echoed: it only changes how work is laid
    // out, never the results, and result files must be byte-identical
    // across thread counts.
    e["epoch_spacing"] = format_double(timing.epoch_spacing);
    e["sample_period"] = format_double(timing.sample_period);
    e["max_pdf_sample"] = std::to_string(max_pdf_sample);
    e["ref_sample"] = std::to_string(ref_sample);
    return e;
}

std::vector<RepetitionRow> run_repetition(const ExperimentConfig& cfg,
                                          std::int64_t n, std::int64_t N,
                                          std::int64_t rep_id) {
    cfg.validate();
    IntersampleDistribution dist = IntersampleDistribution::from_kind(
        cfg.dist_kind, n, cfg.lambda, cfg.beta_shape);
    CellContext ctx = make_cell_context(cfg, dist, n, N);
    return run_repetition_internal(cfg, dist, ctx, n, N, rep_id);
}

ExperimentResult run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    std::int64_t reps = cfg.effective_repetitions();
    struct Cell {
        std::int64_t n;
        std::int64_t N;
        IntersampleDistribution dist;
        CellContext ctx;
    };
    std::vector<Cell> cells;
    for (std::int64_t n : cfg.n_sweep) {
        for (std::int64_t N : cfg.N_sweep) {
            IntersampleDistribution dist = IntersampleDistribution::from_kind(
                cfg.dist_kind, n, cfg.lambda, cfg.beta_shape);
            CellContext ctx = make_cell_context(cfg, dist, n, N);
            cells.push_back(Cell{n, N, dist, std::move(ctx)});
        }
    }

    std::size_t num_s = cfg.s_eval.size();
    std::size_t total_tasks = cells.size() * static_cast<std::size_t>(reps);
    std::vector<RepetitionRow> rows(total_tasks * num_s);
    // Each task owns a disjoint slot range, so scheduling order cannot
    // affect the result.
    auto run_task = [&](std::size_t task) {
        std::size_t cell_idx = task / static_cast<std::size_t>(reps);
        std::int64_t rep =
            static_cast<std::int64_t>(task % static_cast<std::size_t>(reps));
        const Cell& cell = cells[cell_idx];
        std::vector<RepetitionRow> r = run_repetition_internal(
            cfg, cell.dist, cell.ctx, cell.n, cell.N, rep);
        std::copy(r.begin(), r.end(), rows.begin() + task * num_s);
    };

    std::int64_t threads = std::max<std::int64_t>(1, cfg.threads);
    if (threads == 1) {
        for (std::size_t t = 0; t < total_tasks; ++t) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::int64_t w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t t = next.fetch_add(1);
                    if (t >= total_tasks) return;
                    run_task(t);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }

    ExperimentResult result;
    result.rows = std::move(rows);
    std::sort(result.rows.begin(), result.rows.end(), row_key_less);
    result.aggregates = aggregate_rows(result.rows);
    return result;
}

void export_results(const ExperimentResult& result,
                    const std::map<std::string, std::string>& config_echo,
                    const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open output file: " + tmp);
        for (const auto& [key, value] : config_echo)
            out << "# " << key << " = " << value << '\n';
        out << "s,n,N,rep,avg_diff,max_diff,bound,exceeded\n";
        for (const RepetitionRow& r : result.rows) {
            out << format_double(r.s.value) << ',' << r.n << ',' << r.N << ','
                << r.rep << ',' << format_double(r.avg_diff) << ','
                << format_double(r.max_diff) << ',' << format_double(r.bound)
                << ',' << (r.exceeded ? '1' : '0') << '\n';
        }
        if (!out)
            throw std::runtime_error("failed writing output file: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move results into place: " + path);
}

ExperimentResult parse_results(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results file: " + path);
    ExperimentResult result;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != "s,n,N,rep,avg_diff,max_diff,bound,exceeded")
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": unexpected header");
            saw_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::string item;
        std::istringstream row(line);
        while (std::getline(row, item, ',')) fields.push_back(item);
        if (fields.size() != 8)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 8 fields");
        RepetitionRow r;
        r.s = DecimalValue::parse(fields[0]);
        if (!parse_i64(fields[1], r.n) || !parse_i64(fields[2], r.N) ||
            !parse_i64(fields[3], r.rep) ||
            !parse_double(fields[4], r.avg_diff) ||
            !parse_double(fields[5], r.max_diff) ||
            !parse_double(fields[6], r.bound))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed row");
        if (fields[7] == "0")
            r.exceeded = false;
        else if (fields[7] == "1")
            r.exceeded = true;
        else
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": exceeded must be 0 or 1");
        r.eps = 0.0;  // not serialized; the config echo records the rule
        result.rows.push_back(r);
    }
    if (!saw_header)
        throw std::runtime_error(path + ": missing results header");
    result.aggregates = aggregate_rows(result.rows);
    return result;
}

void export_aggregates_csv(const ExperimentResult& result,
                           const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open output file: " + tmp);
        out << "metric,s,n,N,value\n";
        for (const AggregateRow& a : result.aggregates) {
            std::string key = format_double(a.s.value) + ',' +
                              std::to_string(a.n) + ',' + std::to_string(a.N);
            out << "mean_avg_diff," << key << ','
                << format_double(a.mean_avg_diff) << '\n';
            out << "mean_max_diff," << key << ','
                << format_double(a.mean_max_diff) << '\n';
            out << "coverage_rate," << key << ','
                << format_double(a.coverage_rate) << '\n';
        }
        if (!out)
            throw std::runtime_error("failed writing output file: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move results into place: " + path);
}

CoverageResult run_coverage(const ExperimentConfig& cfg, const DecimalValue& s,
                            std::int64_t n, std::int64_t N,
                            std::int64_t experiments) {
    cfg.validate();
    if (experiments < 1)
        throw std::invalid_argument("coverage needs >= 1 experiment");
    IntersampleDistribution dist = IntersampleDistribution::from_kind(
        cfg.dist_kind, n, cfg.lambda, cfg.beta_shape);

    // Fixed reference: a large true-location sample standing in for the
    // exact value distribution.
    std::vector<double> ref_values(static_cast<std::size_t>(cfg.ref_sample));
    for (std::int64_t j = 0; j < cfg.ref_sample; ++j)
        ref_values[static_cast<std::size_t>(j)] =
            draw_reference_value(cfg, s.value, N, kSeedTagReference, j);
    double max_pdf = max_pdf_or_inf(ref_values);
    EmpiricalCdf reference(std::move(ref_values));

    BoundParams p = base_params(cfg, dist.lambda(), n, N);
    p.max_pdf = max_pdf;
    p.eps = cfg.eps_rule.resolve(p, s.value, static_cast<double>(n));
    double bound = cdf_sup_error_bound(p, s.value).value;

    std::int64_t exceed_count = 0;
    for (std::int64_t r = 0; r < experiments; ++r) {
        std::uint64_t rep_seed =
            seed_chain(cfg.seed, static_cast<std::uint64_t>(n),
                       static_cast<std::uint64_t>(N),
                       static_cast<std::uint64_t>(r));
        std::vector<double> estimated;
        estimated.reserve(static_cast<std::size_t>(N));
        for (std::int64_t i = 0; i < N; ++i) {
            TrialRecord record =
                run_trial(cfg.field, dist, i,
                          seed_chain(rep_seed, static_cast<std::uint64_t>(i)),
                          cfg.timing);
            estimated.push_back(estimate_field_at(record, s));
        }
        EmpiricalCdf est(std::move(estimated));
        if (max_pointwise_diff(est, reference) > bound) ++exceed_count;
    }
    return CoverageResult{bound,
                          is_vacuous(bound),
                          static_cast<double>(exceed_count) /
                              static_cast<double>(experiments),
                          experiments,
                          p.eps,
                          max_pdf};
}

} // namespace fieldcdf
