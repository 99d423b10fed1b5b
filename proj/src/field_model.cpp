#include "fieldcdf/field_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fieldcdf/numeric.hpp"

namespace fieldcdf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_unit_interval(double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::domain_error("path coordinate s must lie in [0,1], got " +
                                format_double(s));
}

// Ceilings for the defaults: the envelope factor 1 + 0.5*sin(.) never
// exceeds 1.5, so a_k <= 1.5*c_k always.
double auto_bound(double a0, const std::vector<double>& c) {
    double sum = 0.0;
    for (double ck : c) sum += 1.5 * ck;
    return std::abs(a0) + sum;
}

double auto_lipschitz(double f, const std::vector<double>& c) {
    // |d/ds a_k cos(2*pi*k*f*s)| <= 2*pi*k*f*a_k <= 2*pi*k*f*1.5*c_k.
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        sum += static_cast<double>(i + 1) * 1.5 * c[i];
    return kTwoPi * f * sum;
}

} // namespace

FieldSpec FieldSpec::cosine_sum(double a0, double f, int num_harmonics,
                                double amp_scale, double envelope_period) {
    if (num_harmonics < 1)
        throw std::invalid_argument("cosine_sum needs at least one harmonic");
    std::vector<double> c(static_cast<std::size_t>(num_harmonics));
    for (int k = 1; k <= num_harmonics; ++k)
        c[static_cast<std::size_t>(k - 1)] = amp_scale / k;
    return cosine_sum_explicit(a0, f, std::move(c), envelope_period);
}

FieldSpec FieldSpec::cosine_sum_explicit(double a0, double f,
                                         std::vector<double> amp_ceiling,
                                         double envelope_period) {
    if (amp_ceiling.empty())
        throw std::invalid_argument("cosine_sum needs at least one harmonic");
    for (double ck : amp_ceiling)
        if (!(ck >= 0.0) || !std::isfinite(ck))
            throw std::invalid_argument("amplitude ceilings must be >= 0");
    if (!(f > 0.0))
        throw std::invalid_argument("spatial frequency must be positive");
    if (!(envelope_period > 0.0))
        throw std::invalid_argument("envelope period must be positive");
    FieldSpec spec;
    spec.kind_ = FieldKind::cosine_sum;
    spec.a0_ = a0;
    spec.f_ = f;
    spec.amp_ceiling_ = std::move(amp_ceiling);
    spec.envelope_period_ = envelope_period;
    spec.declared_bound_ = auto_bound(a0, spec.amp_ceiling_);
    spec.declared_lipschitz_ = auto_lipschitz(f, spec.amp_ceiling_);
    return spec;
}

FieldSpec FieldSpec::user_table(std::vector<TablePoint> points) {
    if (points.size() < 2)
        throw std::invalid_argument("field table needs at least two points");
    double max_abs = 0.0;
    double max_slope = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].s >= 0.0 && points[i].s <= 1.0))
            throw std::invalid_argument("field table s values must be in [0,1]");
        if (i > 0) {
            double ds = points[i].s - points[i - 1].s;
            if (!(ds > 0.0))
                throw std::invalid_argument(
                    "field table s values must be strictly increasing");
            max_slope = std::max(
                max_slope,
                std::abs(points[i].value - points[i - 1].value) / ds);
        }
        max_abs = std::max(max_abs, std::abs(points[i].value));
    }
    FieldSpec spec;
    spec.kind_ = FieldKind::user_table;
    spec.table_ =
        std::make_shared<const std::vector<TablePoint>>(std::move(points));
    spec.declared_bound_ = max_abs;
    spec.declared_lipschitz_ = max_slope;
    return spec;
}

void FieldSpec::set_declared_bound(double b) {
    if (!(b > 0.0))
        throw std::invalid_argument("declared bound must be positive");
    declared_bound_ = b;
}

void FieldSpec::set_declared_lipschitz(double alpha) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("declared Lipschitz constant must be positive");
    declared_lipschitz_ = alpha;
}

double FieldSpec::amplitude_ceiling_at(int k, double t) const {
    double ck = amp_ceiling_.at(static_cast<std::size_t>(k - 1));
    return ck * (1.0 + 0.5 * std::sin(kTwoPi * t / envelope_period_));
}

FieldRealization::FieldRealization(const FieldSpec& spec, double epoch_time,
                                   std::vector<double> amplitudes)
    : spec_(spec), epoch_time_(epoch_time), amplitudes_(std::move(amplitudes)) {}

double FieldRealization::evaluate(double s) const {
    check_unit_interval(s);
    double value;
    if (spec_.kind() == FieldKind::cosine_sum) {
        value = spec_.a0();
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
            double k = static_cast<double>(i + 1);
            value += amplitudes_[i] * std::cos(kTwoPi * k * spec_.frequency() * s);
        }
    } else {
        const std::vector<TablePoint>& pts = spec_.table();
        // Clamp outside the table's s-range to the end values.
        if (s <= pts.front().s) {
            value = pts.front().value;
        } else if (s >= pts.back().s) {
            value = pts.back().value;
        } else {
            auto it = std::upper_bound(
                pts.begin(), pts.end(), s,
                [](double x, const TablePoint& p) { return x < p.s; });
            const TablePoint& hi = *it;
            const TablePoint& lo = *(it - 1);
            double w = (s - lo.s) / (hi.s - lo.s);
            value = lo.value + w * (hi.value - lo.value);
        }
    }
    if (!std::isfinite(value))
        throw std::runtime_error("field evaluation produced a non-finite value");
    return value;
}

FieldRealization realize(const FieldSpec& spec, double epoch_time, Rng& rng) {
    std::vector<double> amps;
    if (spec.kind() == FieldKind::cosine_sum) {
        amps.resize(spec.amp_ceiling().size());
        for (int k = 1; k <= spec.num_harmonics(); ++k)
            amps[static_cast<std::size_t>(k - 1)] =
                rng.u01() * spec.amplitude_ceiling_at(k, epoch_time);
    }
    return FieldRealization(spec, epoch_time, std::move(amps));
}

double eval_field(const FieldSpec& spec, double s, double t,
                  std::uint64_t seed) {
    Rng rng(seed_chain(seed, std::bit_cast<std::uint64_t>(t)));
    return realize(spec, t, rng).evaluate(s);
}

double estimate_lipschitz(const FieldSpec& spec, int grid_size, double t,
                          std::uint64_t seed) {
    if (grid_size < 2)
        throw std::invalid_argument("lipschitz grid needs at least 2 points");
    Rng rng(seed_chain(seed, std::bit_cast<std::uint64_t>(t)));
    FieldRealization field = realize(spec, t, rng);
    double ds = 1.0 / (grid_size - 1);
    double max_quotient = 0.0;
    double prev = field.evaluate(0.0);
    for (int i = 1; i < grid_size; ++i) {
        double s = (i == grid_size - 1) ? 1.0 : i * ds;
        double cur = field.evaluate(s);
        max_quotient = std::max(max_quotient, std::abs(cur - prev) / ds);
        prev = cur;
    }
    return max_quotient;
}

BoundCheckReport verify_bounded(const FieldSpec& spec, int grid_size,
                                int num_time_draws, std::uint64_t seed) {
    if (grid_size < 1)
        throw std::invalid_argument("bound-check grid needs at least 1 point");
    if (num_time_draws < 1)
        throw std::invalid_argument("bound check needs at least 1 time draw");
    BoundCheckReport report;
    Rng rng(seed);
    for (int d = 0; d < num_time_draws; ++d) {
        // Times sweep the amplitude envelope's period.
        double t = rng.u01() * spec.envelope_period();
        FieldRealization field = realize(spec, t, rng);
        for (int i = 0; i < grid_size; ++i) {
            double s =
                (grid_size == 1) ? 0.5 : static_cast<double>(i) / (grid_size - 1);
            double v = field.evaluate(s);
            if (std::abs(v) > spec.declared_bound()) {
                report.pass = false;
                report.violations.push_back(FieldSample{v, t, s});
            }
        }
    }
    return report;
}

std::vector<TablePoint> load_field_table(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open field table: " + path);
    std::vector<TablePoint> points;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != "s,value")
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": expected header 's,value'");
            saw_header = true;
            continue;
        }
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected two comma-separated fields");
        TablePoint p;
        if (!parse_double(line.substr(0, comma), p.s) ||
            !parse_double(line.substr(comma + 1), p.value))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": non-numeric field");
        points.push_back(p);
    }
    return points;
}

FieldSpec field_spec_from_config(const KeyValueConfig& cfg) {
    std::string kind = cfg.get_string("field.kind", "cosine_sum");
    FieldSpec spec = [&] {
        if (kind == "cosine_sum") {
            double a0 = cfg.get_double("field.a0", 500.0);
            double f = cfg.get_double("field.f", 5.0);
            double period = cfg.get_double("field.envelope_period", 24.0);
            if (cfg.has("field.amp")) {
                return FieldSpec::cosine_sum_explicit(
                    a0, f, cfg.get_double_list("field.amp"), period);
            }
            int harmonics =
                static_cast<int>(cfg.get_int("field.harmonics", 5));
            double amp_scale = cfg.get_double("field.amp_scale", 10.0);
            return FieldSpec::cosine_sum(a0, f, harmonics, amp_scale, period);
        }
        if (kind == "user_table") {
            return FieldSpec::user_table(
                load_field_table(cfg.get_string("field.table")));
        }
        throw ConfigError("unknown field.kind '" + kind + "'");
    }();
    if (cfg.has("field.bound"))
        spec.set_declared_bound(cfg.get_double("field.bound"));
    if (cfg.has("field.lipschitz"))
        spec.set_declared_lipschitz(cfg.get_double("field.lipschitz"));
    return spec;
}

} // namespace fieldcdf
