#include "fieldcdf/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "fieldcdf/error_bounds.hpp"
#include "fieldcdf/numeric.hpp"

namespace fieldcdf {

namespace {

// Shared reader: metadata lines, a fixed header, then data rows handed to
// the caller.
class CsvReader {
  public:
    CsvReader(const std::string& path, const std::string& expected_header)
        : path_(path), in_(path) {
        if (!in_) throw ParseError("cannot open file: " + path);
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (line[0] == '#') {
                meta_line(line);
                continue;
            }
            if (line != expected_header)
                throw ParseError(path + ":" + std::to_string(line_no_) +
                                     ": expected header '" + expected_header +
                                     "'",
                                 line_no_);
            return;  // header consumed, rows follow
        }
        throw ParseError(path + ": missing header '" + expected_header + "'");
    }

    // False at end of input; fields are split on commas.
    bool next_row(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (line[0] == '#') continue;  // stray comments are skipped
            fields.clear();
            std::string item;
            std::istringstream row(line);
            while (std::getline(row, item, ',')) fields.push_back(item);
            if (!line.empty() && line.back() == ',') fields.push_back("");
            return true;
        }
        return false;
    }

    int line() const { return line_no_; }
    const DatasetMetadata& metadata() const { return metadata_; }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(path_ + ":" + std::to_string(line_no_) + ": " + what,
                         line_no_);
    }

  private:
    void meta_line(const std::string& line) {
        // `# key: value`; malformed comment lines are plain comments.
        std::size_t start = line.find_first_not_of(" \t", 1);
        if (start == std::string::npos) return;
        std::size_t colon = line.find(':', start);
        if (colon == std::string::npos) return;
        std::string key = line.substr(start, colon - start);
        std::size_t vstart = line.find_first_not_of(" \t", colon + 1);
        std::string value =
            vstart == std::string::npos ? "" : line.substr(vstart);
        metadata_.entries.emplace_back(key, value);
    }

    std::string path_;
    std::ifstream in_;
    int line_no_ = 0;
    DatasetMetadata metadata_;
};

void write_metadata(std::ofstream& out, const DatasetMetadata& meta) {
    for (const auto& [key, value] : meta.entries)
        out << "# " << key << ": " << value << '\n';
}

void atomic_finish(std::ofstream& out, const std::string& tmp,
                   const std::string& path) {
    if (!out) throw std::runtime_error("failed writing output file: " + tmp);
    out.close();
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move output into place: " + path);
}

} // namespace

bool DatasetMetadata::has(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return true;
    return false;
}

std::string DatasetMetadata::get(const std::string& key,
                                 const std::string& fallback) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return fallback;
}

double DatasetMetadata::get_double(const std::string& key) const {
    double v;
    if (parse_double(get(key, ""), v)) return v;
    return std::numeric_limits<double>::quiet_NaN();
}

void DatasetMetadata::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries.emplace_back(key, value);
}

TrialSet load_trials(const std::string& path) {
    CsvReader reader(path, "trial_id,sample_index,value");
    TrialSet set;
    set.metadata = reader.metadata();
    double range_min = set.metadata.get_double("range_min");
    double range_max = set.metadata.get_double("range_max");
    bool has_range = !std::isnan(range_min) && !std::isnan(range_max);

    std::unordered_set<std::int64_t> seen;
    std::vector<std::string> fields;
    while (reader.next_row(fields)) {
        if (fields.size() != 3)
            reader.fail("expected trial_id,sample_index,value");
        std::int64_t trial_id;
        std::int64_t index;
        double value;
        if (!parse_i64(fields[0], trial_id)) reader.fail("bad trial_id");
        if (!parse_i64(fields[1], index)) reader.fail("bad sample_index");
        if (!parse_double(fields[2], value) || !std::isfinite(value))
            reader.fail("bad value");

        if (set.trials.empty() || set.trials.back().trial_id != trial_id) {
            if (!seen.insert(trial_id).second)
                reader.fail("trial " + std::to_string(trial_id) +
                            " appears in two separate blocks");
            if (index != 1)
                reader.fail("trial " + std::to_string(trial_id) +
                            " must start at sample_index 1");
            TrialRecord record;
            record.trial_id = trial_id;
            set.trials.push_back(std::move(record));
        } else if (index != set.trials.back().sample_count + 1) {
            reader.fail("sample_index must increase by 1 within a trial");
        }
        if (has_range && (value < range_min || value > range_max))
            set.warnings.push_back(
                path + ":" + std::to_string(reader.line()) + ": value " +
                format_double(value) + " outside device range [" +
                format_double(range_min) + ", " + format_double(range_max) +
                "]");
        set.trials.back().values.push_back(value);
        set.trials.back().sample_count += 1;
    }
    return set;
}

void save_trials(const TrialSet& set, const std::string& path) {
    std::string tmp = path + ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp);
    write_metadata(out, set.metadata);
    out << "trial_id,sample_index,value\n";
    for (const TrialRecord& trial : set.trials) {
        for (std::int64_t j = 0; j < trial.sample_count; ++j)
            out << trial.trial_id << ',' << (j + 1) << ','
                << format_double(trial.values[static_cast<std::size_t>(j)])
                << '\n';
    }
    atomic_finish(out, tmp, path);
}

const ReferenceEntry* ReferenceSet::find(
    const std::string& location_id) const {
    for (const ReferenceEntry& entry : entries)
        if (entry.location_id == location_id) return &entry;
    return nullptr;
}

ReferenceSet load_reference(const std::string& path) {
    CsvReader reader(path, "location_id,s,value");
    ReferenceSet set;
    set.metadata = reader.metadata();
    std::vector<std::string> fields;
    while (reader.next_row(fields)) {
        if (fields.size() != 3) reader.fail("expected location_id,s,value");
        const std::string& id = fields[0];
        if (id.empty()) reader.fail("empty location_id");
        DecimalValue s;
        try {
            s = DecimalValue::parse(fields[1]);
        } catch (const std::invalid_argument&) {
            reader.fail("bad s value");
        }
        if (!(s.value >= 0.0 && s.value <= 1.0))
            reader.fail("s must lie in [0,1], got " + fields[1]);
        double value;
        if (!parse_double(fields[2], value) || !std::isfinite(value))
            reader.fail("bad value");

        auto it = std::find_if(
            set.entries.begin(), set.entries.end(),
            [&](const ReferenceEntry& e) { return e.location_id == id; });
        if (it == set.entries.end()) {
            set.entries.push_back(ReferenceEntry{id, s, {}});
            it = set.entries.end() - 1;
        } else if (it->s.value != s.value) {
            reader.fail("location " + id + " listed with two different s");
        }
        it->samples.push_back(value);
    }
    return set;
}

void save_reference(const ReferenceSet& set, const std::string& path) {
    std::string tmp = path + ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp);
    write_metadata(out, set.metadata);
    out << "location_id,s,value\n";
    for (const ReferenceEntry& entry : set.entries) {
        if (entry.samples.empty())
            throw std::invalid_argument("location " + entry.location_id +
                                        " has no samples");
        for (double v : entry.samples)
            out << entry.location_id << ',' << format_double(entry.s.value)
                << ',' << format_double(v) << '\n';
    }
    atomic_finish(out, tmp, path);
}

ComparisonReport compare_mobile_vs_fixed(const TrialSet& trials,
                                         const ReferenceSet& ref,
                                         const std::string& location_id,
                                         double delta,
                                         std::int64_t grid_size) {
    const ReferenceEntry* entry = ref.find(location_id);
    if (!entry)
        throw std::invalid_argument("unknown location_id '" + location_id +
                                    "'");
    if (entry->samples.empty())
        throw std::invalid_argument("location " + location_id +
                                    " has no samples");
    if (trials.trials.empty())
        throw std::invalid_argument("trial set is empty");

    std::vector<double> estimated;
    estimated.reserve(trials.trials.size());
    for (const TrialRecord& trial : trials.trials) {
        TrialView view = estimator_view(trial);
        estimated.push_back(estimate_field_at(view, entry->s));
    }
    EmpiricalCdf est(std::move(estimated));
    EmpiricalCdf fixed(entry->samples);
    std::vector<double> grid = make_metric_grid(est, fixed, grid_size);
    double avg = avg_pointwise_diff(est, fixed, grid);
    double mx = max_pointwise_diff(est, fixed);
    return ComparisonReport{location_id,
                            entry->s.value,
                            est.count(),
                            fixed.count(),
                            avg,
                            mx,
                            dkw_epsilon(static_cast<double>(est.count()), delta),
                            dkw_epsilon(static_cast<double>(fixed.count()), delta),
                            std::move(est),
                            std::move(fixed)};
}

void save_comparison_csv(const std::vector<ComparisonReport>& reports,
                         double delta, std::int64_t grid_size,
                         const std::string& path) {
    std::string tmp = path + ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp);
    out << "# delta = " << format_double(delta) << '\n';
    out << "# metric_grid = " << grid_size << '\n';
    out << "location_id,s,trials,ref_samples,avg_diff,max_diff,dkw_mobile,"
           "dkw_fixed\n";
    for (const ComparisonReport& r : reports) {
        out << r.location_id << ',' << format_double(r.s) << ','
            << r.trial_count << ',' << r.ref_count << ','
            << format_double(r.avg_diff) << ',' << format_double(r.max_diff)
            << ',' << format_double(r.dkw_mobile) << ','
            << format_double(r.dkw_fixed) << '\n';
    }
    atomic_finish(out, tmp, path);
}

} // namespace fieldcdf
