#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fieldcdf {

// Error for malformed config text or bad lookups.  `line` is 1-based and
// 0 when the error is not tied to a specific line (e.g. a missing key).
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& msg, int line_no = 0)
        : std::runtime_error(msg), line(line_no) {}
    int line;
};

// Flat key=value configuration.
//
// Format: one `key = value` per line; `#` starts a comment; blank lines
// are skipped; an optional `[section]` header prefixes subsequent keys
// with `section.`.  Values may be quoted strings, bare scalars, or
// comma-separated lists of scalars.  Later assignments to the same key
// win, which is also how command-line overrides are applied.
class KeyValueConfig {
  public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_string(const std::string& text,
                                       const std::string& origin = "<string>");

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<std::int64_t> get_int_list(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value);

    // Applies a `KEY=VALUE` override string (the --override flag).
    void apply_override(const std::string& assignment);

    // Key/value pairs in key order, for echoing the effective
    // configuration into output files.
    const std::map<std::string, std::string>& entries() const {
        return entries_;
    }

  private:
    std::string require(const std::string& key) const;
    std::map<std::string, std::string> entries_;
    std::string origin_ = "<config>";
};

} // namespace fieldcdf
