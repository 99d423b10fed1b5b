#include "fieldcdf/kv_config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "fieldcdf/numeric.hpp"

namespace fieldcdf {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Strips a trailing # comment, honouring double-quoted spans.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        else if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
    return v;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) parts.push_back(trim(item));
    if (!v.empty() && v.back() == ',') parts.push_back("");
    return parts;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
            c != '.' && c != '-')
            return false;
    }
    return true;
}

} // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_string(text.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text,
                                            const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                      ": unterminated section header",
                                  line_no);
            section = trim(body.substr(1, body.size() - 2));
            if (!valid_key(section))
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                      ": invalid section name",
                                  line_no);
            continue;
        }
        std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": expected key = value",
                              line_no);
        std::string key = trim(body.substr(0, eq));
        std::string value = unquote(trim(body.substr(eq + 1)));
        if (!valid_key(key))
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": invalid key '" + key + "'",
                              line_no);
        if (!section.empty()) key = section + "." + key;
        cfg.entries_[key] = value;
    }
    return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
    return entries_.count(key) != 0;
}

std::string KeyValueConfig::require(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(origin_ + ": missing required key '" + key + "'");
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
    return require(key);
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
    double v;
    std::string raw = require(key);
    if (!parse_double(raw, v))
        throw ConfigError(origin_ + ": key '" + key + "' is not a number: '" +
                          raw + "'");
    return v;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
    std::int64_t v;
    std::string raw = require(key);
    if (!parse_i64(raw, v))
        throw ConfigError(origin_ + ": key '" + key +
                          "' is not an integer: '" + raw + "'");
    return v;
}

std::int64_t KeyValueConfig::get_int(const std::string& key,
                                     std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key) const {
    std::string raw = require(key);
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    throw ConfigError(origin_ + ": key '" + key + "' is not a boolean: '" +
                      raw + "'");
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : split_list(require(key))) {
        double v;
        if (!parse_double(item, v))
            throw ConfigError(origin_ + ": key '" + key +
                              "' has a non-numeric list item: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::int64_t> KeyValueConfig::get_int_list(
    const std::string& key) const {
    std::vector<std::int64_t> out;
    for (const std::string& item : split_list(require(key))) {
        std::int64_t v;
        if (!parse_i64(item, v))
            throw ConfigError(origin_ + ": key '" + key +
                              "' has a non-integer list item: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> KeyValueConfig::get_string_list(
    const std::string& key) const {
    return split_list(require(key));
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    if (!valid_key(key))
        throw ConfigError("invalid key '" + key + "'");
    entries_[key] = value;
}

void KeyValueConfig::apply_override(const std::string& assignment) {
    std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like KEY=VALUE, got '" +
                          assignment + "'");
    std::string key = trim(assignment.substr(0, eq));
    std::string value = unquote(trim(assignment.substr(eq + 1)));
    set(key, value);
}

} // namespace fieldcdf
