#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace fieldcdf {

// Neumaier-compensated accumulator.  Running sums of many small positive
// steps drift upward under plain double addition (the drift is enough to
// push a sum of n copies of 1/n past 1.0 for many n), and the stopping
// rule in the sampler compares such sums against 1.0 exactly.  The
// compensation term keeps the result faithfully rounded.
class CompensatedSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Shortest decimal string that round-trips to exactly the same double.
// All file output goes through this so that identical runs produce
// byte-identical files regardless of locale or printf quirks.
inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

// Strict full-field parses; the error message is left to the caller, who
// knows the file/line context.
inline bool parse_double(std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline bool parse_i64(std::string_view text, std::int64_t& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline bool parse_u64(std::string_view text, std::uint64_t& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

// A scalar that remembers its exact decimal origin when it has one.
// Index arithmetic like floor((M-1)*s) must not miss an exact integer
// because 0.3 is not representable; values parsed from config text keep
// num/den alongside the rounded double so that path stays exact.
struct DecimalValue {
    double value = 0.0;
    bool exact = false;
    std::int64_t num = 0;
    std::int64_t den = 1;

    static DecimalValue from_double(double v) {
        return DecimalValue{v, false, 0, 1};
    }

    static DecimalValue from_fraction(std::int64_t num, std::int64_t den) {
        if (den <= 0) throw std::invalid_argument("denominator must be > 0");
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g == 0) g = 1;
        return DecimalValue{static_cast<double>(num) / static_cast<double>(den),
                            true, num / g, den / g};
    }

    // Parses plain decimal literals ([+-]digits[.digits]).  Anything else
    // (scientific notation, inf) falls back to double-only.
    static DecimalValue parse(std::string_view text) {
        DecimalValue out;
        if (!parse_double(text, out.value))
            throw std::invalid_argument("not a number: '" + std::string(text) +
                                        "'");
        std::size_t i = 0;
        bool neg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            neg = text[i] == '-';
            ++i;
        }
        std::int64_t num = 0;
        std::int64_t den = 1;
        bool any_digit = false;
        bool seen_dot = false;
        for (; i < text.size(); ++i) {
            char ch = text[i];
            if (ch == '.') {
                if (seen_dot) return out;
                seen_dot = true;
                continue;
            }
            if (ch < '0' || ch > '9') return out;  // not a plain decimal
            any_digit = true;
            if (num > (INT64_MAX - 9) / 10 || (seen_dot && den > INT64_MAX / 10))
                return out;  // too many digits to keep exactly
            num = num * 10 + (ch - '0');
            if (seen_dot) den *= 10;
        }
        if (!any_digit) return out;
        std::int64_t g = std::gcd(num, den);
        out.num = (neg ? -num : num) / g;
        out.den = den / g;
        out.exact = true;
        return out;
    }
};

} // namespace fieldcdf
