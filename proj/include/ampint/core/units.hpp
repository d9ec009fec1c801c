#pragma once

// Parsing of quantities with unit suffixes: "63ns", "1.5 us", "2pi", "500MHz".
// A bare number is taken in SI base units (seconds, radians, hertz).

#include <cctype>
#include <charconv>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include "ampint/core/error.hpp"

namespace ampint::units {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Splits "12.5ns" into (12.5, "ns"). Throws if no leading number is present.
inline std::pair<double, std::string_view> split_number(std::string_view text) {
    auto s = trim(text);
    if (s.empty()) throw ValidationError("", "empty quantity");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc()) {
        // "pi" alone is allowed for angles
        return {1.0, s};
    }
    auto rest = trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)));
    return {value, rest};
}

} // namespace detail

inline double parse_time(std::string_view text) {
    auto [v, unit] = detail::split_number(text);
    if (unit.empty() || unit == "s") return v;
    if (unit == "ms") return v * 1e-3;
    if (unit == "us" || unit == "µs") return v * 1e-6;
    if (unit == "ns") return v * 1e-9;
    if (unit == "ps") return v * 1e-12;
    throw ValidationError("", "unknown time unit '" + std::string(unit) + "' in '" + std::string(text) + "'");
}

inline double parse_frequency(std::string_view text) {
    auto [v, unit] = detail::split_number(text);
    if (unit.empty() || unit == "Hz") return v;
    if (unit == "kHz") return v * 1e3;
    if (unit == "MHz") return v * 1e6;
    if (unit == "GHz") return v * 1e9;
    throw ValidationError("", "unknown frequency unit '" + std::string(unit) + "' in '" + std::string(text) + "'");
}

inline double parse_angle(std::string_view text) {
    auto [v, unit] = detail::split_number(text);
    if (unit.empty() || unit == "rad") return v;
    if (unit == "pi") return v * std::numbers::pi;
    if (unit == "deg") return v * std::numbers::pi / 180.0;
    throw ValidationError("", "unknown angle unit '" + std::string(unit) + "' in '" + std::string(text) + "'");
}

inline double parse_plain(std::string_view text) {
    auto [v, unit] = detail::split_number(text);
    if (!unit.empty()) throw ValidationError("", "unexpected unit '" + std::string(unit) + "' in '" + std::string(text) + "'");
    return v;
}

} // namespace ampint::units
