#pragma once

// Exact rational helpers shared by the counting and bound modules.

#include <boost/rational.hpp>

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace grokforge {

using Ratio = boost::rational<std::int64_t>;

inline double to_double(const Ratio& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Ratio& r) {
    if (r.denominator() == 1) {
        return std::to_string(r.numerator());
    }
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace detail {

inline std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
    }
    return v;
}

}  // namespace detail

// Accepts "3", "3/4", "0.75", "-1.5". Decimals are converted exactly.
inline Ratio parse_ratio(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) {
        throw std::invalid_argument("empty rational number");
    }
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = detail::parse_int(text.substr(0, slash), whole);
        const auto den = detail::parse_int(text.substr(slash + 1), whole);
        if (den == 0) {
            throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
        }
        return Ratio(num, den);
    }
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    std::string_view int_part = text;
    std::string_view frac_part;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        int_part = text.substr(0, dot);
        frac_part = text.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) {
        throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
    }
    if (frac_part.size() > 15) {
        throw std::invalid_argument("too many decimal places in '" + std::string(whole) + "'");
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    const std::int64_t ip = int_part.empty() ? 0 : detail::parse_int(int_part, whole);
    const std::int64_t fp = frac_part.empty() ? 0 : detail::parse_int(frac_part, whole);
    if (ip < 0 || fp < 0) {
        throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
    }
    Ratio r(ip * scale + fp, scale);
    return negative ? -r : r;
}

}  // namespace grokforge
