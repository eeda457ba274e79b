#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

namespace madc {

using Rational = boost::rational<std::int64_t>;

/// Decimal rendering truncated (not rounded) to `digits` places, so 2/7 prints
/// as "0.28" the way load tables are usually quoted.
inline std::string to_decimal(const Rational& r, int digits) {
    std::int64_t num = r.numerator();
    const std::int64_t den = r.denominator();
    std::string out;
    if (num < 0) {
        out += '-';
        num = -num;
    }
    out += std::to_string(num / den);
    std::int64_t rem = num % den;
    if (digits > 0) out += '.';
    for (int i = 0; i < digits; ++i) {
        rem *= 10;
        out += static_cast<char>('0' + rem / den);
        rem %= den;
    }
    return out;
}

inline std::string to_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline nlohmann::json rational_json(const Rational& r) {
    return {{"num", r.numerator()}, {"den", r.denominator()}, {"decimal", to_decimal(r, 6)}};
}

}  // namespace madc
