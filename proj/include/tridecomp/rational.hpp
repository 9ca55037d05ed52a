#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tridecomp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& r) { return numerator(r); }
inline BigInt rat_den(const Rational& r) { return denominator(r); }

// Parses "3/10", "0.125" or "7" into an exact rational.
inline Rational parse_rational(std::string_view s) {
    auto bad = [&] { throw std::invalid_argument("not a rational: '" + std::string(s) + "'"); };
    if (s.empty()) bad();
    bool neg = false;
    if (s.front() == '-') { neg = true; s.remove_prefix(1); }
    else if (s.front() == '+') { s.remove_prefix(1); }
    if (s.empty()) bad();

    Rational r;
    auto slash = s.find('/');
    auto dot = s.find('.');
    auto digits_only = [&](std::string_view t) {
        if (t.empty()) return false;
        for (char c : t) if (c < '0' || c > '9') return false;
        return true;
    };
    if (slash != std::string_view::npos) {
        auto n = s.substr(0, slash), d = s.substr(slash + 1);
        if (!digits_only(n) || !digits_only(d)) bad();
        BigInt den{std::string(d)};
        if (den == 0) bad();
        r = Rational(BigInt(std::string(n)), den);
    } else if (dot != std::string_view::npos) {
        auto ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!digits_only(ip) || (!fp.empty() && !digits_only(fp))) bad();
        BigInt scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        BigInt num = BigInt(std::string(ip)) * scale + (fp.empty() ? BigInt(0) : BigInt(std::string(fp)));
        r = Rational(num, scale);
    } else {
        if (!digits_only(s)) bad();
        r = Rational(BigInt(std::string(s)));
    }
    return neg ? Rational(-r) : r;
}

inline std::string to_string(const Rational& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) s += "/" + rat_den(r).str();
    return s;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational rat_pow(const Rational& base, unsigned e) {
    Rational r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

// Largest integer <= r.
inline BigInt rat_floor(const Rational& r) {
    BigInt q = rat_num(r) / rat_den(r);
    if (r < 0 && q * rat_den(r) != rat_num(r)) --q;
    return q;
}

inline BigInt rat_ceil(const Rational& r) {
    BigInt q = rat_num(r) / rat_den(r);
    if (r > 0 && q * rat_den(r) != rat_num(r)) ++q;
    return q;
}

inline long rat_floor_long(const Rational& r) { return rat_floor(r).convert_to<long>(); }
inline long rat_ceil_long(const Rational& r) { return rat_ceil(r).convert_to<long>(); }

}  // namespace tridecomp
