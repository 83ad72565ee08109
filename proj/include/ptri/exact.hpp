#pragma once

// Exact rational helpers shared by the input layer and the oracle.

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

#include "ptri/errors.hpp"

namespace ptri {

using Rational = mpq_class;

/// num/den in canonical form (GMP's two-argument constructor does not reduce).
inline Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p/q", an integer, or a decimal such as "-0.125" or "3e-2" exactly.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw ValidationError("not a rational or decimal literal: \"" + std::string(text) + "\"");
    };
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) return fail();

    auto is_int = [](std::string_view s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    auto to_mpz = [](std::string_view s) {
        if (!s.empty() && s[0] == '+') s.remove_prefix(1);
        return mpz_class(std::string(s), 10);
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return fail();
        mpz_class d = to_mpz(den);
        if (d == 0) throw ValidationError("zero denominator in \"" + std::string(text) + "\"");
        Rational r(to_mpz(num), d);
        r.canonicalize();
        return r;
    }

    // [sign] digits [. digits] [(e|E) [sign] digits]
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '-' || text[i] == '+') negative = text[i++] == '-';
    std::string digits;
    long long exponent = 0;
    bool any_digit = false;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, any_digit = true)
        digits.push_back(text[i]);
    if (i < text.size() && text[i] == '.') {
        for (++i; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, any_digit = true) {
            digits.push_back(text[i]);
            --exponent;
        }
    }
    if (!any_digit) return fail();
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        auto rest = text.substr(i + 1);
        if (!is_int(rest)) return fail();
        if (rest[0] == '+') rest.remove_prefix(1);
        long long e = 0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), e);
        if (ec != std::errc{} || e > 4000 || e < -4000) return fail();
        exponent += e;
        i = text.size();
    }
    if (i != text.size()) return fail();

    mpz_class mantissa(digits, 10);
    if (negative) mantissa = -mantissa;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational r = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
    r.canonicalize();
    return r;
}

/// The decimal a double was written from: shortest round-trip digits, read exactly.
/// 0.2 maps to 1/5 rather than to the binary value of the double.
inline Rational exact_decimal(double x) {
    if (!std::isfinite(x)) throw ValidationError("non-finite number");
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw ValidationError("cannot format number");
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(end - buf)));
}

/// Nearest double to r (round half to even).
inline double to_double(const Rational& r) {
    if (sgn(r) == 0) return 0.0;
    mpz_class num = abs(r.get_num());
    const mpz_class& den = r.get_den();
    // Pick e so that num / den / 2^e lies in [2^53, 2^54): 54 bits plus a sticky remainder.
    long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
             static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 54;
    mpz_class q, rem;
    auto scaled = [&](long shift) {
        mpz_class n = num, d = den;
        if (shift >= 0)
            d <<= static_cast<mp_bitcnt_t>(shift);
        else
            n <<= static_cast<mp_bitcnt_t>(-shift);
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    };
    scaled(e);
    while (mpz_sizeinbase(q.get_mpz_t(), 2) < 54) scaled(--e);
    while (mpz_sizeinbase(q.get_mpz_t(), 2) > 54) scaled(++e);
    // Subnormal range: keep fewer bits so ldexp is exact.
    const long min_exp = -1074 - 1;
    if (e < min_exp) {
        e = min_exp;
        scaled(e);
    }
    const bool half = mpz_odd_p(q.get_mpz_t()) != 0;
    const bool sticky = rem != 0;
    mpz_class mant = q >> 1;
    if (half && (sticky || mpz_odd_p(mant.get_mpz_t()))) ++mant;
    double result = std::ldexp(mant.get_d(), static_cast<int>(e + 1));
    return sgn(r) < 0 ? -result : result;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }

}  // namespace ptri
