#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace tsb {

// exact conversion; doubles are dyadic rationals
inline mpq_class rational_of(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("rational_of: non-finite value");
    return mpq_class(v);
}

// nearest multiple of 10^-digits, ties away from zero
inline mpq_class round_decimal(double v, int digits) {
    if (!std::isfinite(v)) throw std::invalid_argument("round_decimal: non-finite value");
    mpz_class den = 1;
    for (int i = 0; i < digits; ++i) den *= 10;
    const double scaled = v * std::pow(10.0, digits);
    if (std::abs(scaled) >= 9.0e15) throw std::invalid_argument("round_decimal: value too large");
    mpq_class q(static_cast<long>(std::llround(scaled)), 1);
    q /= mpq_class(den);
    q.canonicalize();
    return q;
}

inline double to_double(const mpq_class& q) { return q.get_d(); }

// smallest multiple of 10^-digits that is >= q, as a decimal string
inline std::string ceil_decimal_string(const mpq_class& q, int digits) {
    mpz_class pow10 = 1;
    for (int i = 0; i < digits; ++i) pow10 *= 10;
    mpq_class scaled = q * mpq_class(pow10);
    mpz_class units;
    mpz_cdiv_q(units.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
    const bool negative = units < 0;
    mpz_class mag = abs(units);
    std::string body = mag.get_str();
    if (static_cast<int>(body.size()) <= digits) body.insert(0, digits + 1 - body.size(), '0');
    body.insert(body.size() - digits, ".");
    return (negative ? "-" : "") + body;
}

inline std::string rational_string(const mpq_class& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

} // namespace tsb
