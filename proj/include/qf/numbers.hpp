#pragma once

#include <gmpxx.h>

#include <numeric>
#include <vector>

#include "qf/errors.hpp"

namespace qf {

using Int = mpz_class;
using Rational = mpq_class;

inline long checked_long(const Int& v) {
    if (!v.fits_slong_p()) throw Error("Overflow", "value does not fit in a machine long");
    return v.get_si();
}

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// base^e for signed e; e < 0 requires base != 0.
inline Rational rat_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    Rational b = base;
    if (e < 0) {
        if (b == 0) throw ZeroInput("0 has no negative power");
        b = Rational(1) / b;
        e = -e;
    }
    Rational acc(1);
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

inline long mod_reduce(long k, long m) {
    long r = k % m;
    return r < 0 ? r + m : r;
}

inline long gcd_long(long a, long b) { return std::gcd(a, b); }
inline long lcm_long(long a, long b) { return std::lcm(a, b); }

} // namespace qf
