#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "adic/errors.hpp"

namespace adic {

// Arbitrary precision throughout: moduli like m^t blow past 64 bits almost
// immediately (30^13 already does), and all interval arithmetic is exact.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// High-precision binary float, digit count fixed per instantiation.
template <unsigned Digits>
using BinFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;

using Real50 = BinFloat<50>;
using Real100 = BinFloat<100>;
using Real200 = BinFloat<200>;

inline Int pow_int(const Int& base, unsigned long exp) {
    return boost::multiprecision::pow(base, exp);
}

inline Int num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return den(q) == 1; }

// Exact rational power with integer exponent of either sign.
inline Rational pow_rational(const Rational& base, long exp) {
    if (exp == 0) return Rational(1);
    if (base == 0) throw PreconditionError("pow_rational: zero base with nonzero exponent");
    const unsigned long e = exp < 0 ? static_cast<unsigned long>(-exp) : static_cast<unsigned long>(exp);
    Rational r(pow_int(num(base), e), pow_int(den(base), e));
    if (exp < 0) r = Rational(1) / r;
    return r;
}

template <class Real>
Real to_real(const Rational& q) {
    return Real(q);
}

template <class Real>
Real to_real(const Int& x) {
    return Real(x);
}

// Fits-in-int64 probe, used when serializing bignums as JSON numbers.
inline bool fits_int64(const Int& x) {
    static const Int lo = Int(std::numeric_limits<long long>::min());
    static const Int hi = Int(std::numeric_limits<long long>::max());
    return x >= lo && x <= hi;
}

} // namespace adic
