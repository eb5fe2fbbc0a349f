#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "adic/errors.hpp"
#include "adic/numeric.hpp"

namespace adic::modarith {

// Exact prime factorization as prime -> exponent. Empty map encodes 1.
struct Factorization {
    std::map<Int, unsigned> prime_powers;

    Int value() const {
        Int v = 1;
        for (const auto& [p, e] : prime_powers) v *= pow_int(p, e);
        return v;
    }

    // Factorization of value()^k (exponent scaling); avoids refactoring large powers.
    Factorization pow(unsigned k) const {
        Factorization out;
        if (k == 0) return out;
        for (const auto& [p, e] : prime_powers) out.prime_powers[p] = e * k;
        return out;
    }

    bool operator==(const Factorization&) const = default;
};

inline Int gcd(const Int& a, const Int& b) {
    return boost::multiprecision::gcd(abs(a), abs(b));
}

// Trial division. Inputs here are desk scale (grid bases, totients); the cap
// keeps the operation total instead of silently spinning on huge input.
inline Factorization factorize(const Int& x) {
    if (x < 1) throw PreconditionError("factorize: argument must be >= 1, got " + x.str());
    static const Int cap = Int(1000000000000LL); // sqrt fits a million trial divisions
    if (x > cap) throw PreconditionError("factorize: argument above trial-division cap 10^12");
    Factorization f;
    Int rest = x;
    auto strip = [&](const Int& p) {
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (e > 0) f.prime_powers[p] = e;
    };
    strip(2);
    strip(3);
    for (Int d = 5; d * d <= rest; d += 6) {
        strip(d);
        strip(d + 2);
    }
    if (rest > 1) f.prime_powers[rest] = 1;
    return f;
}

inline Int totient(const Factorization& f) {
    Int phi = 1;
    for (const auto& [p, e] : f.prime_powers) phi *= pow_int(p, e - 1) * (p - 1);
    return phi;
}

inline Int totient(const Int& x) { return totient(factorize(x)); }

// base^exp mod modulus by square-and-multiply; result in [0, modulus).
inline Int modpow(Int base, Int exp, const Int& modulus) {
    if (modulus < 2) throw PreconditionError("modpow: modulus must be >= 2, got " + modulus.str());
    if (exp < 0) throw PreconditionError("modpow: negative exponent");
    base %= modulus;
    if (base < 0) base += modulus;
    Int acc = 1;
    while (exp > 0) {
        if (boost::multiprecision::bit_test(exp, 0)) acc = acc * base % modulus;
        base = base * base % modulus;
        exp >>= 1;
    }
    return acc;
}

// Least e >= 1 with x^e == 1 mod modulus, by peeling primes from a factored
// multiple of the order supplied by the caller. A violated precondition
// (bound not actually a multiple) is reported, never turned into a wrong answer.
inline Int multiplicative_order(Int x, const Int& modulus, const Factorization& exponent_bound) {
    if (modulus < 2) throw PreconditionError("multiplicative_order: modulus must be >= 2");
    x %= modulus;
    if (x < 0) x += modulus;
    if (gcd(x, modulus) != 1)
        throw PreconditionError("multiplicative_order: base not coprime to modulus");
    const Int bound = exponent_bound.value();
    if (modpow(x, bound, modulus) != 1)
        throw PreconditionError(
            "multiplicative_order: x^E != 1 mod M for the supplied bound E = " + bound.str());
    Int order = bound;
    for (const auto& [p, e] : exponent_bound.prime_powers) {
        (void)e;
        while (order % p == 0 && modpow(x, order / p, modulus) == 1) order /= p;
    }
    return order;
}

// Independent oracle: successive multiplication until 1 recurs. Only for
// moduli small enough to iterate; the cap is an explicit failure, not a guess.
inline Int order_bruteforce(Int x, const Int& modulus, const Int& modulus_cap = Int(1000000)) {
    if (modulus < 2) throw PreconditionError("order_bruteforce: modulus must be >= 2");
    if (modulus > modulus_cap)
        throw PreconditionError("order_bruteforce: modulus " + modulus.str() +
                                " above iteration cap " + modulus_cap.str());
    x %= modulus;
    if (x < 0) x += modulus;
    if (gcd(x, modulus) != 1)
        throw PreconditionError("order_bruteforce: base not coprime to modulus");
    // Products stay below 2^64 whenever the modulus fits 32 bits, which the
    // default cap guarantees.
    if (modulus <= Int(0xffffffffULL)) {
        const std::uint64_t m = modulus.convert_to<std::uint64_t>();
        const std::uint64_t x0 = x.convert_to<std::uint64_t>();
        std::uint64_t acc = x0;
        Int e = 1;
        while (acc != 1) {
            acc = acc * x0 % m;
            ++e;
        }
        return e;
    }
    Int acc = x, e = 1;
    while (acc != 1) {
        acc = acc * x % modulus;
        ++e;
    }
    return e;
}

} // namespace adic::modarith
