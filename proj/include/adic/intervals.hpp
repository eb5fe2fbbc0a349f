#pragma once

#include <string>
#include <vector>

#include "adic/errors.hpp"
#include "adic/numeric.hpp"

namespace adic::weights {

// [index/base^g, (index+1)/base^g), a cell of the base-adic tree on [0,1).
struct AdicInterval {
    int base = 2;
    int generation = 0;
    Int index;

    AdicInterval(int base_, int generation_, Int index_)
        : base(base_), generation(generation_), index(std::move(index_)) {
        if (base < 2) throw PreconditionError("AdicInterval: base must be >= 2");
        if (generation < 0) throw PreconditionError("AdicInterval: generation must be >= 0");
        const Int cells = pow_int(Int(base), static_cast<unsigned long>(generation));
        if (index < 0 || index >= cells)
            throw PreconditionError("AdicInterval: index " + index.str() + " outside [0, " +
                                    cells.str() + ")");
    }

    Rational lower() const {
        return Rational(index, pow_int(Int(base), static_cast<unsigned long>(generation)));
    }
    Rational upper() const {
        return Rational(index + 1, pow_int(Int(base), static_cast<unsigned long>(generation)));
    }
    Rational length() const {
        return Rational(1, pow_int(Int(base), static_cast<unsigned long>(generation)));
    }

    bool operator==(const AdicInterval&) const = default;
};

// The `base` children at generation g+1, indices base*index .. base*index+base-1.
inline std::vector<AdicInterval> adic_children(const AdicInterval& interval) {
    std::vector<AdicInterval> out;
    out.reserve(static_cast<std::size_t>(interval.base));
    const Int first = interval.index * interval.base;
    for (int c = 0; c < interval.base; ++c)
        out.emplace_back(interval.base, interval.generation + 1, first + c);
    return out;
}

// Half-open interval [lo, hi) with rational endpoints.
struct RatInterval {
    Rational lo;
    Rational hi;

    RatInterval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {}
    explicit RatInterval(const AdicInterval& a) : lo(a.lower()), hi(a.upper()) {}

    Rational length() const { return hi - lo; }
};

} // namespace adic::weights
