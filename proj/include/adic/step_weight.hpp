#pragma once

#include <utility>
#include <vector>

#include "adic/errors.hpp"
#include "adic/intervals.hpp"
#include "adic/numeric.hpp"

namespace adic::weights {

// Piecewise-constant positive function on [0,1) with exact rational
// breakpoints 0 = x_0 < x_1 < ... < x_K = 1 and value values[i] on
// [x_i, x_{i+1}).
class StepWeight {
public:
    StepWeight(std::vector<Rational> breakpoints, std::vector<Rational> values)
        : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
        if (values_.empty()) throw PreconditionError("StepWeight: needs at least one piece");
        if (breakpoints_.size() != values_.size() + 1)
            throw PreconditionError("StepWeight: breakpoint/value count mismatch");
        if (breakpoints_.front() != 0 || breakpoints_.back() != 1)
            throw PreconditionError("StepWeight: breakpoints must span [0, 1]");
        for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
            if (!(breakpoints_[i] < breakpoints_[i + 1]))
                throw PreconditionError("StepWeight: breakpoints must be strictly ascending");
        for (const Rational& v : values_)
            if (!(v > 0)) throw PreconditionError("StepWeight: values must be positive");
    }

    const std::vector<Rational>& breakpoints() const { return breakpoints_; }
    const std::vector<Rational>& values() const { return values_; }
    std::size_t piece_count() const { return values_.size(); }

    Rational value_at(const Rational& x) const {
        if (x < 0 || x >= 1) throw PreconditionError("StepWeight: point outside [0, 1)");
        std::size_t i = 0;
        while (i + 1 < values_.size() && x >= breakpoints_[i + 1]) ++i;
        return values_[i];
    }

private:
    std::vector<Rational> breakpoints_;
    std::vector<Rational> values_;
};

inline StepWeight scale(const StepWeight& w, const Rational& c) {
    if (!(c > 0)) throw PreconditionError("scale: factor must be positive");
    std::vector<Rational> values = w.values();
    for (Rational& v : values) v *= c;
    return StepWeight(w.breakpoints(), std::move(values));
}

inline StepWeight shift_values(const StepWeight& w, const Rational& c) {
    std::vector<Rational> values = w.values();
    for (Rational& v : values) v += c;
    return StepWeight(w.breakpoints(), std::move(values));
}

// Parameters of the paired-value family: (a/q)^alpha on the left half H of
// the host interval, (b/q)^alpha on the right half G, 1 outside.
struct ModuleFamilyParams {
    Rational a;
    Rational b;
    int q = 2;
    int alpha = 1;
    AdicInterval host;
};

inline void validate(const ModuleFamilyParams& p) {
    if (!(p.a > 0 && p.a < 1)) throw PreconditionError("module params: need 0 < a < 1");
    if (!(p.b > 1)) throw PreconditionError("module params: need b > 1");
    if (p.q < 2) throw PreconditionError("module params: need q >= 2");
    if (p.alpha < 1) throw PreconditionError("module params: need alpha >= 1");
}

inline StepWeight module_pair_weight(const ModuleFamilyParams& p) {
    validate(p);
    const Rational lo = p.host.lower();
    const Rational hi = p.host.upper();
    const Rational mid = (lo + hi) / 2;
    const Rational left_value = pow_rational(p.a / p.q, p.alpha);
    const Rational right_value = pow_rational(p.b / p.q, p.alpha);

    std::vector<Rational> breakpoints;
    std::vector<Rational> values;
    if (lo > 0) {
        breakpoints.push_back(Rational(0));
        values.push_back(Rational(1));
    }
    breakpoints.push_back(lo);
    values.push_back(left_value);
    breakpoints.push_back(mid);
    values.push_back(right_value);
    breakpoints.push_back(hi);
    if (hi < 1) {
        values.push_back(Rational(1));
        breakpoints.push_back(Rational(1));
    }
    return StepWeight(std::move(breakpoints), std::move(values));
}

} // namespace adic::weights
