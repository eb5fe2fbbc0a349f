#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adic/errors.hpp"
#include "adic/intervals.hpp"
#include "adic/numeric.hpp"
#include "adic/step_weight.hpp"

namespace adic::weights {

inline void check_subinterval(const RatInterval& I) {
    if (I.lo < 0 || I.hi > 1) throw PreconditionError("interval must lie inside [0, 1]");
    if (!(I.hi > I.lo)) throw PreconditionError("zero-length interval rejected");
}

inline Rational integral(const StepWeight& w, const RatInterval& I) {
    check_subinterval(I);
    Rational total = 0;
    const auto& bp = w.breakpoints();
    const auto& vals = w.values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const Rational lo = std::max(bp[i], I.lo);
        const Rational hi = std::min(bp[i + 1], I.hi);
        if (hi > lo) total += vals[i] * (hi - lo);
    }
    return total;
}

// (1/|I|) * integral_I w, exact.
inline Rational average(const StepWeight& w, const RatInterval& I) {
    return integral(w, I) / I.length();
}

inline Rational min_on(const StepWeight& w, const RatInterval& I) {
    check_subinterval(I);
    const auto& bp = w.breakpoints();
    const auto& vals = w.values();
    std::optional<Rational> best;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (std::min(bp[i + 1], I.hi) > std::max(bp[i], I.lo))
            if (!best || vals[i] < *best) best = vals[i];
    return *best;
}

inline Rational max_on(const StepWeight& w, const RatInterval& I) {
    check_subinterval(I);
    const auto& bp = w.breakpoints();
    const auto& vals = w.values();
    std::optional<Rational> best;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (std::min(bp[i + 1], I.hi) > std::max(bp[i], I.lo))
            if (!best || vals[i] > *best) best = vals[i];
    return *best;
}

namespace detail {

// A scan estimate: exact rational whenever the whole computation stayed in
// Q, with the rounded value alongside for mixed comparisons.
template <class Real>
struct EstValue {
    std::optional<Rational> exact;
    Real approx{};
};

template <class Real>
EstValue<Real> exact_est(Rational q) {
    EstValue<Real> e;
    e.approx = to_real<Real>(q);
    e.exact = std::move(q);
    return e;
}

template <class Real>
bool est_greater(const EstValue<Real>& a, const EstValue<Real>& b) {
    if (a.exact && b.exact) return *a.exact > *b.exact;
    return a.approx > b.approx;
}

inline std::optional<long> as_long_exponent(const Rational& r) {
    if (!is_integer(r)) return std::nullopt;
    static const Int cap = 1000000;
    const Int n = num(r);
    if (n > cap || n < -cap) return std::nullopt;
    return n.convert_to<long>();
}

// Mean of w^r over I. Exact when r is a (modest) integer.
template <class Real>
EstValue<Real> power_mean(const StepWeight& w, const RatInterval& I, const Rational& r) {
    const auto& bp = w.breakpoints();
    const auto& vals = w.values();
    if (auto e = as_long_exponent(r)) {
        Rational sum = 0;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const Rational lo = std::max(bp[i], I.lo);
            const Rational hi = std::min(bp[i + 1], I.hi);
            if (hi > lo) sum += (hi - lo) * pow_rational(vals[i], *e);
        }
        return exact_est<Real>(sum / I.length());
    }
    const Real r_real = to_real<Real>(r);
    Real sum = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const Rational lo = std::max(bp[i], I.lo);
        const Rational hi = std::min(bp[i + 1], I.hi);
        if (hi > lo)
            sum += to_real<Real>(hi - lo) * boost::multiprecision::pow(to_real<Real>(vals[i]), r_real);
    }
    EstValue<Real> out;
    out.approx = sum / to_real<Real>(I.length());
    return out;
}

} // namespace detail

// (mean of w^r over I)^{1/r} with r != 0. Plain and harmonic means (r = 1,
// r = -1) stay exact; other exponents evaluate in high-precision floats.
template <class Real>
Real power_average(const StepWeight& w, const RatInterval& I, const Rational& r) {
    check_subinterval(I);
    if (r == 0) throw PreconditionError("power_average: r must be nonzero");
    auto inner = detail::power_mean<Real>(w, I, r);
    if (inner.exact) {
        if (r == 1) return to_real<Real>(*inner.exact);
        if (r == -1) return to_real<Real>(Rational(1) / *inner.exact);
    }
    const Real base = inner.exact ? to_real<Real>(*inner.exact) : inner.approx;
    return boost::multiprecision::pow(base, Real(1) / to_real<Real>(r));
}

enum class WeightClass { Ar, RHr, A1, RHinf, BMO };

inline const char* class_tag_name(WeightClass c) {
    switch (c) {
        case WeightClass::Ar: return "ar";
        case WeightClass::RHr: return "rhr";
        case WeightClass::A1: return "a1";
        case WeightClass::RHinf: return "rhinf";
        case WeightClass::BMO: return "bmo";
    }
    return "?";
}

// Supremum of one interval functional over the base-adic tree up to g_max,
// with the attaining interval. `exact` is set when the winning value was
// computed without leaving rational arithmetic. Values are reproducible
// lower bounds of the true (all-interval) characteristic.
template <class Real>
struct CharacteristicReport {
    WeightClass class_tag = WeightClass::A1;
    std::optional<Rational> r;
    int base = 2;
    int max_generation = 0;
    Real value{};
    std::optional<Rational> exact;
    AdicInterval witness{2, 0, 0};
};

namespace detail {

// Sup over all base-adic intervals with generation <= g_max; first maximum
// (lowest generation, then lowest index) keeps the witness.
template <class Real, class Fn>
CharacteristicReport<Real> scan_adic_sup(int base, int g_max, WeightClass tag,
                                         std::optional<Rational> r, Fn&& estimate) {
    if (base < 2) throw PreconditionError("characteristic scan: base must be >= 2");
    if (g_max < 0) throw PreconditionError("characteristic scan: g_max must be >= 0");
    CharacteristicReport<Real> report;
    report.class_tag = tag;
    report.r = std::move(r);
    report.base = base;
    report.max_generation = g_max;
    report.witness = AdicInterval(base, 0, 0);

    EstValue<Real> best = estimate(RatInterval(report.witness));
    for (int g = 1; g <= g_max; ++g) {
        const Int cells = pow_int(Int(base), static_cast<unsigned long>(g));
        for (Int idx = 0; idx < cells; ++idx) {
            AdicInterval cell(base, g, idx);
            EstValue<Real> v = estimate(RatInterval(cell));
            if (est_greater(v, best)) {
                best = std::move(v);
                report.witness = cell;
            }
        }
    }
    report.value = best.exact ? to_real<Real>(*best.exact) : best.approx;
    report.exact = std::move(best.exact);
    return report;
}

// Characteristics are scale invariant; normalizing by the first piece value
// makes the scan literally identical for w and c*w, so reports match byte
// for byte.
inline StepWeight normalize_first(const StepWeight& w) {
    return scale(w, Rational(1) / w.values().front());
}

} // namespace detail

// sup_I (mean_I w) * (mean_I w^{-1/(r-1)})^{r-1} over base-adic I.
template <class Real>
CharacteristicReport<Real> characteristic_Ar(const StepWeight& w, int base, int g_max,
                                             const Rational& r) {
    if (!(r > 1)) throw PreconditionError("characteristic_Ar: r must be > 1");
    const StepWeight wn = detail::normalize_first(w);
    const Rational s = Rational(-1) / (r - 1);
    const Rational expo = r - 1;
    const auto expo_long = detail::as_long_exponent(expo);
    auto est = [&](const RatInterval& I) -> detail::EstValue<Real> {
        if (min_on(wn, I) == max_on(wn, I)) return detail::exact_est<Real>(Rational(1));
        const Rational avg = average(wn, I);
        auto inner = detail::power_mean<Real>(wn, I, s);
        if (inner.exact && expo_long)
            return detail::exact_est<Real>(avg * pow_rational(*inner.exact, *expo_long));
        const Real inner_real = inner.exact ? to_real<Real>(*inner.exact) : inner.approx;
        detail::EstValue<Real> out;
        out.approx = to_real<Real>(avg) * boost::multiprecision::pow(inner_real, to_real<Real>(expo));
        return out;
    };
    return detail::scan_adic_sup<Real>(base, g_max, WeightClass::Ar, r, est);
}

// sup_I (mean_I w^r)^{1/r} / mean_I w over base-adic I.
template <class Real>
CharacteristicReport<Real> characteristic_RHr(const StepWeight& w, int base, int g_max,
                                              const Rational& r) {
    if (!(r > 1)) throw PreconditionError("characteristic_RHr: r must be > 1");
    const StepWeight wn = detail::normalize_first(w);
    auto est = [&](const RatInterval& I) -> detail::EstValue<Real> {
        if (min_on(wn, I) == max_on(wn, I)) return detail::exact_est<Real>(Rational(1));
        detail::EstValue<Real> out;
        out.approx = power_average<Real>(wn, I, r) / to_real<Real>(average(wn, I));
        return out;
    };
    return detail::scan_adic_sup<Real>(base, g_max, WeightClass::RHr, r, est);
}

enum class ExtremalClass { A1, RHinf };

// A1: sup_I (mean_I w) / (min_I w); RHinf: sup_I (max_I w) / (mean_I w).
// Both stay in exact rational arithmetic on step weights.
template <class Real>
CharacteristicReport<Real> characteristic_extremal(const StepWeight& w, int base, int g_max,
                                                   ExtremalClass which) {
    const StepWeight wn = detail::normalize_first(w);
    auto est = [&](const RatInterval& I) -> detail::EstValue<Real> {
        if (which == ExtremalClass::A1)
            return detail::exact_est<Real>(average(wn, I) / min_on(wn, I));
        return detail::exact_est<Real>(max_on(wn, I) / average(wn, I));
    };
    return detail::scan_adic_sup<Real>(
        base, g_max, which == ExtremalClass::A1 ? WeightClass::A1 : WeightClass::RHinf,
        std::nullopt, est);
}

// sup over base-adic I of mean_I |f - mean_I f| where f is the step function
// carried by f_source: f = log(values) when log_domain, the raw values
// otherwise. f is shift-normalized by its first value, which keeps the
// computation identical under f -> f + c (and w -> c*w in the log domain).
template <class Real>
CharacteristicReport<Real> bmo_norm_adic(const StepWeight& f_source, int base, int g_max,
                                         bool log_domain) {
    const auto& bp = f_source.breakpoints();
    const auto& vals = f_source.values();
    const std::size_t n = vals.size();

    std::vector<Rational> f_exact;
    std::vector<Real> f_real;
    if (log_domain) {
        f_real.reserve(n);
        for (const Rational& v : vals)
            f_real.push_back(boost::multiprecision::log(to_real<Real>(v / vals.front())));
    } else {
        f_exact.reserve(n);
        for (const Rational& v : vals) f_exact.push_back(v - vals.front());
    }

    auto est = [&](const RatInterval& I) -> detail::EstValue<Real> {
        std::vector<std::pair<std::size_t, Rational>> overlap; // piece -> length
        for (std::size_t i = 0; i < n; ++i) {
            const Rational lo = std::max(bp[i], I.lo);
            const Rational hi = std::min(bp[i + 1], I.hi);
            if (hi > lo) overlap.emplace_back(i, hi - lo);
        }
        if (overlap.size() == 1) return detail::exact_est<Real>(Rational(0));
        if (!log_domain) {
            Rational mean = 0;
            for (const auto& [i, len] : overlap) mean += len * f_exact[i];
            mean /= I.length();
            Rational dev = 0;
            for (const auto& [i, len] : overlap) dev += len * abs(f_exact[i] - mean);
            return detail::exact_est<Real>(dev / I.length());
        }
        const Real inv_len = Real(1) / to_real<Real>(I.length());
        Real mean = 0;
        for (const auto& [i, len] : overlap) mean += to_real<Real>(len) * f_real[i];
        mean *= inv_len;
        Real dev = 0;
        for (const auto& [i, len] : overlap)
            dev += to_real<Real>(len) * boost::multiprecision::abs(f_real[i] - mean);
        detail::EstValue<Real> out;
        out.approx = dev * inv_len;
        return out;
    };
    return detail::scan_adic_sup<Real>(base, g_max, WeightClass::BMO, std::nullopt, est);
}

// mean_I log w, in high-precision floats (the log leaves Q).
template <class Real>
Real log_average(const StepWeight& w, const RatInterval& I) {
    check_subinterval(I);
    const auto& bp = w.breakpoints();
    const auto& vals = w.values();
    Real sum = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const Rational lo = std::max(bp[i], I.lo);
        const Rational hi = std::min(bp[i + 1], I.hi);
        if (hi > lo) sum += to_real<Real>(hi - lo) * boost::multiprecision::log(to_real<Real>(vals[i]));
    }
    return sum / to_real<Real>(I.length());
}

// mean_I |log w - mean_I log w|.
template <class Real>
Real log_oscillation(const StepWeight& w, const RatInterval& I) {
    check_subinterval(I);
    const Real mean = log_average<Real>(w, I);
    const auto& bp = w.breakpoints();
    const auto& vals = w.values();
    Real sum = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const Rational lo = std::max(bp[i], I.lo);
        const Rational hi = std::min(bp[i + 1], I.hi);
        if (hi > lo)
            sum += to_real<Real>(hi - lo) *
                   boost::multiprecision::abs(boost::multiprecision::log(to_real<Real>(vals[i])) - mean);
    }
    return sum / to_real<Real>(I.length());
}

template <class Real>
struct ModuleClosedForms {
    Real avg_f{};    // mean of log w over the host: (alpha/2) log(ab/q^2)
    Real osc_lower{}; // the G-restricted lower bound (alpha/4) log(b/a)
    Real osc_full{};  // full host oscillation (alpha/2) log(b/a)
};

template <class Real>
ModuleClosedForms<Real> module_closed_forms(const ModuleFamilyParams& p) {
    validate(p);
    ModuleClosedForms<Real> out;
    const Real lg_ba = boost::multiprecision::log(to_real<Real>(p.b / p.a));
    out.osc_full = Real(p.alpha) * lg_ba / 2;
    out.osc_lower = out.osc_full / 2;
    const Rational ratio = p.a * p.b / (Rational(p.q) * p.q);
    out.avg_f = Real(p.alpha) * boost::multiprecision::log(to_real<Real>(ratio)) / 2;
    return out;
}

// Max two-sided mass ratio over adjacent equal-length cells
// [i/B, (i+1)/B), [(i+1)/B, (i+2)/B), B = grid_base^g, g <= g_max, with
// masses mu(I) = integral_I w. Exact; 1 when no pair exists (g_max = 0).
inline Rational doubling_ratio_scan(const StepWeight& w, int g_max, int grid_base) {
    if (grid_base < 2) throw PreconditionError("doubling_ratio_scan: grid_base must be >= 2");
    if (g_max < 0) throw PreconditionError("doubling_ratio_scan: g_max must be >= 0");
    Rational best = 1;
    for (int g = 0; g <= g_max; ++g) {
        const Int cells = pow_int(Int(grid_base), static_cast<unsigned long>(g));
        Rational prev;
        for (Int idx = 0; idx < cells; ++idx) {
            const Rational lo(idx, cells);
            const Rational hi(idx + 1, cells);
            const Rational mass = integral(w, RatInterval(lo, hi));
            if (idx > 0) {
                const Rational ratio = std::max(prev / mass, mass / prev);
                if (ratio > best) best = ratio;
            }
            prev = mass;
        }
    }
    return best;
}

} // namespace adic::weights
