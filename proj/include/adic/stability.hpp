#pragma once

#include <string>
#include <utility>
#include <vector>

#include "adic/errors.hpp"
#include "adic/modarith.hpp"
#include "adic/numeric.hpp"

namespace adic::stability {

using modarith::Factorization;

// Validated base pair: m > n >= 2 and gcd(m, n) = 1. Inputs in the wrong
// order are rejected with a swap hint instead of silently reordered.
struct CoprimePair {
    Int m;
    Int n;

    CoprimePair(Int m_, Int n_) : m(std::move(m_)), n(std::move(n_)) {
        if (n < 2) throw PreconditionError("CoprimePair: need n >= 2, got n = " + n.str());
        if (m <= n) {
            std::string msg = "CoprimePair: need m > n, got (m, n) = (" + m.str() + ", " + n.str() + ")";
            if (m >= 2 && m < n && modarith::gcd(n, m) == 1)
                msg += "; the swapped pair (" + n.str() + ", " + m.str() + ") would be valid";
            throw PreconditionError(msg);
        }
        if (modarith::gcd(m, n) != 1)
            throw PreconditionError("CoprimePair: gcd(" + m.str() + ", " + n.str() + ") = " +
                                    modarith::gcd(m, n).str() + ", bases must be coprime");
    }
};

// Machine-checkable record of the order-stability computation for one pair:
// t_mn, the gamma prefix with its stabilization index L, psi = m^{t_mn+1}/gamma,
// and an explicitly verified window of t values with m^t / O_t = psi.
//
// gamma entries are exact rationals. They are integers dividing m whenever m
// is a prime power; for other composite m the integrality claim fails on real
// inputs (the stable gamma of (6,5) is 3/2) while psi itself stays integral.
struct PsiCertificate {
    CoprimePair pair;
    int t_mn = 1;
    std::vector<Rational> gamma_seq; // gamma_0 .. gamma_{L+probe_window-1}
    int L = 0;
    Rational gamma;
    Int psi;
    int verified_t_lo = 0;
    int verified_t_hi = 0;
};

namespace detail {

struct PairContext {
    Int phi_m;
    Factorization m_fact;
    explicit PairContext(const CoprimePair& p)
        : phi_m(modarith::totient(p.m)), m_fact(modarith::factorize(p.m)) {}
};

// O_t(m, n): order of n^phi(m) in (Z/m^t Z)^*. m^t is a valid factored
// exponent bound: x = n^phi(m) is 1 mod m, and 1 + m^t s raised to m^t
// collapses to 1 mod m^t.
inline Int order_mod_mt(const CoprimePair& p, const PairContext& ctx, int t) {
    const Int modulus = pow_int(p.m, static_cast<unsigned long>(t));
    const Int x = modarith::modpow(p.n, ctx.phi_m, modulus);
    return modarith::multiplicative_order(x, modulus, ctx.m_fact.pow(static_cast<unsigned>(t)));
}

inline Rational gamma_at(const CoprimePair& p, const PairContext& ctx, int t_mn, int ell) {
    const Int order = order_mod_mt(p, ctx, t_mn + ell + 1);
    const Int m_ell1 = pow_int(p.m, static_cast<unsigned long>(ell + 1));
    if (m_ell1 % order != 0)
        throw ConsistencyError("gamma sequence: O_{t+l+1} does not divide m^{l+1} for (m, n) = (" +
                               p.m.str() + ", " + p.n.str() + "), l = " + std::to_string(ell));
    return Rational(order, pow_int(p.m, static_cast<unsigned long>(ell)));
}

} // namespace detail

// O_t(m, n), exposed for cross-checks.
inline Int order_mod_mt(const CoprimePair& p, int t) {
    if (t < 1) throw PreconditionError("order_mod_mt: t must be >= 1");
    detail::PairContext ctx(p);
    return detail::order_mod_mt(p, ctx, t);
}

// Least t >= 1 with n^phi(m) != 1 mod m^{t+1}. Finite: m^{t+1} eventually
// exceeds n^phi(m) > 1, at which point the residue is n^phi(m) itself.
inline int compute_t(const CoprimePair& p) {
    detail::PairContext ctx(p);
    for (int t = 1;; ++t) {
        const Int modulus = pow_int(p.m, static_cast<unsigned long>(t + 1));
        if (modarith::modpow(p.n, ctx.phi_m, modulus) != 1) return t;
    }
}

// (n^phi(m))^{m^l} != 1 mod m^{t(m,n)+l+1} for 0 <= l <= ell_max.
// Everything runs through modpow; full powers are never expanded.
inline bool verify_lemma_nonvanishing(const CoprimePair& p, int ell_max) {
    if (ell_max < 0) throw PreconditionError("verify_lemma_nonvanishing: ell_max must be >= 0");
    detail::PairContext ctx(p);
    const int t = compute_t(p);
    for (int ell = 0; ell <= ell_max; ++ell) {
        const Int exponent = ctx.phi_m * pow_int(p.m, static_cast<unsigned long>(ell));
        const Int modulus = pow_int(p.m, static_cast<unsigned long>(t + ell + 1));
        if (modarith::modpow(p.n, exponent, modulus) == 1) return false;
    }
    return true;
}

// [gamma_0, ..., gamma_{ell_max}] with gamma_l = O_{t(m,n)+l+1}(m,n) / m^l.
// Each entry is checked against the falsifiable divisibility O | m^{l+1}.
inline std::vector<Rational> gamma_sequence(const CoprimePair& p, int ell_max) {
    if (ell_max < 0) throw PreconditionError("gamma_sequence: ell_max must be >= 0");
    detail::PairContext ctx(p);
    const int t = compute_t(p);
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(ell_max) + 1);
    for (int ell = 0; ell <= ell_max; ++ell) out.push_back(detail::gamma_at(p, ctx, t, ell));
    return out;
}

// Stabilization is declared after probe_window consecutive equal gamma
// entries, then the resulting psi is re-verified on an explicit t-window by
// direct order recomputation. Exhausting ell_cap without a run is reported
// as inconclusive, which is distinct from falsification.
inline PsiCertificate compute_psi(const CoprimePair& p, int probe_window = 4, int ell_cap = 64) {
    if (probe_window < 3) throw PreconditionError("compute_psi: probe_window must be >= 3");
    if (ell_cap < probe_window) throw PreconditionError("compute_psi: ell_cap below probe_window");
    detail::PairContext ctx(p);
    PsiCertificate cert{p};
    cert.t_mn = compute_t(p);

    std::vector<Rational> gammas;
    int run = 0;
    int L = -1;
    for (int ell = 0; ell <= ell_cap; ++ell) {
        gammas.push_back(detail::gamma_at(p, ctx, cert.t_mn, ell));
        if (ell > 0 && gammas[static_cast<std::size_t>(ell)] == gammas[static_cast<std::size_t>(ell) - 1])
            ++run;
        else
            run = 1;
        if (run == probe_window) {
            L = ell - probe_window + 1;
            break;
        }
    }
    if (L < 0)
        throw InconclusiveError("compute_psi: gamma sequence for (" + p.m.str() + ", " + p.n.str() +
                                ") not stable within l <= " + std::to_string(ell_cap));

    cert.gamma_seq = std::move(gammas);
    cert.L = L;
    cert.gamma = cert.gamma_seq.back();

    const Rational psi_q =
        Rational(pow_int(p.m, static_cast<unsigned long>(cert.t_mn + 1))) / cert.gamma;
    if (!is_integer(psi_q))
        throw ConsistencyError("compute_psi: m^{t+1}/gamma is not an integer for (" + p.m.str() +
                               ", " + p.n.str() + ")");
    cert.psi = num(psi_q);

    // Direct recomputation over the initial window t in [t+L+1, t+L+probe_window].
    cert.verified_t_lo = cert.t_mn + cert.L + 1;
    cert.verified_t_hi = cert.t_mn + cert.L + probe_window;
    for (int t = cert.verified_t_lo; t <= cert.verified_t_hi; ++t) {
        const Int order = detail::order_mod_mt(p, ctx, t);
        const Int m_t = pow_int(p.m, static_cast<unsigned long>(t));
        if (m_t % order != 0 || m_t / order != cert.psi)
            throw ConsistencyError("compute_psi: declared psi fails at t = " + std::to_string(t) +
                                   " for (" + p.m.str() + ", " + p.n.str() + ")");
    }
    return cert;
}

struct WindowResult {
    bool ok = true;
    int first_failing_t = 0;
    explicit operator bool() const { return ok; }
};

// Checks m^t / O_t = psi for every t in [t_lo, t_hi]. On success the
// certificate window is widened; if the requested range is disjoint from the
// already-verified window the gap is checked as well, so the window invariant
// (every t inside it verified) survives the merge.
inline WindowResult verify_stability_window(PsiCertificate& cert, int t_lo, int t_hi) {
    if (t_lo < cert.t_mn + cert.L + 1)
        throw PreconditionError("verify_stability_window: t_lo below t(m,n) + L + 1");
    if (t_hi < t_lo) throw PreconditionError("verify_stability_window: empty window");
    detail::PairContext ctx(cert.pair);
    // Certificates deserialized from a cache line may carry no window yet.
    const bool has_window = cert.verified_t_lo >= cert.t_mn + cert.L + 1 &&
                            cert.verified_t_hi >= cert.verified_t_lo;
    const int lo = has_window ? std::min(t_lo, cert.verified_t_lo) : t_lo;
    const int hi = has_window ? std::max(t_hi, cert.verified_t_hi) : t_hi;
    for (int t = lo; t <= hi; ++t) {
        if (has_window && t >= cert.verified_t_lo && t <= cert.verified_t_hi) continue;
        const Int order = detail::order_mod_mt(cert.pair, ctx, t);
        const Int m_t = pow_int(cert.pair.m, static_cast<unsigned long>(t));
        if (m_t % order != 0 || m_t / order != cert.psi) return WindowResult{false, t};
    }
    cert.verified_t_lo = lo;
    cert.verified_t_hi = hi;
    return WindowResult{};
}

// n^phi(m) == 1 mod psi(m, n).
inline bool verify_psi_congruence(const PsiCertificate& cert) {
    if (cert.psi < 2) return true; // mod 1 everything is congruent
    const Int phi_m = modarith::totient(cert.pair.m);
    return modarith::modpow(cert.pair.n, phi_m, cert.psi) == 1;
}

// Smallest t1 admissible for the subgroup argument: t1 >= (t(m,n)+L+1)/phi(n).
inline int min_admissible_t1(const PsiCertificate& cert) {
    const Int phi_n = modarith::totient(cert.pair.n);
    const Int need = cert.t_mn + cert.L + 1;
    Int t1 = (need + phi_n - 1) / phi_n;
    if (t1 < 1) t1 = 1;
    return t1.convert_to<int>();
}

} // namespace adic::stability
