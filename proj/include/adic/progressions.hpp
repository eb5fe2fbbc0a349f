#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "adic/errors.hpp"
#include "adic/modarith.hpp"
#include "adic/numeric.hpp"
#include "adic/stability.hpp"

namespace adic::progressions {

using stability::CoprimePair;
using stability::PsiCertificate;

// Memoized successive powers of g = n^phi(m) mod m^{t1*phi(n)}:
// powers[i] = g^i, one full cycle, so powers.size() is the subgroup order.
// Built once per (pair, t1) and reused for every k.
struct PowerTable {
    Int m;
    Int n;
    int t1 = 1;
    Int modulus;   // m^{t1*phi(n)}
    Int generator; // n^{phi(m)} mod modulus
    Int psi;
    std::vector<Int> powers;

    std::size_t subgroup_order() const { return powers.size(); }
};

inline constexpr std::size_t kDefaultTableCap = 2000000;

// Enumerates the cyclic subgroup <n^phi(m)> modulo m^{t1*phi(n)}. Below the
// admissible threshold the subgroup identities are not guaranteed; callers
// must opt in explicitly to experiment there.
inline PowerTable build_power_table(const PsiCertificate& cert, int t1,
                                    bool allow_below_threshold = false,
                                    std::size_t size_cap = kDefaultTableCap) {
    if (t1 < 1) throw PreconditionError("build_power_table: t1 must be >= 1");
    const int threshold = stability::min_admissible_t1(cert);
    if (t1 < threshold && !allow_below_threshold)
        throw PreconditionError("build_power_table: t1 = " + std::to_string(t1) +
                                " is below the admissible threshold " + std::to_string(threshold));
    PowerTable table;
    table.m = cert.pair.m;
    table.n = cert.pair.n;
    table.t1 = t1;
    table.psi = cert.psi;
    const Int phi_n = modarith::totient(cert.pair.n);
    const Int exponent = Int(t1) * phi_n;
    table.modulus = pow_int(cert.pair.m, exponent.convert_to<unsigned long>());
    const Int phi_m = modarith::totient(cert.pair.m);
    table.generator = modarith::modpow(cert.pair.n, phi_m, table.modulus);

    Int x = 1;
    table.powers.push_back(x);
    for (;;) {
        x = x * table.generator % table.modulus;
        if (x == 1) break;
        if (table.powers.size() >= size_cap)
            throw PreconditionError("build_power_table: subgroup larger than cap " +
                                    std::to_string(size_cap));
        table.powers.push_back(x);
    }
    return table;
}

// G_{t1}(m, n) = {1 + i*psi : 0 <= i < m^{t1*phi(n)} / psi}, ascending.
inline std::vector<Int> build_G_set(const PsiCertificate& cert, int t1,
                                    std::size_t size_cap = kDefaultTableCap) {
    if (t1 < 1) throw PreconditionError("build_G_set: t1 must be >= 1");
    const Int phi_n = modarith::totient(cert.pair.n);
    const Int exponent = Int(t1) * phi_n;
    const Int modulus = pow_int(cert.pair.m, exponent.convert_to<unsigned long>());
    if (modulus % cert.psi != 0)
        throw ConsistencyError("build_G_set: psi = " + cert.psi.str() + " does not divide m^{t1*phi(n)} = " +
                               modulus.str());
    const Int count = modulus / cert.psi;
    if (count > Int(size_cap))
        throw PreconditionError("build_G_set: set larger than cap " + std::to_string(size_cap));
    std::vector<Int> out;
    out.reserve(count.convert_to<std::size_t>());
    for (Int a = 1; a <= modulus; a += cert.psi) out.push_back(a);
    return out;
}

// The subgroup as an ascending set; together with build_G_set this realizes
// the set-equality check G_{t1}(m, n) = <n^phi(m)>.
inline std::vector<Int> subgroup_of_powers(const PsiCertificate& cert, int t1,
                                           bool allow_below_threshold = false,
                                           std::size_t size_cap = kDefaultTableCap) {
    PowerTable table = build_power_table(cert, t1, allow_below_threshold, size_cap);
    std::vector<Int> out = std::move(table.powers);
    std::sort(out.begin(), out.end());
    return out;
}

// Least t' >= 0 with generator^{t'} == k mod m^{t1*phi(n)}, by ordered
// enumeration of the memoized table. A miss falsifies the subgroup-equality
// claim for k in G_{t1}.
inline int discrete_log_t_prime(const PowerTable& table, const Int& k) {
    Int target = k % table.modulus;
    if (target < 0) target += table.modulus;
    for (std::size_t i = 0; i < table.powers.size(); ++i)
        if (table.powers[i] == target) return static_cast<int>(i);
    throw ConsistencyError("discrete_log_t_prime: k = " + k.str() +
                           " is not in the subgroup generated by n^phi(m)");
}

struct ProgressionWitness {
    Int m;
    Int n;
    int t1 = 1;
    Int k;
    int t_prime = 0;
    Int t2;
    Int j;
    bool identity_checked = false;
};

// The exact fraction identity k/m^{t1*phi(n)} - j/n^{t2*phi(m)} =
// 1/(m^{t1*phi(n)} * n^{t2*phi(m)}), the j-range and the j = -1 mod n
// congruence, all in exact rational arithmetic.
inline bool verify_witness(const ProgressionWitness& w) {
    if (w.t1 < 1 || w.t2 < 1 || w.k < 1 || w.j < 1) return false;
    const Int phi_n = modarith::totient(w.n);
    const Int phi_m = modarith::totient(w.m);
    const Int m_pow = pow_int(w.m, (Int(w.t1) * phi_n).convert_to<unsigned long>());
    const Int n_pow = pow_int(w.n, (w.t2 * phi_m).convert_to<unsigned long>());
    if (w.j > n_pow) return false;
    if ((w.j + 1) % w.n != 0) return false;
    const Rational lhs = Rational(w.k, m_pow) - Rational(w.j, n_pow);
    const Rational rhs = Rational(1, m_pow * n_pow);
    return lhs == rhs;
}

// First `count` values t2 = i*|G| - t' (i = 1, 2, ...) with t2 >= 1, each
// with j recovered by exact division. Every emitted witness re-verifies.
inline std::vector<ProgressionWitness> generate_witnesses(const PowerTable& table, const Int& k,
                                                          int count = 3) {
    if (count < 1) throw PreconditionError("generate_witnesses: count must be >= 1");
    const int t_prime = discrete_log_t_prime(table, k);
    const Int order(static_cast<std::uint64_t>(table.subgroup_order()));
    const Int phi_m = modarith::totient(table.m);

    std::vector<ProgressionWitness> out;
    out.reserve(static_cast<std::size_t>(count));
    // Keeps n^{t2*phi(m)} at a size exact arithmetic can stomach.
    static const Int exponent_cap = Int(5000000);
    for (Int i = 1; static_cast<int>(out.size()) < count; ++i) {
        const Int t2 = i * order - t_prime;
        if (t2 < 1) continue; // t' < |G| makes this unreachable, kept as a guard
        const Int witness_exponent = t2 * phi_m;
        if (witness_exponent > exponent_cap)
            throw PreconditionError("generate_witnesses: t2*phi(m) = " + witness_exponent.str() +
                                    " beyond the exact-arithmetic cap");
        ProgressionWitness w;
        w.m = table.m;
        w.n = table.n;
        w.t1 = table.t1;
        w.k = k;
        w.t_prime = t_prime;
        w.t2 = t2;
        const Int n_pow = pow_int(table.n, (t2 * phi_m).convert_to<unsigned long>());
        const Int numer = k * n_pow - 1;
        if (numer % table.modulus != 0)
            throw ConsistencyError("generate_witnesses: k*n^{t2*phi(m)} - 1 not divisible by "
                                   "m^{t1*phi(n)} at t2 = " + t2.str());
        w.j = numer / table.modulus;
        if (!verify_witness(w))
            throw ConsistencyError("generate_witnesses: generated witness failed verification at t2 = " +
                                   t2.str());
        w.identity_checked = true;
        out.push_back(std::move(w));
    }
    return out;
}

// Membership in G_{t1}(m, n) without materializing the set.
inline bool k_in_G(const PsiCertificate& cert, int t1, const Int& k) {
    if (t1 < 1 || k < 1) return false;
    const Int phi_n = modarith::totient(cert.pair.n);
    const Int modulus = pow_int(cert.pair.m, (Int(t1) * phi_n).convert_to<unsigned long>());
    return k <= modulus && (k - 1) % cert.psi == 0;
}

// Closest member of G_{t1}(m, n) to k (lower one on ties).
inline Int nearest_valid_k(const PsiCertificate& cert, int t1, const Int& k) {
    const Int phi_n = modarith::totient(cert.pair.n);
    const Int modulus = pow_int(cert.pair.m, (Int(t1) * phi_n).convert_to<unsigned long>());
    const Int max_i = modulus / cert.psi - 1;
    if (k < 1) return 1;
    Int i = (k - 1) / cert.psi;
    if (i >= max_i) return 1 + max_i * cert.psi;
    const Int below = 1 + i * cert.psi;
    const Int above = below + cert.psi;
    return (k - below <= above - k) ? below : above;
}

} // namespace adic::progressions
