#pragma once

// Test-only oracles, kept independent of the code paths they check.

#include <random>
#include <utility>
#include <vector>

#include "adic/adic.hpp"

namespace testing_oracles {

using adic::Int;
using adic::Rational;

// psi via p-adic valuations: prod over p | m of p^{v_p(n^phi(m) - 1)}.
// Uses a fully expanded power and repeated division; shares nothing with the
// order-peeling route the library takes.
inline Int psi_valuation_oracle(const Int& m, const Int& n) {
    const Int phi = adic::modarith::totient(m);
    const Int big = adic::pow_int(n, phi.convert_to<unsigned long>()) - 1;
    Int out = 1;
    for (const auto& [p, e] : adic::modarith::factorize(m).prime_powers) {
        (void)e;
        Int rest = big;
        while (rest % p == 0) {
            rest /= p;
            out *= p;
        }
    }
    return out;
}

// All (t2, j) with t2 <= t2_max satisfying k*n^{t2*phi(m)} - j*m^{t1*phi(n)} = 1,
// 1 <= j <= n^{t2*phi(m)} and j = -1 mod n. For fixed t2 the identity pins j,
// so scanning t2 is exhaustive.
inline std::vector<std::pair<Int, Int>> witness_bruteforce(const Int& m, const Int& n, int t1,
                                                           const Int& k, const Int& t2_max) {
    const Int phi_n = adic::modarith::totient(n);
    const Int phi_m = adic::modarith::totient(m);
    const Int m_pow = adic::pow_int(m, (Int(t1) * phi_n).convert_to<unsigned long>());
    std::vector<std::pair<Int, Int>> out;
    for (Int t2 = 1; t2 <= t2_max; ++t2) {
        const Int n_pow = adic::pow_int(n, (t2 * phi_m).convert_to<unsigned long>());
        const Int numer = k * n_pow - 1;
        if (numer % m_pow != 0) continue;
        const Int j = numer / m_pow;
        if (j >= 1 && j <= n_pow && (j + 1) % n == 0) out.emplace_back(t2, j);
    }
    return out;
}

// Deterministic random step weight for property tests.
inline adic::weights::StepWeight random_step_weight(std::mt19937& rng, int max_pieces = 5) {
    std::uniform_int_distribution<int> pieces_dist(1, max_pieces);
    std::uniform_int_distribution<int> den_dist(2, 24);
    std::uniform_int_distribution<int> val_num(1, 40);
    std::uniform_int_distribution<int> val_den(1, 9);
    const int pieces = pieces_dist(rng);

    std::vector<Rational> cuts;
    while (static_cast<int>(cuts.size()) < pieces - 1) {
        const int d = den_dist(rng);
        std::uniform_int_distribution<int> num_dist(1, d - 1);
        const Rational c(num_dist(rng), d);
        bool dup = false;
        for (const Rational& x : cuts) dup = dup || x == c;
        if (!dup) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());

    std::vector<Rational> breakpoints;
    breakpoints.emplace_back(0);
    for (const Rational& c : cuts) breakpoints.push_back(c);
    breakpoints.emplace_back(1);

    std::vector<Rational> values;
    for (int i = 0; i < pieces; ++i) values.emplace_back(val_num(rng), val_den(rng));
    return adic::weights::StepWeight(std::move(breakpoints), std::move(values));
}

} // namespace testing_oracles
