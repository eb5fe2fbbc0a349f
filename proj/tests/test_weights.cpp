#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "adic/io.hpp"
#include "adic/weights.hpp"
#include "oracles.hpp"

using namespace adic;
using namespace adic::weights;

namespace {

StepWeight halves_weight() {
    return StepWeight({Rational(0), Rational(1, 2), Rational(1)}, {Rational(4), Rational(1)});
}

StepWeight constant_weight(const Rational& c) {
    return StepWeight({Rational(0), Rational(1)}, {c});
}

RatInterval unit() { return RatInterval(Rational(0), Rational(1)); }

template <class Real>
Real rel_delta(const Real& a, const Real& b) {
    using boost::multiprecision::abs;
    return abs(a - b) / abs(b);
}

const Real50 tiny = Real50("1e-40");

} // namespace

TEST_CASE("adic intervals validate and split into children") {
    CHECK_THROWS_AS(AdicInterval(1, 0, 0), PreconditionError);
    CHECK_THROWS_AS(AdicInterval(2, -1, 0), PreconditionError);
    CHECK_THROWS_AS(AdicInterval(2, 1, 2), PreconditionError);

    const auto kids3 = adic_children(AdicInterval(3, 0, 0));
    REQUIRE(kids3.size() == 3);
    CHECK(kids3.front().lower() == 0);
    CHECK(kids3.back().upper() == 1);
    Rational total = 0;
    for (const auto& k : kids3) total += k.length();
    CHECK(total == AdicInterval(3, 0, 0).length());

    const auto kids = adic_children(AdicInterval(2, 2, 3));
    REQUIRE(kids.size() == 2);
    CHECK(kids[0].index == 6);
    CHECK(kids[1].index == 7);
    CHECK(kids[0].generation == 3);
}

TEST_CASE("step weights validate their shape") {
    CHECK_THROWS_AS(StepWeight({Rational(0), Rational(1)}, {}), PreconditionError);
    CHECK_THROWS_AS(StepWeight({Rational(0), Rational(2)}, {Rational(1)}), PreconditionError);
    CHECK_THROWS_AS(StepWeight({Rational(0), Rational(1, 2), Rational(1, 2), Rational(1)},
                               {Rational(1), Rational(2), Rational(3)}),
                    PreconditionError);
    CHECK_THROWS_AS(StepWeight({Rational(0), Rational(1)}, {Rational(0)}), PreconditionError);
    const StepWeight w = halves_weight();
    CHECK(w.value_at(Rational(1, 4)) == 4);
    CHECK(w.value_at(Rational(1, 2)) == 1);
    CHECK_THROWS_AS(w.value_at(Rational(1)), PreconditionError);
}

TEST_CASE("average is exact on step weights") {
    CHECK(average(constant_weight(1), unit()) == 1);
    CHECK(average(halves_weight(), unit()) == Rational(5, 2));
    CHECK(average(halves_weight(), RatInterval(Rational(1, 4), Rational(3, 4))) == Rational(5, 2));
    CHECK_THROWS_AS(average(halves_weight(), RatInterval(Rational(1, 4), Rational(1, 4))),
                    PreconditionError);
    CHECK_THROWS_AS(average(halves_weight(), RatInterval(Rational(-1, 4), Rational(1, 2))),
                    PreconditionError);
}

TEST_CASE("power averages recover the worked means") {
    using boost::multiprecision::abs;
    using boost::multiprecision::sqrt;
    // constant weight: any exponent returns the constant
    const Real50 c = power_average<Real50>(constant_weight(5), unit(), Rational(3, 2));
    CHECK(abs(c - 5) < tiny);
    // quadratic mean of {4,1} halves: sqrt(17/2)
    const Real50 q = power_average<Real50>(halves_weight(), unit(), Rational(2));
    CHECK(abs(q - sqrt(Real50(17) / 2)) < tiny);
    // harmonic mean: exact 8/5
    const Real50 h = power_average<Real50>(halves_weight(), unit(), Rational(-1));
    CHECK(h == to_real<Real50>(Rational(8, 5)));
    CHECK_THROWS_AS(power_average<Real50>(halves_weight(), unit(), Rational(0)), PreconditionError);
}

TEST_CASE("A_r characteristic of the halves weight") {
    const auto rep = characteristic_Ar<Real50>(halves_weight(), 2, 1, Rational(2));
    REQUIRE(rep.exact.has_value());
    CHECK(*rep.exact == Rational(25, 16));
    CHECK(rep.witness == AdicInterval(2, 0, 0));
    CHECK(rep.class_tag == WeightClass::Ar);
    CHECK_THROWS_AS(characteristic_Ar<Real50>(halves_weight(), 2, 1, Rational(1)), PreconditionError);
}

TEST_CASE("RH_r characteristic of the halves weight") {
    using boost::multiprecision::abs;
    using boost::multiprecision::sqrt;
    const auto rep = characteristic_RHr<Real50>(halves_weight(), 2, 1, Rational(2));
    const Real50 expected = sqrt(Real50(17) / 2) / (Real50(5) / 2);
    CHECK(abs(rep.value - expected) < tiny);
    CHECK(rep.witness == AdicInterval(2, 0, 0));
}

TEST_CASE("extremal characteristics stay rational") {
    const auto a1 = characteristic_extremal<Real50>(halves_weight(), 2, 1, ExtremalClass::A1);
    REQUIRE(a1.exact.has_value());
    CHECK(*a1.exact == Rational(5, 2));
    const auto rhinf = characteristic_extremal<Real50>(halves_weight(), 2, 1, ExtremalClass::RHinf);
    REQUIRE(rhinf.exact.has_value());
    CHECK(*rhinf.exact == Rational(8, 5));
    CHECK(rhinf.witness == AdicInterval(2, 0, 0));
}

TEST_CASE("constant weights score exactly one everywhere, zero oscillation") {
    const StepWeight w = constant_weight(Rational(7, 3));
    CHECK(*characteristic_Ar<Real50>(w, 2, 3, Rational(2)).exact == 1);
    CHECK(*characteristic_Ar<Real50>(w, 3, 2, Rational(5, 2)).exact == 1);
    CHECK(*characteristic_RHr<Real50>(w, 2, 3, Rational(2)).exact == 1);
    CHECK(*characteristic_extremal<Real50>(w, 2, 3, ExtremalClass::A1).exact == 1);
    CHECK(*characteristic_extremal<Real50>(w, 2, 3, ExtremalClass::RHinf).exact == 1);
    const auto bmo = bmo_norm_adic<Real50>(w, 2, 3, true);
    REQUIRE(bmo.exact.has_value());
    CHECK(*bmo.exact == 0);
    CHECK(bmo.value == 0);
}

TEST_CASE("characteristic reports are scale invariant byte for byte") {
    std::mt19937 rng(42);
    const StepWeight w = testing_oracles::random_step_weight(rng);
    const StepWeight w7 = scale(w, 7);
    const auto j1 = io::report_to_json(characteristic_Ar<Real50>(w, 2, 3, Rational(2)), 50).dump();
    const auto j2 = io::report_to_json(characteristic_Ar<Real50>(w7, 2, 3, Rational(2)), 50).dump();
    CHECK(j1 == j2);
    const auto r1 = io::report_to_json(characteristic_RHr<Real50>(w, 2, 3, Rational(3, 2)), 50).dump();
    const auto r2 = io::report_to_json(characteristic_RHr<Real50>(w7, 2, 3, Rational(3, 2)), 50).dump();
    CHECK(r1 == r2);
    const auto e1 = io::report_to_json(characteristic_extremal<Real50>(w, 2, 3, ExtremalClass::A1), 50).dump();
    const auto e2 = io::report_to_json(characteristic_extremal<Real50>(w7, 2, 3, ExtremalClass::A1), 50).dump();
    CHECK(e1 == e2);
}

TEST_CASE("bmo oscillation norm on adic trees") {
    // f = {+log2 on [0,1/2), -log2 on [1/2,1)} via w = {2, 1/2}
    const StepWeight w({Rational(0), Rational(1, 2), Rational(1)}, {Rational(2), Rational(1, 2)});
    const auto rep = bmo_norm_adic<Real50>(w, 2, 4, true);
    using boost::multiprecision::abs;
    using boost::multiprecision::log;
    CHECK(abs(rep.value - log(Real50(2))) < tiny);
    CHECK(rep.witness == AdicInterval(2, 0, 0));

    // direct-domain reports are shift invariant byte for byte
    const StepWeight f({Rational(0), Rational(1, 3), Rational(1)}, {Rational(5), Rational(1, 2)});
    const auto b1 = io::report_to_json(bmo_norm_adic<Real50>(f, 2, 3, false), 50).dump();
    const auto b2 = io::report_to_json(bmo_norm_adic<Real50>(shift_values(f, 3), 2, 3, false), 50).dump();
    CHECK(b1 == b2);
    // log-domain reports are scale invariant
    const auto b3 = io::report_to_json(bmo_norm_adic<Real50>(f, 2, 3, true), 50).dump();
    const auto b4 = io::report_to_json(bmo_norm_adic<Real50>(scale(f, 7), 2, 3, true), 50).dump();
    CHECK(b3 == b4);
}

TEST_CASE("module pair weights take the paired values on the host halves") {
    const ModuleFamilyParams p{Rational(1, 2), Rational(2), 2, 2, AdicInterval(2, 0, 0)};
    const StepWeight w = module_pair_weight(p);
    CHECK(w.breakpoints() == std::vector<Rational>{0, Rational(1, 2), 1});
    CHECK(w.values() == std::vector<Rational>{Rational(1, 16), 1});

    CHECK_THROWS_AS(module_pair_weight(ModuleFamilyParams{Rational(1, 2), Rational(2), 2, 0,
                                                          AdicInterval(2, 0, 0)}),
                    PreconditionError);

    // host strictly inside [0,1): constant 1 outside
    const ModuleFamilyParams p3{Rational(1, 2), Rational(2), 2, 2, AdicInterval(3, 1, 0)};
    const StepWeight w3 = module_pair_weight(p3);
    CHECK(w3.value_at(Rational(0)) == Rational(1, 16));
    CHECK(w3.value_at(Rational(1, 4)) == 1);
    CHECK(w3.value_at(Rational(1, 2)) == 1);
    CHECK(w3.breakpoints() == std::vector<Rational>{0, Rational(1, 6), Rational(1, 3), 1});
}

TEST_CASE("module closed forms match the displayed chain") {
    using boost::multiprecision::abs;
    using boost::multiprecision::log;
    const ModuleFamilyParams p{Rational(1, 2), Rational(2), 2, 2, AdicInterval(2, 0, 0)};
    const auto cf = module_closed_forms<Real50>(p);
    CHECK(abs(cf.avg_f + log(Real50(4))) < tiny);
    CHECK(abs(cf.osc_full - log(Real50(4))) < tiny);
    CHECK(abs(cf.osc_lower - log(Real50(2))) < tiny);
    CHECK(cf.osc_lower == cf.osc_full / 2);

    // a/b -> 1 shrinks the oscillation
    const ModuleFamilyParams near{Rational(9, 10), Rational(10, 9), 2, 1, AdicInterval(2, 0, 0)};
    const auto cf2 = module_closed_forms<Real50>(near);
    CHECK(cf2.osc_lower > 0);
    CHECK(cf2.osc_lower < Real50(1) / 10);
}

TEST_CASE("measured module quantities agree with the closed forms") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> num(1, 9);
    std::uniform_int_distribution<int> bnum(3, 12);
    std::uniform_int_distribution<int> qd(2, 5);
    std::uniform_int_distribution<int> ad(1, 6);
    const Real50 bound("1e-12");
    for (int it = 0; it < 25; ++it) {
        const Rational a(num(rng), 10);
        const Rational b(bnum(rng), 2);
        const ModuleFamilyParams p{a, b, qd(rng), ad(rng), AdicInterval(2, 0, 0)};
        CAPTURE(io::rational_to_string(a), io::rational_to_string(b), p.q, p.alpha);
        const StepWeight w = module_pair_weight(p);
        const auto cf = module_closed_forms<Real50>(p);
        const RatInterval host(p.host.lower(), p.host.upper());
        CHECK(rel_delta(log_average<Real50>(w, host), cf.avg_f) < bound);
        CHECK(rel_delta(log_oscillation<Real50>(w, host), cf.osc_full) < bound);
        CHECK(rel_delta(bmo_norm_adic<Real50>(w, 2, 3, true).value, cf.osc_full) < bound);
    }
}

TEST_CASE("module A1 characteristics grow without bound in alpha") {
    Rational prev = 0;
    for (int alpha = 1; alpha <= 8; ++alpha) {
        const ModuleFamilyParams p{Rational(1, 2), Rational(2), 2, alpha, AdicInterval(2, 0, 0)};
        const auto rep = characteristic_extremal<Real50>(module_pair_weight(p), 2, 2, ExtremalClass::A1);
        REQUIRE(rep.exact.has_value());
        // closed form (1 + (b/a)^alpha)/2
        CHECK(*rep.exact == (1 + pow_rational(Rational(4), alpha)) / 2);
        CHECK(*rep.exact > prev);
        prev = *rep.exact;
    }
}

TEST_CASE("doubling ratio scans") {
    CHECK(doubling_ratio_scan(constant_weight(1), 3, 2) == 1);
    CHECK(doubling_ratio_scan(halves_weight(), 1, 2) == 4);
    CHECK(doubling_ratio_scan(halves_weight(), 0, 2) == 1);
    CHECK(doubling_ratio_scan(scale(halves_weight(), Rational(7, 3)), 1, 2) == 4);
}

TEST_CASE("characteristics are monotone in the generation bound") {
    std::mt19937 rng(515);
    for (int it = 0; it < 10; ++it) {
        const StepWeight w = testing_oracles::random_step_weight(rng);
        Real50 prev_ar = 0, prev_bmo = -1;
        Rational prev_a1 = 0;
        for (int g = 0; g <= 4; ++g) {
            const auto ar = characteristic_Ar<Real50>(w, 2, g, Rational(2));
            const auto a1 = characteristic_extremal<Real50>(w, 2, g, ExtremalClass::A1);
            const auto bmo = bmo_norm_adic<Real50>(w, 2, g, true);
            CHECK(ar.value >= prev_ar);
            CHECK(*a1.exact >= prev_a1);
            CHECK(bmo.value >= prev_bmo);
            prev_ar = ar.value;
            prev_a1 = *a1.exact;
            prev_bmo = bmo.value;
        }
    }
}

TEST_CASE("characteristics never drop below the Jensen floor") {
    std::mt19937 rng(616);
    for (int it = 0; it < 20; ++it) {
        const StepWeight w = testing_oracles::random_step_weight(rng);
        CHECK(*characteristic_Ar<Real50>(w, 2, 3, Rational(2)).exact >= 1);
        CHECK(*characteristic_extremal<Real50>(w, 2, 3, ExtremalClass::A1).exact >= 1);
        CHECK(*characteristic_extremal<Real50>(w, 2, 3, ExtremalClass::RHinf).exact >= 1);
        CHECK(characteristic_RHr<Real50>(w, 2, 3, Rational(2)).value > Real50(1) - tiny);
        CHECK(characteristic_Ar<Real50>(w, 2, 3, Rational(7, 2)).value > Real50(1) - tiny);
        CHECK(bmo_norm_adic<Real50>(w, 2, 3, true).value >= 0);
        CHECK(doubling_ratio_scan(w, 3, 2) >= 1);
    }
}
