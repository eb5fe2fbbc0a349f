#include <catch2/catch_amalgamated.hpp>

#include "adic/io.hpp"

using namespace adic;
using io::json;

TEST_CASE("rational strings round trip") {
    CHECK(io::rational_to_string(Rational(3, 2)) == "3/2");
    CHECK(io::rational_to_string(Rational(7)) == "7");
    CHECK(io::rational_to_string(Rational(-5, 4)) == "-5/4");
    CHECK(io::rational_from_string("3/2") == Rational(3, 2));
    CHECK(io::rational_from_string("7") == 7);
    CHECK_THROWS_AS(io::rational_from_string("seven"), ParseError);
    CHECK_THROWS_AS(io::rational_from_string(""), ParseError);
}

TEST_CASE("big integers serialize as numbers until they stop fitting") {
    CHECK(io::int_to_json(Int(42)).is_number_integer());
    const Int big = pow_int(Int(10), 30);
    const json jb = io::int_to_json(big);
    REQUIRE(jb.is_string());
    CHECK(io::int_from_json(jb, "x") == big);
    CHECK(io::int_from_json(json(17), "x") == 17);
    CHECK_THROWS_AS(io::int_from_json(json("12x"), "x"), ParseError);
}

TEST_CASE("certificate cache lines round trip") {
    const auto cert = stability::compute_psi(stability::CoprimePair(6, 5));
    const json j = io::certificate_to_json(cert);
    CHECK(j["m"] == 6);
    CHECK(j["n"] == 5);
    CHECK(j["gamma"] == "3/2");
    CHECK(j["psi"] == 24);

    const auto back = io::certificate_from_json(j);
    CHECK(back.pair.m == cert.pair.m);
    CHECK(back.t_mn == cert.t_mn);
    CHECK(back.L == cert.L);
    CHECK(back.gamma == cert.gamma);
    CHECK(back.psi == cert.psi);
    CHECK(back.verified_t_lo == cert.verified_t_lo);
    CHECK(back.verified_t_hi == cert.verified_t_hi);

    json missing = j;
    missing.erase("psi");
    CHECK_THROWS_AS(io::certificate_from_json(missing), ParseError);
}

TEST_CASE("witness JSON carries both moduli as decimal strings") {
    const auto cert = stability::compute_psi(stability::CoprimePair(3, 2));
    const auto table = progressions::build_power_table(cert, 2);
    const auto ws = progressions::generate_witnesses(table, 4, 1);
    const json j = io::witness_to_json(ws[0]);
    CHECK(j["m"] == 3);
    CHECK(j["t1"] == 2);
    CHECK(j["k"] == 4);
    CHECK(j["t2"] == 2);
    CHECK(j["j"] == 7);
    CHECK(j["m_pow"] == "9");
    CHECK(j["n_pow"] == "16");
}

TEST_CASE("weight files parse with exact rationals") {
    const auto w = io::parse_step_weight(R"({"breakpoints":["0","1/2","1"],"values":["4","1"]})");
    CHECK(w.values() == std::vector<Rational>{4, 1});
    const json round = io::step_weight_to_json(w);
    CHECK(round["breakpoints"][1] == "1/2");
}

TEST_CASE("malformed weight text reports line and column") {
    try {
        io::parse_step_weight("{\n  \"breakpoints\": [\"0\", \"1\"\n  \"values\": [\"1\"]}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line >= 2);
        CHECK(e.column >= 1);
    }
    // structurally valid JSON, semantically broken weights
    CHECK_THROWS_AS(io::parse_step_weight(R"({"breakpoints":["0","1"],"values":["-2"]})"), ParseError);
    CHECK_THROWS_AS(io::parse_step_weight(R"({"breakpoints":["0","2/3","1/3","1"],"values":["1","2","3"]})"),
                    ParseError);
    CHECK_THROWS_AS(io::parse_step_weight(R"({"values":["1"]})"), ParseError);
}

TEST_CASE("characteristic reports serialize exact values when they exist") {
    const auto w = io::parse_step_weight(R"({"breakpoints":["0","1/2","1"],"values":["4","1"]})");
    const auto rep = weights::characteristic_Ar<Real50>(w, 2, 1, Rational(2));
    const json j = io::report_to_json(rep, 50);
    CHECK(j["class_tag"] == "ar");
    CHECK(j["r"] == "2");
    CHECK(j["base"] == 2);
    CHECK(j["g_max"] == 1);
    CHECK(j["precision"] == 50);
    CHECK(j["exact"] == "25/16");
    CHECK(j["value"] == "1.5625");
    CHECK(j["witness"]["generation"] == 0);

    const auto bmo = weights::bmo_norm_adic<Real50>(w, 2, 2, true);
    const json jb = io::report_to_json(bmo, 50);
    CHECK(jb["r"].is_null());
    CHECK(jb["exact"].is_null());
}
