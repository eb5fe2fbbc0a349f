#pragma once

#include <limits>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "adic/errors.hpp"
#include "adic/numeric.hpp"
#include "adic/progressions.hpp"
#include "adic/stability.hpp"
#include "adic/step_weight.hpp"
#include "adic/weights.hpp"

namespace adic::io {

using json = nlohmann::ordered_json;

// Bignums go out as JSON numbers while they fit 64 bits, as decimal strings
// beyond that; readers accept both.
inline json int_to_json(const Int& x) {
    if (fits_int64(x)) return json(x.convert_to<long long>());
    return json(x.str());
}

inline Int int_from_json(const json& j, const std::string& field) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_number_unsigned()) return Int(j.get<unsigned long long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
            throw ParseError("field '" + field + "': not an integer: " + j.dump());
        }
    }
    throw ParseError("field '" + field + "': expected integer or decimal string");
}

// Exact rationals print as "p" or "p/q".
inline std::string rational_to_string(const Rational& q) {
    if (is_integer(q)) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

inline Rational rational_from_string(const std::string& text) {
    try {
        if (text.empty()) throw std::invalid_argument("empty");
        const Rational q(text);
        return q;
    } catch (const std::exception&) {
        throw ParseError("not a rational 'p' or 'p/q' string: '" + text + "'");
    }
}

inline Rational rational_from_json(const json& j, const std::string& field) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_unsigned()) return Rational(j.get<unsigned long long>());
    if (j.is_string()) {
        try {
            return rational_from_string(j.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError("field '" + field + "': " + e.what());
        }
    }
    throw ParseError("field '" + field + "': expected a rational 'p/q' string");
}

// Decimal rendering of a high-precision real with an explicit digit count.
template <class Real>
std::string real_to_string(const Real& v, int digits) {
    if (v == 0) return "0";
    return v.str(digits, std::ios_base::fmtflags(0));
}

// ---- certificate cache lines -------------------------------------------
// One JSON object per line: {m, n, t_mn, L, gamma, psi, verified_t_lo,
// verified_t_hi}. gamma is a "p/q" string (it is not always an integer).

inline json certificate_to_json(const stability::PsiCertificate& cert) {
    json j;
    j["m"] = int_to_json(cert.pair.m);
    j["n"] = int_to_json(cert.pair.n);
    j["t_mn"] = cert.t_mn;
    j["L"] = cert.L;
    j["gamma"] = rational_to_string(cert.gamma);
    j["psi"] = int_to_json(cert.psi);
    j["verified_t_lo"] = cert.verified_t_lo;
    j["verified_t_hi"] = cert.verified_t_hi;
    return j;
}

// gamma_seq is not part of the cache format; deserialized certificates carry
// only the stabilized gamma.
inline stability::PsiCertificate certificate_from_json(const json& j) {
    for (const char* field : {"m", "n", "t_mn", "L", "gamma", "psi", "verified_t_lo", "verified_t_hi"})
        if (!j.contains(field)) throw ParseError(std::string("certificate: missing field '") + field + "'");
    stability::CoprimePair pair(int_from_json(j["m"], "m"), int_from_json(j["n"], "n"));
    stability::PsiCertificate cert{pair};
    cert.t_mn = j["t_mn"].get<int>();
    cert.L = j["L"].get<int>();
    cert.gamma = rational_from_json(j["gamma"], "gamma");
    cert.psi = int_from_json(j["psi"], "psi");
    cert.verified_t_lo = j["verified_t_lo"].get<int>();
    cert.verified_t_hi = j["verified_t_hi"].get<int>();
    return cert;
}

// ---- progression witnesses ----------------------------------------------

inline json witness_to_json(const progressions::ProgressionWitness& w) {
    const Int phi_n = modarith::totient(w.n);
    const Int phi_m = modarith::totient(w.m);
    json j;
    j["m"] = int_to_json(w.m);
    j["n"] = int_to_json(w.n);
    j["t1"] = w.t1;
    j["k"] = int_to_json(w.k);
    j["t_prime"] = w.t_prime;
    j["t2"] = int_to_json(w.t2);
    j["j"] = int_to_json(w.j);
    // Both moduli overflow 64 bits routinely; always decimal strings.
    j["m_pow"] = pow_int(w.m, (Int(w.t1) * phi_n).convert_to<unsigned long>()).str();
    j["n_pow"] = pow_int(w.n, (w.t2 * phi_m).convert_to<unsigned long>()).str();
    return j;
}

// ---- step weights ---------------------------------------------------------
// {"breakpoints": ["0", "1/3", "1"], "values": ["4", "1"]}

inline weights::StepWeight step_weight_from_json(const json& j) {
    if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values"))
        throw ParseError("weight: expected an object with 'breakpoints' and 'values'");
    if (!j["breakpoints"].is_array() || !j["values"].is_array())
        throw ParseError("weight: 'breakpoints' and 'values' must be arrays");
    std::vector<Rational> bp, vals;
    for (std::size_t i = 0; i < j["breakpoints"].size(); ++i)
        bp.push_back(rational_from_json(j["breakpoints"][i], "breakpoints[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < j["values"].size(); ++i)
        vals.push_back(rational_from_json(j["values"][i], "values[" + std::to_string(i) + "]"));
    try {
        return weights::StepWeight(std::move(bp), std::move(vals));
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("weight: ") + e.what());
    }
}

inline json step_weight_to_json(const weights::StepWeight& w) {
    json j;
    j["breakpoints"] = json::array();
    for (const Rational& x : w.breakpoints()) j["breakpoints"].push_back(rational_to_string(x));
    j["values"] = json::array();
    for (const Rational& v : w.values()) j["values"].push_back(rational_to_string(v));
    return j;
}

// Parses weight JSON text, mapping parse failures to 1-based line/column.
inline weights::StepWeight parse_step_weight(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(std::string("weight JSON: ") + e.what(), line, column);
    }
    return step_weight_from_json(j);
}

// ---- characteristic reports ----------------------------------------------

inline json adic_interval_to_json(const weights::AdicInterval& a) {
    json j;
    j["base"] = a.base;
    j["generation"] = a.generation;
    j["index"] = int_to_json(a.index);
    return j;
}

template <class Real>
json report_to_json(const weights::CharacteristicReport<Real>& rep, int digits) {
    json j;
    j["class_tag"] = weights::class_tag_name(rep.class_tag);
    j["r"] = rep.r ? json(rational_to_string(*rep.r)) : json(nullptr);
    j["base"] = rep.base;
    j["g_max"] = rep.max_generation;
    j["value"] = real_to_string(rep.value, digits);
    j["precision"] = digits;
    j["exact"] = rep.exact ? json(rational_to_string(*rep.exact)) : json(nullptr);
    j["witness"] = adic_interval_to_json(rep.witness);
    return j;
}

} // namespace adic::io
