// adic: exact order-stability certificates, progression witnesses, grid
// sweeps, and adic weight analysis from the command line.
//
// Exit codes: 0 verified, 1 falsified, 2 inconclusive, 64 usage/validation,
// 65 k outside G_{t1}, 66 malformed weight file.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "adic/adic.hpp"

namespace {

using namespace adic;
using io::json;

constexpr int kExitVerified = 0;
constexpr int kExitFalsified = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitBadK = 65;
constexpr int kExitBadWeight = 66;

// --cache beats ADIC_CACHE; neither means no cache.
std::optional<std::string> cache_path(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("ADIC_CACHE"); env && *env) return std::string(env);
    return std::nullopt;
}

struct CacheKey {
    long long m, n;
    auto operator<=>(const CacheKey&) const = default;
};

// Append-only JSON lines keyed by (m, n); last entry wins, corrupt lines are
// skipped with a warning.
std::map<CacheKey, stability::PsiCertificate> load_cache(const std::string& path) {
    std::map<CacheKey, stability::PsiCertificate> out;
    std::ifstream in(path);
    if (!in) return out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            auto cert = io::certificate_from_json(json::parse(line));
            const CacheKey key{cert.pair.m.convert_to<long long>(),
                               cert.pair.n.convert_to<long long>()};
            out.insert_or_assign(key, std::move(cert));
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping cache line " << lineno << ": " << e.what() << "\n";
        }
    }
    return out;
}

void append_cache(const std::string& path, const std::vector<stability::PsiCertificate>& certs) {
    if (certs.empty()) return;
    std::ofstream out(path, std::ios::app);
    if (!out) {
        std::cerr << "warning: cache file '" << path << "' is not writable; continuing without\n";
        return;
    }
    for (const auto& c : certs) out << io::certificate_to_json(c).dump() << "\n";
}

Int parse_int_arg(const std::string& text, const std::string& name) {
    try {
        return Int(text);
    } catch (const std::exception&) {
        throw PreconditionError(name + ": not an integer: '" + text + "'");
    }
}

stability::CoprimePair make_pair_cli(const Int& m, const Int& n, const std::string& cmd) {
    try {
        return stability::CoprimePair(m, n);
    } catch (const PreconditionError&) {
        if (n > m && m >= 2 && modarith::gcd(m, n) == 1) {
            throw PreconditionError("invalid pair (m, n) = (" + m.str() + ", " + n.str() +
                                    "): m must exceed n; did you mean `adic " + cmd + " " + n.str() +
                                    " " + m.str() + "`?");
        }
        throw;
    }
}

// ---- psi ------------------------------------------------------------------

struct PsiOptions {
    std::string m_text, n_text;
    int t_window = 5;
    int probe_window = 4;
    int ell_cap = 64;
    std::string cache;
};

int run_psi(const PsiOptions& opt) {
    const Int m = parse_int_arg(opt.m_text, "m");
    const Int n = parse_int_arg(opt.n_text, "n");
    auto pair = make_pair_cli(m, n, "psi");
    if (opt.t_window < 3) throw PreconditionError("--t-window must be >= 3");

    const auto cache = cache_path(opt.cache);
    std::map<CacheKey, stability::PsiCertificate> cached;
    if (cache) cached = load_cache(*cache);
    const CacheKey key{m.convert_to<long long>(), n.convert_to<long long>()};

    stability::PsiCertificate cert = [&] {
        if (auto it = cached.find(key); it != cached.end()) return it->second;
        return stability::compute_psi(pair, opt.probe_window, opt.ell_cap);
    }();

    const int target_hi = cert.t_mn + cert.L + opt.t_window;
    bool grew = false;
    if (cert.verified_t_hi < target_hi) {
        const auto check = stability::verify_stability_window(cert, cert.t_mn + cert.L + 1, target_hi);
        if (!check) {
            std::cerr << "falsified: m^t/O_t deviates from psi at t = " << check.first_failing_t
                      << "\n";
            std::cout << io::certificate_to_json(cert).dump() << "\n";
            return kExitFalsified;
        }
        grew = true;
    }
    if (!stability::verify_psi_congruence(cert)) {
        std::cerr << "falsified: n^phi(m) != 1 mod psi\n";
        std::cout << io::certificate_to_json(cert).dump() << "\n";
        return kExitFalsified;
    }
    if (cache && (grew || cached.find(key) == cached.end())) append_cache(*cache, {cert});
    std::cout << io::certificate_to_json(cert).dump() << "\n";
    return kExitVerified;
}

// ---- witness ----------------------------------------------------------------

struct WitnessOptions {
    std::string m_text, n_text, k_text;
    int t1 = 1;
    int count = 3;
    int probe_window = 4;
    int ell_cap = 64;
    bool allow_below_threshold = false;
};

int run_witness(const WitnessOptions& opt) {
    const Int m = parse_int_arg(opt.m_text, "m");
    const Int n = parse_int_arg(opt.n_text, "n");
    const Int k = parse_int_arg(opt.k_text, "k");
    auto pair = make_pair_cli(m, n, "witness");
    if (opt.t1 < 1) throw PreconditionError("t1 must be >= 1");
    if (opt.count < 1) throw PreconditionError("count must be >= 1");

    const auto cert = stability::compute_psi(pair, opt.probe_window, opt.ell_cap);
    const int threshold = stability::min_admissible_t1(cert);
    const bool below = opt.t1 < threshold;
    if (below && !opt.allow_below_threshold)
        throw PreconditionError("t1 = " + std::to_string(opt.t1) + " is below the admissible threshold " +
                                std::to_string(threshold) +
                                " for this pair; pass --allow-below-threshold to experiment");

    if (!progressions::k_in_G(cert, opt.t1, k)) {
        std::cerr << "k = " << k.str() << " is not in G_{t1}(m, n) (needs 1 <= k <= m^{t1*phi(n)} and "
                  << "k = 1 mod " << cert.psi.str() << "); nearest valid k is "
                  << progressions::nearest_valid_k(cert, opt.t1, k).str() << "\n";
        return kExitBadK;
    }

    json out = json::array();
    try {
        const auto table = progressions::build_power_table(cert, opt.t1, opt.allow_below_threshold);
        const auto witnesses = progressions::generate_witnesses(table, k, opt.count);
        for (const auto& w : witnesses) {
            if (!progressions::verify_witness(w)) {
                std::cerr << "falsified: generated witness failed re-verification\n";
                return kExitFalsified;
            }
            json jw = io::witness_to_json(w);
            if (below) jw["below_threshold"] = true;
            out.push_back(std::move(jw));
        }
    } catch (const ConsistencyError& e) {
        if (below) {
            // below the proof threshold nothing is asserted; report and leave
            json report;
            report["below_threshold"] = true;
            report["outcome"] = std::string("failed: ") + e.what();
            std::cout << report.dump(2) << "\n";
            return kExitVerified;
        }
        throw;
    }
    std::cout << out.dump(2) << "\n";
    return kExitVerified;
}

// ---- sweep ------------------------------------------------------------------

struct SweepOptions {
    int m_max = 0;
    int n_max = 0; // 0: defaults to m_max - 1
    int t_window = 5;
    int probe_window = 4;
    int ell_cap = 64;
    bool parallel = false;
    std::string cache;
};

struct SweepRow {
    int m = 0, n = 0;
    bool inconclusive = false;
    std::optional<stability::PsiCertificate> cert;
    bool congruence_ok = false;
    bool stability_ok = false;
    bool from_cache = false;
    std::string error; // non-empty: computation aborted
};

void run_sweep_row(SweepRow& row, const std::map<CacheKey, stability::PsiCertificate>& cached,
                   const SweepOptions& opt) {
    try {
        stability::CoprimePair pair(row.m, row.n);
        const CacheKey key{row.m, row.n};
        if (auto it = cached.find(key); it != cached.end()) {
            row.cert = it->second;
            row.from_cache = true;
        } else {
            row.cert = stability::compute_psi(pair, opt.probe_window, opt.ell_cap);
        }
        auto& cert = *row.cert;
        const int target_hi = cert.t_mn + cert.L + opt.t_window;
        if (cert.verified_t_hi >= target_hi) {
            row.stability_ok = true;
        } else {
            row.from_cache = false; // window grows, cache line goes stale
            row.stability_ok =
                static_cast<bool>(stability::verify_stability_window(cert, cert.t_mn + cert.L + 1, target_hi));
        }
        row.congruence_ok = stability::verify_psi_congruence(cert);
    } catch (const InconclusiveError&) {
        row.inconclusive = true;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
}

int run_sweep(const SweepOptions& opt) {
    if (opt.m_max < 3) throw PreconditionError("--m-max must be >= 3");
    const int n_max = opt.n_max == 0 ? opt.m_max - 1 : opt.n_max;
    if (n_max < 2 || n_max >= opt.m_max)
        throw PreconditionError("--n-max must satisfy 2 <= n_max < m_max");
    if (opt.t_window < 3) throw PreconditionError("--t-window must be >= 3");

    const auto cache = cache_path(opt.cache);
    std::map<CacheKey, stability::PsiCertificate> cached;
    if (cache) cached = load_cache(*cache);

    std::vector<SweepRow> rows;
    for (int m = 3; m <= opt.m_max; ++m)
        for (int n = 2; n < m && n <= n_max; ++n)
            if (modarith::gcd(m, n) == 1) rows.push_back(SweepRow{m, n});

    if (opt.parallel) {
        std::atomic<std::size_t> next{0};
        const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
        std::vector<std::thread> pool;
        for (unsigned wi = 0; wi < workers; ++wi)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= rows.size()) return;
                    run_sweep_row(rows[i], cached, opt);
                }
            });
        for (auto& th : pool) th.join();
    } else {
        for (auto& row : rows) run_sweep_row(row, cached, opt);
    }

    // deterministic emission in (m, n) order regardless of scheduling
    std::cout << "m,n,t_mn,L,gamma,psi,congruence_ok,stability_ok\n";
    bool any_falsified = false, any_inconclusive = false;
    std::vector<stability::PsiCertificate> fresh;
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            std::cerr << "error at (" << row.m << ", " << row.n << "): " << row.error << "\n";
            return kExitFalsified;
        }
        if (row.inconclusive) {
            any_inconclusive = true;
            std::cout << row.m << "," << row.n << ",,,,,false,false\n";
            continue;
        }
        const auto& cert = *row.cert;
        std::cout << row.m << "," << row.n << "," << cert.t_mn << "," << cert.L << ","
                  << io::rational_to_string(cert.gamma) << "," << cert.psi.str() << ","
                  << (row.congruence_ok ? "true" : "false") << ","
                  << (row.stability_ok ? "true" : "false") << "\n";
        if (!row.congruence_ok || !row.stability_ok) any_falsified = true;
        if (!row.from_cache) fresh.push_back(cert);
    }
    if (cache) append_cache(*cache, fresh);
    if (any_falsified) return kExitFalsified;
    if (any_inconclusive) return kExitInconclusive;
    return kExitVerified;
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeOptions {
    std::string weight_file;
    int base = 2;
    int g_max = 4;
    std::vector<std::string> classes;
    std::string r_text = "2";
    std::vector<std::string> module_args; // a b q alpha
    int precision = 50;
    bool doubling = false;
    int grid_base = 0; // 0: same as base
    std::string bmo_domain = "log";
};

template <class Real>
int run_analyze_typed(const AnalyzeOptions& opt, const weights::StepWeight& w,
                      const std::optional<weights::ModuleFamilyParams>& module_params) {
    const Rational r = io::rational_from_string(opt.r_text);
    json out;
    out["precision"] = opt.precision;
    out["base"] = opt.base;
    out["g_max"] = opt.g_max;
    out["reports"] = json::array();
    for (const std::string& cls : opt.classes) {
        if (cls == "ar") {
            out["reports"].push_back(io::report_to_json(
                weights::characteristic_Ar<Real>(w, opt.base, opt.g_max, r), opt.precision));
        } else if (cls == "rhr") {
            out["reports"].push_back(io::report_to_json(
                weights::characteristic_RHr<Real>(w, opt.base, opt.g_max, r), opt.precision));
        } else if (cls == "a1") {
            out["reports"].push_back(io::report_to_json(
                weights::characteristic_extremal<Real>(w, opt.base, opt.g_max, weights::ExtremalClass::A1),
                opt.precision));
        } else if (cls == "rhinf") {
            out["reports"].push_back(io::report_to_json(
                weights::characteristic_extremal<Real>(w, opt.base, opt.g_max,
                                                       weights::ExtremalClass::RHinf),
                opt.precision));
        } else if (cls == "bmo") {
            out["reports"].push_back(io::report_to_json(
                weights::bmo_norm_adic<Real>(w, opt.base, opt.g_max, opt.bmo_domain == "log"),
                opt.precision));
        } else {
            throw PreconditionError("unknown --class '" + cls + "' (expected ar, rhr, a1, rhinf, bmo)");
        }
    }

    if (module_params) {
        const auto& p = *module_params;
        const auto cf = weights::module_closed_forms<Real>(p);
        const weights::RatInterval host(p.host.lower(), p.host.upper());
        const Real measured_avg = weights::log_average<Real>(w, host);
        const Real measured_osc = weights::log_oscillation<Real>(w, host);
        auto rel = [](const Real& a, const Real& b) {
            using boost::multiprecision::abs;
            if (b == 0) return abs(a);
            return abs(a - b) / abs(b);
        };
        json jm;
        jm["a"] = io::rational_to_string(p.a);
        jm["b"] = io::rational_to_string(p.b);
        jm["q"] = p.q;
        jm["alpha"] = p.alpha;
        jm["host"] = io::adic_interval_to_json(p.host);
        jm["closed_form"]["avg_f"] = io::real_to_string(cf.avg_f, opt.precision);
        jm["closed_form"]["osc_lower"] = io::real_to_string(cf.osc_lower, opt.precision);
        jm["closed_form"]["osc_full"] = io::real_to_string(cf.osc_full, opt.precision);
        jm["measured"]["avg_f"] = io::real_to_string(measured_avg, opt.precision);
        jm["measured"]["osc_full"] = io::real_to_string(measured_osc, opt.precision);
        jm["relative_delta"]["avg_f"] = io::real_to_string(rel(measured_avg, cf.avg_f), 3);
        jm["relative_delta"]["osc_full"] = io::real_to_string(rel(measured_osc, cf.osc_full), 3);
        out["module"] = std::move(jm);
    }

    if (opt.doubling) {
        const int gb = opt.grid_base == 0 ? opt.base : opt.grid_base;
        const Rational ratio = weights::doubling_ratio_scan(w, opt.g_max, gb);
        json jd;
        jd["grid_base"] = gb;
        jd["g_max"] = opt.g_max;
        jd["exact"] = io::rational_to_string(ratio);
        jd["value"] = io::real_to_string(to_real<Real>(ratio), opt.precision);
        out["doubling"] = std::move(jd);
    }

    std::cout << out.dump(2) << "\n";
    return kExitVerified;
}

int run_analyze(const AnalyzeOptions& opt) {
    if (opt.base < 2) throw PreconditionError("--base must be >= 2");
    if (opt.g_max < 0) throw PreconditionError("--g-max must be >= 0");
    if (opt.precision < 10 || opt.precision > 200)
        throw PreconditionError("--precision must be in [10, 200]");
    if (opt.bmo_domain != "log" && opt.bmo_domain != "direct")
        throw PreconditionError("--bmo-domain must be 'log' or 'direct'");
    if (opt.classes.empty() && !opt.doubling && opt.module_args.empty())
        throw PreconditionError("nothing to do: pass --class, --module and/or --doubling");

    std::optional<weights::ModuleFamilyParams> module_params;
    std::optional<weights::StepWeight> w;
    if (!opt.module_args.empty()) {
        if (!opt.weight_file.empty())
            throw PreconditionError("pass either a weight file or --module, not both");
        weights::ModuleFamilyParams p{io::rational_from_string(opt.module_args[0]),
                                      io::rational_from_string(opt.module_args[1]),
                                      std::stoi(opt.module_args[2]), std::stoi(opt.module_args[3]),
                                      weights::AdicInterval(opt.base, 0, 0)};
        weights::validate(p);
        module_params = p;
        w = weights::module_pair_weight(p);
    } else {
        if (opt.weight_file.empty())
            throw PreconditionError("expected a weight file path (or '-' for stdin), or --module");
        std::string text;
        if (opt.weight_file == "-") {
            std::ostringstream ss;
            ss << std::cin.rdbuf();
            text = ss.str();
        } else {
            std::ifstream in(opt.weight_file);
            if (!in) throw PreconditionError("cannot open weight file '" + opt.weight_file + "'");
            std::ostringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        w = io::parse_step_weight(text);
    }

    if (opt.precision <= 50) return run_analyze_typed<Real50>(opt, *w, module_params);
    if (opt.precision <= 100) return run_analyze_typed<Real100>(opt, *w, module_params);
    return run_analyze_typed<Real200>(opt, *w, module_params);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact arithmetic for coprime-base order stability, progression witnesses, "
                 "and adic weight analysis"};
    app.require_subcommand(1);

    PsiOptions psi_opt;
    auto* psi = app.add_subcommand("psi", "certify psi(m, n) with a verified stability window");
    psi->add_option("m", psi_opt.m_text, "larger base m")->required();
    psi->add_option("n", psi_opt.n_text, "smaller base n")->required();
    psi->add_option("--t-window", psi_opt.t_window, "consecutive t values to verify (>= 3)");
    psi->add_option("--probe-window", psi_opt.probe_window, "equal gamma entries declaring stabilization");
    psi->add_option("--ell-cap", psi_opt.ell_cap, "give up (inconclusive) beyond this l");
    psi->add_option("--cache", psi_opt.cache, "JSON-lines certificate cache path");

    WitnessOptions wit_opt;
    auto* wit = app.add_subcommand("witness", "generate verified progression witnesses (t2, j)");
    wit->add_option("m", wit_opt.m_text)->required();
    wit->add_option("n", wit_opt.n_text)->required();
    wit->add_option("t1", wit_opt.t1)->required();
    wit->add_option("k", wit_opt.k_text)->required();
    wit->add_option("count", wit_opt.count, "how many witnesses (default 3)");
    wit->add_flag("--allow-below-threshold", wit_opt.allow_below_threshold,
                  "experiment below the admissible t1 threshold (results reported, not asserted)");
    wit->add_option("--probe-window", wit_opt.probe_window);
    wit->add_option("--ell-cap", wit_opt.ell_cap);

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "CSV table over all coprime pairs n < m <= m-max");
    sweep->add_option("--m-max", sweep_opt.m_max, "largest m")->required();
    sweep->add_option("--n-max", sweep_opt.n_max, "largest n (default m-max - 1)");
    sweep->add_option("--t-window", sweep_opt.t_window, "consecutive t values per pair (>= 3)");
    sweep->add_option("--probe-window", sweep_opt.probe_window);
    sweep->add_option("--ell-cap", sweep_opt.ell_cap);
    sweep->add_flag("--parallel", sweep_opt.parallel, "evaluate pairs concurrently");
    sweep->add_option("--cache", sweep_opt.cache, "JSON-lines certificate cache path");

    AnalyzeOptions an_opt;
    auto* an = app.add_subcommand("analyze", "weight characteristics over an adic tree");
    an->add_option("weight_file", an_opt.weight_file, "weight JSON path ('-' for stdin)");
    an->add_option("--base", an_opt.base, "adic base (default 2)");
    an->add_option("--g-max", an_opt.g_max, "deepest generation to scan (default 4)");
    an->add_option("--class", an_opt.classes, "ar | rhr | a1 | rhinf | bmo (repeatable)");
    an->add_option("--r", an_opt.r_text, "exponent r for ar/rhr (rational, default 2)");
    an->add_option("--module", an_opt.module_args, "a b q alpha: analyze the paired-value module weight")
        ->expected(4);
    an->add_option("--precision", an_opt.precision, "significant digits (10..200, default 50)");
    an->add_flag("--doubling", an_opt.doubling, "also scan adjacent-cell mass ratios");
    an->add_option("--grid-base", an_opt.grid_base, "grid base for --doubling (default --base)");
    an->add_option("--bmo-domain", an_opt.bmo_domain, "bmo source: log (f = log w) or direct (f = w)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (psi->parsed()) return run_psi(psi_opt);
        if (wit->parsed()) return run_witness(wit_opt);
        if (sweep->parsed()) return run_sweep(sweep_opt);
        if (an->parsed()) return run_analyze(an_opt);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what();
        if (e.line > 0) std::cerr << " (line " << e.line << ", column " << e.column << ")";
        std::cerr << "\n";
        return kExitBadWeight;
    } catch (const InconclusiveError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const ConsistencyError& e) {
        std::cerr << "falsified: " << e.what() << "\n";
        return kExitFalsified;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
