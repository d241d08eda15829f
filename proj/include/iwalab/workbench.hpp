#pragma once

// Command implementations behind the iwalab executable. Each command takes file
// contents and options and returns its output and exit code; no I/O happens here.
//
// Exit codes: 0 pass, 1 verdict fail, 2 usage or parse error, 3 precision.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "iwalab/kernel.hpp"
#include "iwalab/pairing.hpp"
#include "iwalab/spec_file.hpp"
#include "iwalab/tower.hpp"

namespace iwalab {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitPrecision = 3 };

struct CommandResult {
    int code = kExitPass;
    std::string out;
    std::string err;
};

inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

namespace detail {

/// Runs fn(ctx) with the narrowest backend that holds p^N.
template <class Fn>
decltype(auto) with_backend(const ModuleSpecFile& f, Fn&& fn) {
    if (f.fits_word()) return fn(f.context<Word>());
    return fn(f.context<BigInt>());
}

template <ResidueInt Int>
std::string invariant_factors_cell(const FiniteLevel<Int>& L) {
    if (L.invariant_exponents().empty()) return "1";
    std::string out;
    for (int e : L.invariant_exponents()) {
        if (!out.empty()) out += ',';
        out += to_decimal(L.context().p_power(e) == 0 ? L.context().modulus() : L.context().p_power(e));
    }
    return out;
}

template <ResidueInt Int>
std::string group_vec(const FiniteLevel<Int>& L, const Vec<Int>& x) {
    return format_vec(L.group_coords(x));
}

inline bool env_strict() {
    const char* v = std::getenv("IWALAB_STRICT");
    return v && std::string_view(v) == "1";
}

/// Comma separated integers, optionally bracketed.
inline std::vector<std::string> split_coeffs(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != '[' && c != ']' && c != ' ') s += c;
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(s);
    while (std::getline(in, cell, ',')) {
        if (cell.empty()) throw ParseError("--poly: empty coefficient");
        out.push_back(cell);
    }
    if (out.empty()) throw ParseError("--poly: no coefficients");
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------- prepare

struct PrepareOptions {
    std::string poly;
    unsigned p = 3;
    int precision = 10;
    std::size_t degree_cap = 16;
};

/// With no file text the context comes from the options.
inline CommandResult cmd_prepare(const std::optional<std::string>& file_text, const PrepareOptions& opt) {
    CommandResult r;
    try {
        ModuleSpecFile spec;
        if (file_text) {
            spec = parse_module_spec(*file_text);
        } else {
            if (!is_odd_prime(opt.p)) throw ParseError("--p: not an odd prime");
            if (opt.precision < 1) throw ParseError("--precision: must be >= 1");
            spec.p = opt.p;
            spec.precision_exp = opt.precision;
            spec.degree_cap = opt.degree_cap;
        }
        const auto cs = detail::split_coeffs(opt.poly);
        r.out = detail::with_backend(spec, [&](const auto& ctx) {
            using Int = std::decay_t<decltype(ctx.modulus())>;
            std::vector<Int> v;
            for (std::size_t i = 0; i < cs.size(); ++i) {
                try {
                    v.push_back(ctx.from_decimal(cs[i]));
                } catch (const ParseError& e) {
                    throw ParseError("--poly[" + std::to_string(i) + "]: " + e.what());
                }
            }
            for (std::size_t i = spec.degree_cap; i < v.size(); ++i)
                if (v[i] != 0) throw InsufficientDegreeCap("--poly has a nonzero coefficient at T^" + std::to_string(i));
            LambdaTrunc<Int> f(ctx, spec.degree_cap, v);
            auto w = weierstrass_prepare(f);
            const auto back = recombine(w);
            const auto residual = (back - f).to_poly();
            std::ostringstream os;
            os << "p\t" << ctx.p() << "\nprecision_exp\t" << ctx.precision() << "\ndegree_cap\t" << spec.degree_cap << '\n';
            os << "mu\t" << w.mu << "\nlambda\t" << w.lambda() << '\n';
            os << "P\t" << w.distinguished.to_string() << '\n';
            os << "u\t" << w.unit.to_poly().to_string() << '\n';
            os << "residual\t" << residual.to_string() << '\n';
            return os.str();
        });
    } catch (const ParseError& e) {
        r.code = kExitUsage;
        r.err = std::string("parse error: ") + e.what() + "\n";
    } catch (const PrecisionExhausted& e) {
        r.code = kExitPrecision;
        r.err = std::string("PrecisionExhausted: ") + e.what() + "\n";
    } catch (const InsufficientDegreeCap& e) {
        r.code = kExitPrecision;
        r.err = std::string("InsufficientDegreeCap: ") + e.what() + "\n";
    } catch (const Error& e) {
        r.code = kExitUsage;
        r.err = std::string("error: ") + e.what() + "\n";
    }
    return r;
}

// ---------------------------------------------------------------- levels

struct LevelsOptions {
    int from = 1;
    int to = 4;
    bool strict = false;
};

template <ResidueInt Int>
std::string levels_table(const ElementaryModule<Int>& M, int from, int to, bool* any_flag = nullptr) {
    std::ostringstream os;
    os << "# p=" << M.context().p() << " k=" << M.params().k << " N=" << M.context().precision() << '\n';
    os << "level\tinvariant_factors\tsize_exp\tp_rank\tflags\n";
    bool flagged = false;
    for (int n = from; n <= to; ++n) {
        auto L = finite_level(M, n);
        flagged = flagged || L->unresolved();
        os << n << '\t' << detail::invariant_factors_cell(*L) << '\t' << L->size_exp() << '\t' << L->p_rank() << '\t'
           << (L->unresolved() ? "unresolved" : "-") << '\n';
    }
    if (any_flag) *any_flag = flagged;
    return os.str();
}

inline CommandResult cmd_levels(const std::string& file_text, const LevelsOptions& opt) {
    CommandResult r;
    try {
        if (opt.from < 0 || opt.from > opt.to) throw ParseError("levels need 0 <= --from <= --to");
        const auto spec = parse_module_spec(file_text);
        bool flagged = false;
        r.out = detail::with_backend(spec, [&](const auto& ctx) {
            return levels_table(spec.build(ctx), opt.from, opt.to, &flagged);
        });
        if (flagged && (opt.strict || detail::env_strict())) {
            r.code = kExitPrecision;
            r.err = "unresolved orders present (strict mode)\n";
        }
    } catch (const ParseError& e) {
        r.code = kExitUsage;
        r.err = std::string("parse error: ") + e.what() + "\n";
    } catch (const Error& e) {
        r.code = kExitUsage;
        r.err = std::string("error: ") + e.what() + "\n";
    }
    return r;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
    std::string suite;
    int from = 1;
    int to = 4;
    std::uint64_t seed = 1;
    bool strict = false;
    int samples = 100;
};

inline const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> s = {"circ", "fukuda", "ab", "sf", "tpart", "propf", "pairing", "reversal"};
    return s;
}

struct VerdictRow {
    std::string suite;
    std::string level;
    std::string target;
    std::string verdict;  // PASS FAIL FLAGGED SKIP
    std::string detail;
};

struct RunReport {
    std::string command;
    std::string suite;
    std::string levels;
    std::uint64_t digest = 0;
    std::uint64_t seed = 0;
    std::vector<VerdictRow> rows;
    std::string witness;

    int count(const char* v) const {
        int c = 0;
        for (const auto& r : rows) c += r.verdict == v;
        return c;
    }
    bool failed() const { return count("FAIL") > 0; }

    std::string render() const {
        std::ostringstream os;
        os << "# command=" << command << " suite=" << suite << " levels=" << levels << " seed=" << seed << '\n';
        os << "# input_digest=fnv1a64:" << hex64(digest) << '\n';
        os << "suite\tlevel\ttarget\tverdict\tdetail\n";
        for (const auto& r : rows)
            os << r.suite << '\t' << r.level << '\t' << r.target << '\t' << r.verdict << '\t'
               << (r.detail.empty() ? "-" : r.detail) << '\n';
        os << "# verdict=" << (failed() ? "FAIL" : "PASS") << " rows=" << rows.size() << " pass=" << count("PASS")
           << " fail=" << count("FAIL") << " flagged=" << count("FLAGGED") << " skipped=" << count("SKIP") << '\n';
        if (!witness.empty()) os << "# witness=" << witness << '\n';
        return os.str();
    }
};

namespace detail {

template <ResidueInt Int>
class SuiteRunner {
public:
    SuiteRunner(const ModuleSpecFile& spec, const ElementaryModule<Int>& M, const VerifyOptions& opt, RunReport& rep)
        : spec_(spec), M_(M), opt_(opt), rep_(rep), rng_(opt.seed) {}

    void run() {
        const auto& s = opt_.suite;
        if (s == "circ") circ();
        else if (s == "fukuda") fukuda();
        else if (s == "ab") ab();
        else if (s == "sf") sf();
        else if (s == "tpart") tpart();
        else if (s == "propf") propf();
        else if (s == "pairing") pairing();
        else if (s == "reversal") reversal();
    }

private:
    const LevelPtr<Int>& level(int n) {
        auto it = cache_.find(n);
        if (it == cache_.end()) it = cache_.emplace(n, finite_level(M_, n)).first;
        return it->second;
    }

    void add(int n, std::string target, bool pass, std::string detail, std::string witness = {}) {
        add_row(std::to_string(n), std::move(target), pass ? "PASS" : "FAIL", std::move(detail));
        if (!pass && rep_.witness.empty() && !witness.empty()) rep_.witness = witness;
    }
    void add_row(std::string level, std::string target, std::string verdict, std::string detail) {
        rep_.rows.push_back({opt_.suite, std::move(level), std::move(target), std::move(verdict), std::move(detail)});
    }
    bool flagged(int n, int m, const std::string& target) {
        if (!level(n)->unresolved() && !level(m)->unresolved()) return false;
        add_row(std::to_string(n), target, "FLAGGED", "unresolved orders");
        return true;
    }

    void circ() {
        for (int n = opt_.from; n < opt_.to; ++n) {
            if (flagged(n, n + 1, std::to_string(n + 1))) continue;
            auto c = verify_circ(*level(n), *level(n + 1));
            std::string d;
            if (!c.norm_lift_ok) d += "N o iota != p; ";
            if (!c.lift_norm_ok) d += "iota o N != nu; ";
            add(n, std::to_string(n + 1), c.ok(), d);
        }
    }

    void fukuda() {
        GrowthSeries series{M_.context().p(), M_.params().k, {}};
        for (int n = opt_.from; n <= opt_.to; ++n) {
            auto L = level(n);
            series.entries.push_back({n, L->size_exp(), L->p_rank(), L->unresolved()});
        }
        const std::string range = std::to_string(opt_.from) + ".." + std::to_string(opt_.to);
        try {
            auto est = detect_stabilization(series);
            auto rf = rank_freeze_check(series);
            const bool match = est.status != EstimateStatus::Undetermined && est.lambda == M_.lambda_invariant() &&
                               est.mu == M_.mu_invariant();
            std::ostringstream d;
            d << "status=" << to_string(est.status) << " n0=" << est.n0 << " lambda=" << est.lambda << " mu=" << est.mu
              << " nu=" << est.nu << " expected_lambda=" << M_.lambda_invariant()
              << " expected_mu=" << M_.mu_invariant() << " rank_freeze=" << (rf.ok ? "ok" : "violated");
            add_row(range, "-", match && rf.ok ? "PASS" : "FAIL", d.str());
            if (!(match && rf.ok) && rep_.witness.empty()) rep_.witness = "series " + growth_inline(series);
        } catch (const InsufficientData& e) {
            add_row(range, "-", "FLAGGED", e.what());
        } catch (const InconsistentSeries& e) {
            add_row(range, "-", "FAIL", e.what());
            if (rep_.witness.empty()) rep_.witness = "series " + growth_inline(series);
        }
    }

    static std::string growth_inline(const GrowthSeries& s) {
        std::string out;
        for (const auto& e : s.entries) out += (out.empty() ? "" : ",") + std::to_string(e.size_exp);
        return out;
    }

    void ab() {
        for (int n = opt_.from; n < opt_.to; ++n) {
            if (flagged(n, n + 1, std::to_string(n + 1))) continue;
            auto c = lemma_ab_check(level(n), level(n + 1), rng_, opt_.samples);
            if (!c.applicable) {
                add_row(std::to_string(n), std::to_string(n + 1), "SKIP", "hypotheses not met");
                continue;
            }
            add(n, std::to_string(n + 1), c.pass, c.detail, c.detail);
        }
    }

    void sf() {
        for (int n = opt_.from; n < opt_.to; ++n) {
            if (flagged(n, n + 1, std::to_string(n + 1))) continue;
            auto tr = transition(level(n), level(n + 1));
            std::ostringstream d;
            d << "k=" << tr.growth_factor << " " << to_string(tr.classification);
            if (tr.classification != TransitionType::Stable) {
                add_row(std::to_string(n), std::to_string(n + 1), "SKIP", d.str() + " (not stable)");
                continue;
            }
            auto so = stable_ordering_check(level(n), level(n + 1), rng_, opt_.samples);
            auto ss = semistable_check(level(n), level(n + 1));
            const bool ok = so.pass && ss.pass && tr.lift_injective;
            if (!tr.lift_injective) d << "; lift not injective";
            if (!so.pass) d << "; " << so.detail;
            if (!ss.pass) d << "; " << ss.detail;
            add(n, std::to_string(n + 1), ok, d.str(), so.pass ? ss.detail : so.detail);
        }
    }

    void tpart() {
        for (int n = opt_.from; n <= opt_.to; ++n) {
            if (!M_.mu_free()) {
                add_row(std::to_string(n), "-", "SKIP", "mu summands present");
                continue;
            }
            if (flagged(n, n, "-")) continue;
            auto sp = split_t_part(level(n));
            std::ostringstream d;
            d << "socle_rank=" << sp.socle_T.lattice_rank() << " complement_rank=" << sp.complement.lattice_rank();
            if (!sp.lattice_direct) d << "; lattices not complementary";
            if (sp.level_direct && !*sp.level_direct) d << "; not a direct sum in M_n";
            add(n, "-", sp.verified, d.str(), d.str());
        }
    }

    void propf() {
        const int H = opt_.to;
        const int c = spec_.subgroup_p_power.value_or(0);
        if (level(H)->unresolved()) {
            add_row(std::to_string(H), "-", "FLAGGED", "unresolved orders at the horizon");
            return;
        }
        auto A = Subgroup<Int>::p_power_multiple(level(H), c);
        for (int n = opt_.from; n < H; ++n) {
            if (flagged(n, H, std::to_string(H))) continue;
            auto rep = property_f_check(A, level(n));
            std::ostringstream d;
            d << "A=p^" << c << "M_" << H << " ker=" << format_exps(M_.context().p(), rep.kernel_part_exps)
              << " omegaA=" << format_exps(M_.context().p(), rep.omega_part_exps);
            std::string w;
            if (rep.witness) w = "level " + std::to_string(H) + " x=" + group_vec(*level(H), *rep.witness);
            add(n, std::to_string(H), rep.pass, d.str(), w);
        }
    }

    void pairing() {
        std::optional<Pairing<Int>> next;
        for (int n = opt_.from; n <= opt_.to; ++n) {
            if (level(n)->unresolved()) {
                add_row(std::to_string(n), "-", "FLAGGED", "unresolved orders");
                continue;
            }
            auto P = build_pairing(level(n), M_.params());
            const bool nd = is_nondegenerate(P.table);
            bool refl = true;
            std::string refl_witness;
            for (int t = 0; t < 20 && refl; ++t) {
                const std::size_t deg = rng_.below(5);
                std::vector<Int> cs(deg + 1);
                for (auto& c : cs) c = rng_.residue_below(M_.context().modulus());
                LambdaTrunc<Int> lam(M_.context(), deg + 1, cs);
                auto rr = check_reflection(P, lam, rng_, 5);
                if (!rr.ok()) {
                    refl = false;
                    refl_witness = "lambda=" + lam.to_poly().to_string();
                }
            }
            const bool dd = double_dual_check(P);
            std::ostringstream d;
            d << "nondegenerate=" << (nd ? "yes" : "no") << " reflection=" << (refl ? "yes" : "no")
              << " double_dual=" << (dd ? "yes" : "no");
            bool ok = nd && refl && dd;
            std::string w = refl_witness;
            if (n < opt_.to && !level(n + 1)->unresolved()) {
                auto Pm = build_pairing(level(n + 1), M_.params());
                auto cr = check_projective_compat(level(n), Pm, rng_);
                d << " compat_" << n + 1 << "=" << (cr.ok ? "yes" : "no") << (cr.exhaustive ? "(exhaustive)" : "(sampled)");
                ok = ok && cr.ok;
                if (!cr.ok && w.empty()) w = "projective compatibility fails between levels " + std::to_string(n) +
                                             " and " + std::to_string(n + 1);
            }
            add(n, "-", ok, d.str(), w);
        }
    }

    void reversal() {
        const auto& ps = M_.poly_summands();
        const auto& f = ps.front().f;
        const int k = ps.front().e;
        for (int n = opt_.from; n <= opt_.to; ++n) {
            if (level(n)->unresolved()) {
                add_row(std::to_string(n), "-", "FLAGGED", "unresolved orders");
                continue;
            }
            auto P = build_pairing(level(n), M_.params());
            auto rv = check_order_reversal(P, f, k);
            if (rv.degenerate) {
                add_row(std::to_string(n), "-", "PASS", "k=1, vacuous");
                continue;
            }
            std::ostringstream d;
            d << "k=" << k << " vanishing_for=j+l<=" << rv.vanishing_up_to
              << " threshold_shaped=" << (rv.threshold_shaped ? "yes" : "no")
              << " rule_j+l>k+1=" << (rv.stated_rule_holds ? "holds" : "fails")
              << " boundary_witness=" << (rv.boundary_witness ? "yes" : "no")
              << " annihilators=" << (rv.annihilator_correspondence ? "yes" : "no");
            std::string w;
            for (int j = 1; j <= k + 1 && w.empty(); ++j)
                for (int l = 1; l <= k + 1 && w.empty(); ++l)
                    if (j + l > k + 1 && !rv.vanishes[j - 1][l - 1])
                        w = "level " + std::to_string(n) + " j=" + std::to_string(j) + " l=" + std::to_string(l) +
                            " pairs nontrivially";
            add(n, "-", rv.stated_rule_holds && rv.annihilator_correspondence, d.str(), w);
        }
    }

    const ModuleSpecFile& spec_;
    const ElementaryModule<Int>& M_;
    const VerifyOptions& opt_;
    RunReport& rep_;
    Rng rng_;
    std::map<int, LevelPtr<Int>> cache_;
};

}  // namespace detail

inline CommandResult cmd_verify(const std::string& file_text, const VerifyOptions& opt) {
    CommandResult r;
    const auto& suites = verify_suites();
    if (std::find(suites.begin(), suites.end(), opt.suite) == suites.end()) {
        r.code = kExitUsage;
        r.err = "unknown suite '" + opt.suite + "' (expected circ|fukuda|ab|sf|tpart|propf|pairing|reversal)\n";
        return r;
    }
    if (opt.from < 0 || opt.from >= opt.to) {
        r.code = kExitUsage;
        r.err = "--levels a..b needs 0 <= a < b\n";
        return r;
    }
    RunReport rep;
    rep.command = "verify";
    rep.suite = opt.suite;
    rep.levels = std::to_string(opt.from) + ".." + std::to_string(opt.to);
    rep.digest = fnv1a64(file_text);
    rep.seed = opt.seed;
    try {
        const auto spec = parse_module_spec(file_text);
        detail::with_backend(spec, [&](const auto& ctx) {
            using Int = std::decay_t<decltype(ctx.modulus())>;
            const auto M = spec.build(ctx);
            if (opt.suite == "reversal" && (M.poly_summands().size() != 1 || !M.mu_free()))
                throw ParseError("reversal needs a module with a single summand Lambda/(f^k)");
            detail::SuiteRunner<Int>(spec, M, opt, rep).run();
            return 0;
        });
    } catch (const ParseError& e) {
        r.code = kExitUsage;
        r.err = std::string("parse error: ") + e.what() + "\n";
        return r;
    } catch (const Error& e) {
        r.code = kExitUsage;
        r.err = std::string("error: ") + e.what() + "\n";
        return r;
    }
    r.out = rep.render();
    if (rep.failed())
        r.code = kExitFail;
    else if (rep.count("FLAGGED") > 0 && (opt.strict || detail::env_strict()))
        r.code = kExitPrecision;
    return r;
}

// ---------------------------------------------------------------- gen

struct GenOptions {
    std::uint64_t seed = 1;
    int count = 1;
    int max_deg = 2;
    bool allow_mu = false;
    unsigned p = 3;
    int precision = 10;
    int k = 1;
    int max_lambda = 3;
};

/// Deterministic Eisenstein summands of multiplicity one, total degree in [1, max_lambda],
/// plus at most one Lambda/(p) summand when allowed.
inline std::vector<ModuleSpecFile> generate_modules(const GenOptions& opt) {
    if (opt.max_deg < 1) throw ParseError("--max-deg must be >= 1");
    if (opt.max_lambda < 1) throw ParseError("--max-lambda must be >= 1");
    if (!is_odd_prime(opt.p)) throw ParseError("--p: not an odd prime");
    if (opt.precision < 2) throw ParseError("--precision must be >= 2");
    Rng rng(opt.seed);
    const long long p = opt.p;
    std::vector<ModuleSpecFile> out;
    for (int i = 0; i < opt.count; ++i) {
        ModuleSpecFile f;
        f.p = opt.p;
        f.k = opt.k;
        f.precision_exp = opt.precision;
        f.degree_cap = 16;
        int remaining = static_cast<int>(rng.between(1, opt.max_lambda));
        while (remaining > 0) {
            const int d = static_cast<int>(rng.between(1, std::min(opt.max_deg, remaining)));
            remaining -= d;
            SummandSpec s;
            long long u;
            do u = rng.between(1, p * p - 1);
            while (u % p == 0);
            s.coeffs.push_back(std::to_string((rng.chance(1, 2) ? -1 : 1) * p * u));
            for (int j = 1; j < d; ++j) s.coeffs.push_back(std::to_string(p * rng.between(0, p * p - 1)));
            s.coeffs.push_back("1");
            f.summands.push_back(std::move(s));
        }
        if (opt.allow_mu && rng.chance(1, 2)) {
            SummandSpec s;
            s.kind = SummandSpec::Kind::Mu;
            s.m = 1;
            f.summands.push_back(std::move(s));
        }
        out.push_back(std::move(f));
    }
    return out;
}

inline CommandResult cmd_gen(const GenOptions& opt) {
    CommandResult r;
    try {
        auto mods = generate_modules(opt);
        auto arr = nlohmann::ordered_json::array();
        for (const auto& m : mods) arr.push_back(m.to_json());
        r.out = arr.dump(2) + "\n";
    } catch (const ParseError& e) {
        r.code = kExitUsage;
        r.err = std::string("usage error: ") + e.what() + "\n";
    }
    return r;
}

// ---------------------------------------------------------------- fukuda

struct FukudaOptions {
    std::optional<unsigned> p;
    std::optional<int> k;
};

inline CommandResult cmd_fukuda(const std::string& tsv_text, const FukudaOptions& opt) {
    CommandResult r;
    try {
        auto series = parse_growth_tsv(tsv_text, opt.p, opt.k);
        auto est = detect_stabilization(series);
        auto rf = rank_freeze_check(series);
        std::ostringstream os;
        os << "p\t" << series.p << "\nk\t" << series.k << '\n';
        os << "status\t" << to_string(est.status) << '\n';
        os << "n0\t" << est.n0 << '\n';
        os << "lambda\t" << est.lambda << "\nmu\t" << est.mu << "\nnu\t" << est.nu << '\n';
        os << "rank_stable_from\t" << (est.rank_stable_from ? std::to_string(*est.rank_stable_from) : "-") << '\n';
        os << "rank_freeze\t" << (!rf.ok ? "violated" : rf.freeze_observed ? "ok" : "no_freeze_observed") << '\n';
        r.out = os.str();
        if (!rf.ok) {
            r.code = kExitFail;
            r.err = "p-rank changes after a freeze\n";
        }
    } catch (const ParseError& e) {
        r.code = kExitUsage;
        r.err = std::string("parse error: ") + e.what() + "\n";
    } catch (const InsufficientData& e) {
        r.code = kExitUsage;
        r.err = std::string("InsufficientData: ") + e.what() + "\n";
    } catch (const InconsistentSeries& e) {
        r.code = kExitFail;
        r.err = std::string("InconsistentSeries: ") + e.what() + "\n";
    }
    return r;
}

}  // namespace iwalab
