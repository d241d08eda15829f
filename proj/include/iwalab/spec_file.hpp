#pragma once

// Module description files (JSON) and growth series tables (TSV).
//
//   {"p": 3, "k": 1, "precision_exp": 10, "degree_cap": 16,
//    "summands": [{"kind": "poly", "coeffs": [-3, 1], "multiplicity": 2},
//                 {"kind": "mu", "m": 1}],
//    "subgroup": {"p_power": 1}}
//
// Coefficients are ascending, base 10, given as JSON integers or decimal strings.

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iwalab/module.hpp"
#include "iwalab/tower.hpp"

namespace iwalab {

struct SummandSpec {
    enum class Kind { Poly, Mu };
    Kind kind = Kind::Poly;
    std::vector<std::string> coeffs;
    unsigned multiplicity = 1;
    int m = 0;
};

struct ModuleSpecFile {
    unsigned p = 3;
    int k = 1;
    int precision_exp = 10;
    std::size_t degree_cap = 16;
    std::optional<long long> kappa;
    std::vector<SummandSpec> summands;
    std::optional<int> subgroup_p_power;

    TowerParams params() const { return {p, k, kappa}; }

    /// p^N fits the machine-word backend.
    bool fits_word() const {
        unsigned __int128 q = 1;
        for (int i = 0; i < precision_exp; ++i) {
            q *= p;
            if (q >= (static_cast<unsigned __int128>(1) << 63)) return false;
        }
        return true;
    }

    template <ResidueInt Int>
    PadicContext<Int> context() const {
        return PadicContext<Int>(p, precision_exp);
    }

    template <ResidueInt Int>
    ElementaryModule<Int> build(const PadicContext<Int>& ctx) const {
        std::vector<PolySummand<Int>> poly;
        std::vector<MuSummand> mu;
        for (std::size_t i = 0; i < summands.size(); ++i) {
            const auto& s = summands[i];
            const std::string where = "summands[" + std::to_string(i) + "]";
            if (s.kind == SummandSpec::Kind::Mu) {
                mu.push_back({s.m});
                continue;
            }
            std::vector<Int> cs;
            for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
                try {
                    cs.push_back(ctx.from_decimal(s.coeffs[j]));
                } catch (const ParseError& e) {
                    throw ParseError(where + ".coeffs[" + std::to_string(j) + "]: " + e.what());
                }
            }
            LambdaPoly<Int> f(ctx, std::move(cs));
            try {
                if (!is_distinguished(f)) throw ParseError(where + ": polynomial " + f.to_string() + " is not distinguished");
            } catch (const ZeroPolynomial&) {
                throw ParseError(where + ": zero polynomial");
            }
            poly.push_back({std::move(f), static_cast<int>(s.multiplicity)});
        }
        try {
            return ElementaryModule<Int>(ctx, params(), std::move(poly), std::move(mu));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(std::string("module: ") + e.what());
        }
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["p"] = p;
        j["k"] = k;
        j["precision_exp"] = precision_exp;
        j["degree_cap"] = degree_cap;
        if (kappa) j["kappa"] = *kappa;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& s : summands) {
            nlohmann::ordered_json o;
            if (s.kind == SummandSpec::Kind::Poly) {
                o["kind"] = "poly";
                auto cs = nlohmann::ordered_json::array();
                for (const auto& c : s.coeffs) {
                    long long v = 0;
                    std::istringstream in(c);
                    if (c.size() < 18 && (in >> v) && in.eof())
                        cs.push_back(v);
                    else
                        cs.push_back(c);
                }
                o["coeffs"] = std::move(cs);
                o["multiplicity"] = s.multiplicity;
            } else {
                o["kind"] = "mu";
                o["m"] = s.m;
            }
            arr.push_back(std::move(o));
        }
        j["summands"] = std::move(arr);
        if (subgroup_p_power) j["subgroup"] = {{"p_power", *subgroup_p_power}};
        return j;
    }
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <class T>
T get_int(const nlohmann::json& j, const std::string& path, long long lo, long long hi) {
    if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
    const long long v = j.get<long long>();
    if (v < lo || v > hi) throw ParseError(path + ": value " + std::to_string(v) + " out of range");
    return static_cast<T>(v);
}

}  // namespace detail

inline ModuleSpecFile module_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("top level: expected an object");
    for (const auto& [key, _] : j.items())
        if (key != "p" && key != "k" && key != "precision_exp" && key != "degree_cap" && key != "kappa" &&
            key != "summands" && key != "subgroup")
            throw ParseError("top level: unknown key '" + key + "'");
    ModuleSpecFile f;
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw ParseError(std::string("top level: missing key '") + key + "'");
        return j.at(key);
    };
    f.p = detail::get_int<unsigned>(need("p"), "p", 3, 1'000'003);
    if (!is_odd_prime(f.p)) throw ParseError("p: " + std::to_string(f.p) + " is not an odd prime");
    if (j.contains("k")) f.k = detail::get_int<int>(j.at("k"), "k", 1, 64);
    f.precision_exp = detail::get_int<int>(need("precision_exp"), "precision_exp", 1, 4096);
    f.degree_cap = detail::get_int<std::size_t>(need("degree_cap"), "degree_cap", 1, 1 << 16);
    if (j.contains("kappa")) {
        f.kappa = detail::get_int<long long>(j.at("kappa"), "kappa", std::numeric_limits<long long>::min(),
                                             std::numeric_limits<long long>::max());
        const long long r = ((*f.kappa - 1) % static_cast<long long>(f.p) + f.p) % f.p;
        if (r != 0) throw ParseError("kappa: must be congruent to 1 mod p");
    }
    const auto& sums = need("summands");
    if (!sums.is_array()) throw ParseError("summands: expected an array");
    for (std::size_t i = 0; i < sums.size(); ++i) {
        const std::string path = "summands[" + std::to_string(i) + "]";
        const auto& s = sums[i];
        if (!s.is_object() || !s.contains("kind") || !s.at("kind").is_string())
            throw ParseError(path + ": expected an object with a string 'kind'");
        SummandSpec out;
        const auto kind = s.at("kind").get<std::string>();
        if (kind == "poly") {
            if (!s.contains("coeffs") || !s.at("coeffs").is_array() || s.at("coeffs").empty())
                throw ParseError(path + ".coeffs: expected a non-empty array");
            const auto& cs = s.at("coeffs");
            for (std::size_t c = 0; c < cs.size(); ++c) {
                const std::string cp = path + ".coeffs[" + std::to_string(c) + "]";
                if (cs[c].is_number_integer())
                    out.coeffs.push_back(std::to_string(cs[c].get<long long>()));
                else if (cs[c].is_string())
                    out.coeffs.push_back(cs[c].get<std::string>());
                else
                    throw ParseError(cp + ": expected an integer or a decimal string");
            }
            if (s.contains("multiplicity"))
                out.multiplicity = detail::get_int<unsigned>(s.at("multiplicity"), path + ".multiplicity", 1, 64);
        } else if (kind == "mu") {
            out.kind = SummandSpec::Kind::Mu;
            if (!s.contains("m")) throw ParseError(path + ": missing key 'm'");
            out.m = detail::get_int<int>(s.at("m"), path + ".m", 1, 4096);
        } else {
            throw ParseError(path + ".kind: expected \"poly\" or \"mu\", got \"" + kind + "\"");
        }
        f.summands.push_back(std::move(out));
    }
    if (j.contains("subgroup")) {
        const auto& g = j.at("subgroup");
        if (!g.is_object() || !g.contains("p_power")) throw ParseError("subgroup: expected {\"p_power\": c}");
        f.subgroup_p_power = detail::get_int<int>(g.at("p_power"), "subgroup.p_power", 0, 4096);
    }
    return f;
}

inline ModuleSpecFile parse_module_spec(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON");
    }
    return module_spec_from_json(j);
}

// Growth series TSV: optional "# p=3 k=1" comment lines, a header naming at least
// level, size_exp and p_rank, then one row per level. A "flags" column other than
// "-" marks the row as unresolved.

inline GrowthSeries parse_growth_tsv(const std::string& text, std::optional<unsigned> p = {}, std::optional<int> k = {}) {
    GrowthSeries s;
    std::optional<unsigned> file_p;
    std::optional<int> file_k;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::string> header;
    int c_level = -1, c_size = -1, c_rank = -1, c_flags = -1;
    auto split = [](const std::string& l) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ls(l);
        while (std::getline(ls, cell, '\t')) out.push_back(cell);
        if (!l.empty() && l.back() == '\t') out.emplace_back();
        return out;
    };
    auto to_ll = [&](const std::string& cell, const char* what) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != cell.size())
            throw ParseError("line " + std::to_string(lineno) + ": bad " + what + " '" + cell + "'");
        return v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream cs(line.substr(1));
            std::string kv;
            while (cs >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
                if (key == "p") file_p = static_cast<unsigned>(to_ll(val, "p"));
                if (key == "k") file_k = static_cast<int>(to_ll(val, "k"));
            }
            continue;
        }
        auto cells = split(line);
        if (header.empty()) {
            header = cells;
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (header[i] == "level") c_level = static_cast<int>(i);
                if (header[i] == "size_exp") c_size = static_cast<int>(i);
                if (header[i] == "p_rank") c_rank = static_cast<int>(i);
                if (header[i] == "flags") c_flags = static_cast<int>(i);
            }
            if (c_level < 0 || c_size < 0 || c_rank < 0)
                throw ParseError("line " + std::to_string(lineno) + ": header needs level, size_exp and p_rank columns");
            continue;
        }
        if (cells.size() != header.size())
            throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                             " cells, got " + std::to_string(cells.size()));
        GrowthEntry e{static_cast<int>(to_ll(cells[c_level], "level")), to_ll(cells[c_size], "size_exp"),
                      to_ll(cells[c_rank], "p_rank"), false};
        if (c_flags >= 0) e.unresolved = cells[c_flags] != "-" && !cells[c_flags].empty();
        s.entries.push_back(e);
    }
    if (header.empty()) throw ParseError("line 1: missing header row");
    s.p = p.value_or(file_p.value_or(3));
    s.k = k.value_or(file_k.value_or(1));
    if (!is_odd_prime(s.p)) throw ParseError("p: not an odd prime");
    try {
        s.validate();
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
    return s;
}

inline std::string growth_tsv(const GrowthSeries& s) {
    std::ostringstream out;
    out << "# p=" << s.p << " k=" << s.k << "\n";
    out << "level\tsize_exp\tp_rank\tflags\n";
    for (const auto& e : s.entries)
        out << e.level << '\t' << e.size_exp << '\t' << e.p_rank << '\t' << (e.unresolved ? "unresolved" : "-") << '\n';
    return out.str();
}

}  // namespace iwalab
