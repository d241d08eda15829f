// iwalab <command> [file] [flags]

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <regex>

#include <CLI11.hpp>

#include "iwalab/iwalab.hpp"

namespace {

std::optional<std::string> read_input(const std::string& path) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), {});
}

int emit(const iwalab::CommandResult& r) {
    std::cout << r.out;
    std::cerr << r.err;
    return r.code;
}

int missing(const std::string& path) {
    std::cerr << "cannot read '" << path << "'\n";
    return iwalab::kExitUsage;
}

bool parse_range(const std::string& text, int& a, int& b) {
    static const std::regex re(R"((\d+)\.\.(\d+))");
    std::smatch m;
    if (!std::regex_match(text, m, re)) return false;
    a = std::stoi(m[1]);
    b = std::stoi(m[2]);
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iwasawa module workbench"};
    app.require_subcommand(1);

    std::string file;
    bool strict = false;

    auto* prepare = app.add_subcommand("prepare", "Weierstrass preparation of a power series");
    iwalab::PrepareOptions popt;
    prepare->add_option("file", file, "module file supplying p, precision_exp and degree_cap");
    prepare->add_option("--poly", popt.poly, "ascending coefficients, comma separated")->required();
    prepare->add_option("--p", popt.p, "prime when no file is given");
    prepare->add_option("--precision", popt.precision, "N when no file is given");
    prepare->add_option("--degree-cap", popt.degree_cap, "D when no file is given");

    auto* levels = app.add_subcommand("levels", "TSV of the finite levels");
    iwalab::LevelsOptions lopt;
    levels->add_option("file", file)->required();
    levels->add_option("--from", lopt.from);
    levels->add_option("--to", lopt.to);
    levels->add_flag("--strict", strict, "exit 3 when a level has unresolved orders");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    iwalab::VerifyOptions vopt;
    std::string range = "1..4";
    verify->add_option("file", file)->required();
    verify->add_option("--suite", vopt.suite, "circ|fukuda|ab|sf|tpart|propf|pairing|reversal")->required();
    verify->add_option("--levels", range, "a..b");
    verify->add_option("--seed", vopt.seed);
    verify->add_option("--samples", vopt.samples);
    verify->add_flag("--strict", strict);

    auto* gen = app.add_subcommand("gen", "seeded random module files");
    iwalab::GenOptions gopt;
    std::string out_dir;
    gen->add_option("--seed", gopt.seed);
    gen->add_option("--count", gopt.count);
    gen->add_option("--max-deg", gopt.max_deg);
    gen->add_flag("--allow-mu", gopt.allow_mu);
    gen->add_option("--p", gopt.p);
    gen->add_option("--precision", gopt.precision);
    gen->add_option("--k", gopt.k);
    gen->add_option("--max-lambda", gopt.max_lambda);
    gen->add_option("--out-dir", out_dir, "write one file per module instead of a JSON array on stdout");

    auto* fukuda = app.add_subcommand("fukuda", "stabilization and invariants of a growth series TSV");
    iwalab::FukudaOptions fopt;
    fukuda->add_option("file", file, "TSV file, or - for stdin")->required();
    fukuda->add_option("--p", fopt.p);
    fukuda->add_option("--k", fopt.k);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return iwalab::kExitUsage;
    }

    if (*prepare) {
        std::optional<std::string> text;
        if (!file.empty()) {
            text = read_input(file);
            if (!text) return missing(file);
        }
        return emit(iwalab::cmd_prepare(text, popt));
    }
    if (*levels) {
        auto text = read_input(file);
        if (!text) return missing(file);
        lopt.strict = strict;
        return emit(iwalab::cmd_levels(*text, lopt));
    }
    if (*verify) {
        auto text = read_input(file);
        if (!text) return missing(file);
        if (!parse_range(range, vopt.from, vopt.to)) {
            std::cerr << "--levels expects a..b\n";
            return iwalab::kExitUsage;
        }
        vopt.strict = strict;
        return emit(iwalab::cmd_verify(*text, vopt));
    }
    if (*gen) {
        if (out_dir.empty()) return emit(iwalab::cmd_gen(gopt));
        try {
            auto mods = iwalab::generate_modules(gopt);
            std::filesystem::create_directories(out_dir);
            for (std::size_t i = 0; i < mods.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof name, "gen_%04zu.json", i);
                std::ofstream(std::filesystem::path(out_dir) / name) << mods[i].to_json().dump(2) << "\n";
                std::cout << (std::filesystem::path(out_dir) / name).string() << "\n";
            }
        } catch (const iwalab::ParseError& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            return iwalab::kExitUsage;
        }
        return iwalab::kExitPass;
    }
    if (*fukuda) {
        auto text = read_input(file);
        if (!text) return missing(file);
        return emit(iwalab::cmd_fukuda(*text, fopt));
    }
    return iwalab::kExitUsage;
}
