#include "shtlab/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>

#include <CLI11.hpp>

#include "shtlab/config.hpp"
#include "shtlab/error.hpp"
#include "shtlab/grids.hpp"
#include "shtlab/io.hpp"
#include "shtlab/report.hpp"
#include "shtlab/selfimprove.hpp"
#include "shtlab/suites.hpp"

namespace shtlab {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string default_out_dir() {
    if (const char* env = std::getenv("SHTLAB_OUT_DIR"); env && *env) return env;
    return "shtlab_out";
}

// "linf", "l1", or "lp:<exponent list or file>".
ExponentFunction lattice_exponent(const std::string& spec, std::size_t n) {
    if (spec == "linf") return ExponentFunction::constant(n, std::numeric_limits<double>::infinity());
    if (spec == "l1") return ExponentFunction::constant(n, 1.0);
    if (spec.rfind("lp:", 0) == 0) return resolve_exponents(spec.substr(3), n);
    throw ValidationError(ValidationCode::invalid_parameter,
                          "lattice '" + spec + "' must be linf, l1 or lp:<exponents>");
}

std::string write_or_print(const std::string& path, const std::string& contents, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << contents;
        return "stdout";
    }
    write_file(path, contents);
    return path;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite spaces of homogeneous type: grids, maximal operators, weights, lattices"};
    app.require_subcommand(1);

    // gen-space
    auto* gen = app.add_subcommand("gen-space", "write a generated space in the space file format");
    std::string g_kind = "path", g_out;
    std::size_t g_n = 3;
    double g_beta = 2.0;
    std::uint64_t g_seed = 7;
    gen->add_option("--kind", g_kind, "path, grid2d, discrete, cantor, random_planar or snowflake-<base>");
    gen->add_option("--n", g_n, "size parameter");
    gen->add_option("--beta", g_beta, "snowflake exponent");
    gen->add_option("--seed", g_seed);
    gen->add_option("--out", g_out, "output file (default stdout)");

    // build-grids
    auto* bg = app.add_subcommand("build-grids", "build adjacent dyadic grids and dump their cubes");
    std::string b_space = "path:3", b_out;
    double b_delta = 0.0;
    std::size_t b_kmax = 32;
    std::uint64_t b_seed = 7;
    bg->add_option("--space", b_space, "space file or generator spec");
    bg->add_option("--delta", b_delta, "grid parameter (default: largest admissible power of 1/2)");
    bg->add_option("--kmax-grids", b_kmax, "cap on the number of grids");
    bg->add_option("--seed", b_seed);
    bg->add_option("--out", b_out, "output file (default stdout)");

    // verify
    auto* ver = app.add_subcommand("verify", "run verification suites and write the report");
    std::string v_config, v_out_dir;
    std::map<std::string, std::string> v_flags;
    std::vector<std::pair<std::string, CLI::Option*>> v_opts;
    ver->add_option("--config", v_config, "config document (key = value lines)")->check(CLI::ExistingFile);
    ver->add_option("--out-dir", v_out_dir, "output directory (default $SHTLAB_OUT_DIR or ./shtlab_out)");
    for (const char* key : {"suite", "space", "exponents", "modular", "seed", "delta", "kmax-grids", "convexify",
                            "random-samples", "rdf-samples", "norm-starts", "norm-steps", "theta", "safety", "eta",
                            "s0", "s-points", "rdf-tol"}) {
        std::string k = key;
        std::string config_key = k;
        for (char& c : config_key) {
            if (c == '-') c = '_';
        }
        v_opts.emplace_back(config_key, ver->add_option("--" + k, v_flags[config_key]));
    }

    // norm-est
    auto* ne = app.add_subcommand("norm-est", "estimate the operator norm of M or M^D on a lattice");
    std::string n_lattice = "lp:2", n_space = "path:3", n_strategy = "auto", n_op = "ball", n_modular = "sum";
    std::size_t n_starts = 6, n_steps = 10;
    std::uint64_t n_seed = 7;
    double n_convexify = 1.0;
    ne->add_option("--lattice", n_lattice, "linf, l1 or lp:<exponents>");
    ne->add_option("--space", n_space);
    ne->add_option("--modular", n_modular, "sum or max");
    ne->add_option("--convexify", n_convexify, "r in X^(r)");
    ne->add_option("--op", n_op, "ball or dyadic");
    ne->add_option("--strategy", n_strategy, "auto, exact_linf, exact_l1_pointmass or multistart");
    ne->add_option("--starts", n_starts);
    ne->add_option("--steps", n_steps);
    ne->add_option("--seed", n_seed);

    // report
    auto* rep = app.add_subcommand("report", "re-render a report.json");
    std::string r_in, r_format = "csv";
    rep->add_option("--in", r_in, "report.json or a directory holding one")->required();
    rep->add_option("--format", r_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*gen) {
            std::string spec = g_kind + ":" + std::to_string(g_n);
            if (g_kind.rfind("snowflake", 0) == 0) spec += ":" + format_double(g_beta);
            Space s = generate_space(parse_generator_spec(spec), g_seed);
            const std::string where = write_or_print(g_out, format_space(s), out);
            if (where != "stdout") out << "wrote " << s.size() << "-point space to " << where << "\n";
            return kExitPass;
        }
        if (*bg) {
            const Space s = resolve_space(b_space, b_seed);
            const double delta = b_delta > 0.0 ? b_delta : choose_delta(s.a0());
            const auto sys = build_adjacent_system(s, delta, GridBuildOptions{b_kmax, Rng::derive(b_seed, 1)});
            const std::string where = write_or_print(b_out, dump_grids(sys), out);
            if (where != "stdout") out << sys.describe() << "\n";
            return kExitPass;
        }
        if (*ver) {
            RunConfig config;
            if (!v_config.empty()) config = parse_config_text(read_file(v_config));
            for (const auto& [key, opt] : v_opts) {
                if (opt->count() > 0) apply_config_value(config, key, v_flags[key]);
            }
            if (!v_out_dir.empty()) config.out_dir = v_out_dir;
            if (config.out_dir.empty()) config.out_dir = default_out_dir();
            const RunResult result = run_theorem_suite(config);
            emit_report(result, config.out_dir);
            const auto& r = result.report;
            out << "suite " << r.suite() << ": " << r.records().size() << " rows, " << r.failures() << " failed; "
                << "report in " << config.out_dir << "\n";
            for (const auto& rec : r.records()) {
                if (rec.verdict == Verdict::fail) err << "FAIL " << rec.name << "  " << rec.witness << "\n";
            }
            return r.passed() ? kExitPass : kExitFail;
        }
        if (*ne) {
            const Space s = resolve_space(n_space, n_seed);
            const auto sys = build_adjacent_system(s, choose_delta(s.a0()), GridBuildOptions{32, Rng::derive(n_seed, 1)});
            const ExponentFunction p = lattice_exponent(n_lattice, s.size());
            const std::vector<double> mass(s.masses().begin(), s.masses().end());
            Lattice lat = Lattice::lebesgue(p, parse_modular_kind(n_modular), mass);
            if (n_convexify != 1.0) lat = Lattice::convexified(lat, n_convexify);
            NormStrategy strategy = NormStrategy::multistart;
            if (n_strategy == "auto") {
                if (n_convexify == 1.0 && n_lattice == "linf") strategy = NormStrategy::exact_linf;
                if (n_convexify == 1.0 && n_lattice == "l1") strategy = NormStrategy::exact_l1_pointmass;
            } else {
                strategy = parse_norm_strategy(n_strategy);
            }
            OperatorKind op = OperatorKind::ball;
            if (n_op == "dyadic") op = OperatorKind::dyadic;
            else if (n_op != "ball") throw ValidationError(ValidationCode::invalid_parameter, "--op must be ball or dyadic");
            const NormEstimate est = estimate_operator_norm(s, sys, lat, op, strategy,
                                                            MultistartOptions{n_starts, n_steps, Rng::derive(n_seed, 2), {}});
            out << format_double(est.value) << "\n";
            err << to_string(est.kind) << ", " << est.trials << " trials\n";
            return kExitPass;
        }
        if (*rep) {
            std::filesystem::path in(r_in);
            if (std::filesystem::is_directory(in)) in /= "report.json";
            const SuiteReport r = parse_report_json(read_file(in.string()));
            out << (r_format == "csv" ? report_csv(r) : report_json(r));
            return r.passed() ? kExitPass : kExitFail;
        }
    } catch (const ValidationError& e) {
        err << "error [" << to_string(e.code()) << "]";
        if (e.line()) err << " at line " << e.line() << ", column " << e.column();
        err << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

int run_command(int argc, const char* const* argv) { return run_command(argc, argv, std::cout, std::cerr); }

}  // namespace shtlab
