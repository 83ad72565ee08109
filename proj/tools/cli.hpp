#pragma once

// Subcommand dispatch for the ptri command-line tool.
//
// Exit codes: 0 success, 1 internal error, 2 invalid input (parse, validation,
// domain violation), 3 a verify suite reported invariant failures.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptri/ptri.hpp"

namespace ptri::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kInvalidInput = 2, kSuiteFailed = 3 };

inline std::string read_source(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline io::json read_document(const std::string& path) { return io::parse_json(read_source(path)); }

struct Options {
    std::string input;
    bool csv = false;
    // optimize
    std::string strategy = "none";
    std::optional<std::string> k;
    std::optional<std::string> start;
    // verify
    std::uint64_t seed = 1;
    std::size_t count = 100;
    std::size_t n_min = 1;
    std::size_t n_max = 10;
    std::string family = "general";
    std::string suite = "all";
    std::size_t oracle_max_n = 10;
    std::optional<std::string> json_out;
};

inline int cmd_pmf(const Options& o, std::ostream& out) {
    const auto model = io::to_model(io::read_model_input(read_document(o.input)));
    out << io::dump(io::pmf_to_json(pmf(model))) << '\n';
    return kOk;
}

inline int cmd_summary(const Options& o, std::ostream& out) {
    const auto model = io::to_model(io::read_model_input(read_document(o.input)));
    if (o.csv) {
        out << io::coefficients_csv(split_parity(pmf(model)));
        return kOk;
    }
    out << io::dump(io::structure_report_to_json(structure_report(model))) << '\n';
    return kOk;
}

inline int cmd_decompose(const Options& o, std::ostream& out) {
    const auto d = split_parity(io::read_pmf_or_model(read_document(o.input)));
    if (o.csv)
        out << io::coefficients_csv(d);
    else
        out << io::dump(io::decomposition_to_json(d)) << '\n';
    return kOk;
}

inline int cmd_factor(const Options& o, std::ostream& out) {
    const auto d = split_parity(io::read_pmf_or_model(read_document(o.input)));
    io::json doc;
    doc["even"] = d.p_norm > 0.0 ? io::factorization_to_json(factor_poisson_binomial(d.p_coeffs)) : io::json(nullptr);
    doc["odd"] = d.q_norm > 0.0 ? io::factorization_to_json(factor_poisson_binomial(d.q_coeffs)) : io::json(nullptr);
    out << io::dump(doc) << '\n';
    return kOk;
}

inline int cmd_optimize(const Options& o, std::ostream& out) {
    const auto parsed = io::instance_from_json(read_document(o.input), o.k);
    const auto& inst = parsed.instance;
    if (o.csv) {
        out << io::ordering_tail_csv(inst);
        return kOk;
    }
    const auto decision = optimize_by_theorem(inst);
    std::optional<SearchResult> search;
    if (o.strategy == "exhaustive") {
        search = optimize_search(inst, SearchStrategy::exhaustive);
    } else if (o.strategy == "local") {
        std::optional<Ordering> start;
        if (o.start) start = io::ordering_from_json(io::parse_json(*o.start), inst.size());
        search = optimize_search(inst, SearchStrategy::inversion_local_search, start);
    } else if (o.strategy != "none") {
        throw ValidationError("--strategy must be none, exhaustive or local");
    }
    out << io::dump(io::result_to_json(decision, search)) << '\n';
    return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
    if (o.suite != "structure" && o.suite != "matchup" && o.suite != "all")
        throw ValidationError("--suite must be structure, matchup or all");
    verify::SuiteReport combined;
    combined.suite = o.suite;
    if (o.suite == "structure" || o.suite == "all") {
        verify::StructureSuiteConfig c;
        c.generator = {o.seed, o.count, o.n_min, o.n_max, verify::parse_family(o.family)};
        c.oracle_max_n = o.oracle_max_n;
        combined.merge(verify::run_structure_suite(c));
    }
    if (o.suite == "matchup" || o.suite == "all") {
        verify::MatchupSuiteConfig c;
        c.seed = o.seed;
        c.count = o.count;
        c.n_min = std::max<std::size_t>(o.n_min, 2);
        c.n_max = std::min<std::size_t>(o.n_max, 6);
        if (c.n_min > c.n_max) c.n_min = c.n_max;
        if (o.family == "no-tie") c.betas = {"1/2"};
        combined.merge(verify::run_matchup_suite(c));
    }
    const std::string text = io::dump(verify::report_to_json(combined)) + "\n";
    if (o.json_out) {
        std::ofstream f(*o.json_out, std::ios::binary);
        if (!f) throw ValidationError("cannot write " + *o.json_out);
        f << text;
    } else {
        out << text;
    }
    return combined.ok() ? kOk : kSuiteFailed;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Poisson trinomial distributions and match-play lineups"};
    app.require_subcommand(1, 1);
    Options o;

    auto add_input = [&](CLI::App* sub, const char* what) {
        sub->add_option("input", o.input, what)->required();
    };
    auto* pmf_cmd = app.add_subcommand("pmf", "Exact pmf on the half-integer lattice");
    add_input(pmf_cmd, "model JSON file, or - for standard input");
    auto* summary_cmd = app.add_subcommand("summary", "Moments, conditional parts, modes and gaps");
    add_input(summary_cmd, "model JSON file, or -");
    summary_cmd->add_flag("--csv", o.csv, "emit the coefficient table (index,p_k,q_k) instead");
    auto* decompose_cmd = app.add_subcommand("decompose", "Even/odd coefficient split");
    add_input(decompose_cmd, "model or pmf JSON file, or -");
    decompose_cmd->add_flag("--csv", o.csv, "emit CSV instead of JSON");
    auto* factor_cmd = app.add_subcommand("factor", "Poisson binomial factorization of both parts");
    add_input(factor_cmd, "model or pmf JSON file, or -");
    auto* optimize_cmd = app.add_subcommand("optimize", "Lineup decision and ordering search");
    add_input(optimize_cmd, "instance JSON file, or -");
    optimize_cmd->add_option("--strategy", o.strategy, "none | exhaustive | local")->capture_default_str();
    optimize_cmd->add_option("--k", o.k, "threshold on the half grid, overrides the file");
    optimize_cmd->add_option("--start", o.start, "local search start as a JSON array of 1-based players");
    optimize_cmd->add_flag("--csv", o.csv, "emit the per-ordering tail table (n <= 6)");
    auto* verify_cmd = app.add_subcommand("verify", "Run the seeded property suites");
    verify_cmd->add_option("--seed", o.seed)->capture_default_str();
    verify_cmd->add_option("--count", o.count)->capture_default_str();
    verify_cmd->add_option("--n-min", o.n_min)->capture_default_str();
    verify_cmd->add_option("--n-max", o.n_max)->capture_default_str();
    verify_cmd->add_option("--family", o.family, "general | no-tie | tie-heavy | boundary | degenerate")
        ->capture_default_str();
    verify_cmd->add_option("--suite", o.suite, "structure | matchup | all")->capture_default_str();
    verify_cmd->add_option("--oracle-max-n", o.oracle_max_n, "largest n checked by exact enumeration")
        ->capture_default_str();
    verify_cmd->add_option("--json-out", o.json_out, "write the report here instead of standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        if (pmf_cmd->parsed()) return cmd_pmf(o, out);
        if (summary_cmd->parsed()) return cmd_summary(o, out);
        if (decompose_cmd->parsed()) return cmd_decompose(o, out);
        if (factor_cmd->parsed()) return cmd_factor(o, out);
        if (optimize_cmd->parsed()) return cmd_optimize(o, out);
        if (verify_cmd->parsed()) return cmd_verify(o, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const SizeExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    err << "internal error: no subcommand\n";
    return kInternal;
}

}  // namespace ptri::cli
