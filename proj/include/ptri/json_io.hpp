#pragma once

/**
 * @file json_io.hpp
 * @brief JSON and CSV surfaces: model, pmf, structure report, matchup instance.
 *
 * Probabilities and strengths may be JSON numbers or strings holding a decimal
 * or "p/q" rational. Numbers are read back to the decimal they were written as
 * (0.2 becomes exactly 1/5), so the float path and the exact path see the
 * same input. Output numbers are written with 17 significant digits.
 */

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ptri/distribution.hpp"
#include "ptri/errors.hpp"
#include "ptri/exact.hpp"
#include "ptri/matchup.hpp"
#include "ptri/oracle.hpp"
#include "ptri/parity.hpp"

namespace ptri::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Writing

namespace detail {

inline void write_number(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

inline void write(std::string& out, const json& j, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                write(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += indent < 0 ? "," : ", ";
                first = false;
                write(out, v, indent, depth + 1);
            }
            out += ']';
            return;
        }
        case json::value_t::number_float:
            write_number(out, j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

}  // namespace detail

/// Serializes with floats at 17 significant digits; arrays stay on one line.
inline std::string dump(const json& j, int indent = 2) {
    std::string out;
    detail::write(out, j, indent, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Reading helpers

inline json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

/// A number or numeric string as an exact rational.
inline Rational read_rational(const json& j, const std::string& field) {
    try {
        if (j.is_number_integer()) return Rational(j.dump());
        if (j.is_number_float()) return exact_decimal(j.get<double>());
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const ValidationError& e) {
        throw ValidationError(field + ": " + e.what());
    }
    throw ValidationError(field + ": expected a number or a rational string");
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(where + "." + key + ": missing");
    return *it;
}

// ---------------------------------------------------------------------------
// Models

/// Parsed (T, W) pairs, already clamped onto the simplex in exact arithmetic.
struct ModelInput {
    std::vector<std::pair<Rational, Rational>> tie_win;
};

inline ModelInput read_model_input(const json& j) {
    const json& trials = require(j, "trials", "model");
    if (!trials.is_array() || trials.empty()) throw ValidationError("trials: expected a non-empty array");
    const Rational slack = parse_rational("1e-12");
    ModelInput in;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const std::string where = "trials[" + std::to_string(i) + "]";
        Rational t = read_rational(require(trials[i], "t", where), where + ".t");
        Rational w = read_rational(require(trials[i], "w", where), where + ".w");
        if (t < -slack) throw ValidationError(where + ".t: negative probability");
        if (w < -slack) throw ValidationError(where + ".w: negative probability");
        if (t + w > 1 + slack) throw ValidationError(where + ": t + w exceeds 1");
        if (sgn(t) < 0) t = 0;
        if (t > 1) t = 1;
        if (sgn(w) < 0) w = 0;
        if (t + w > 1) w = 1 - t;
        in.tie_win.emplace_back(std::move(t), std::move(w));
    }
    return in;
}

inline TrinomialModel to_model(const ModelInput& in) {
    std::vector<RawTrial> raw;
    raw.reserve(in.tie_win.size());
    for (const auto& [t, w] : in.tie_win) raw.push_back({to_double(t), to_double(w)});
    return build_model(raw);
}

inline oracle::RationalModel to_rational_model(const ModelInput& in) { return oracle::RationalModel::make(in.tie_win); }

inline json model_to_json(const TrinomialModel& model) {
    json trials = json::array();
    for (const auto& t : model.trials()) trials.push_back({{"t", t.tie()}, {"w", t.win()}});
    return {{"trials", trials}};
}

inline json model_to_json(const ModelInput& in) {
    json trials = json::array();
    for (const auto& [t, w] : in.tie_win) trials.push_back({{"t", to_string(t)}, {"w", to_string(w)}});
    return {{"trials", trials}};
}

// ---------------------------------------------------------------------------
// PMF

inline json pmf_to_json(const HalfLatticePMF& p) { return {{"n", p.n()}, {"probs", p.probs}}; }

inline HalfLatticePMF pmf_from_json(const json& j) {
    const json& probs = require(j, "probs", "pmf");
    if (!probs.is_array()) throw ValidationError("probs: expected an array");
    HalfLatticePMF p;
    for (std::size_t h = 0; h < probs.size(); ++h) {
        if (!probs[h].is_number()) throw ValidationError("probs[" + std::to_string(h) + "]: expected a number");
        p.probs.push_back(probs[h].get<double>());
    }
    validate_pmf(p);
    if (auto it = j.find("n"); it != j.end()) {
        if (!it->is_number_integer() || it->get<long long>() != static_cast<long long>(p.n()))
            throw ValidationError("n: does not match the length of probs");
    }
    return p;
}

/// Either a model document ({"trials": ...}) or a pmf document ({"probs": ...}).
inline HalfLatticePMF read_pmf_or_model(const json& j) {
    if (j.is_object() && j.contains("probs")) return pmf_from_json(j);
    return pmf(to_model(read_model_input(j)));
}

// ---------------------------------------------------------------------------
// Parity

inline json decomposition_to_json(const ParityDecomposition& d) {
    return {{"p_coeffs", d.p_coeffs}, {"q_coeffs", d.q_coeffs}, {"p_norm", d.p_norm}, {"q_norm", d.q_norm}};
}

inline json factorization_to_json(const PoissonBinomialFactorization& f) {
    return {{"success_probs", f.success_probs}, {"residual", f.residual}};
}

inline json conditional_to_json(const ConditionalDistribution& c) {
    return {{"offset", c.offset}, {"probs", c.probs}, {"modes", c.modes}, {"mean", c.mean}};
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json structure_report_to_json(const StructureReport& r) {
    const auto& m = r.moments;
    json out;
    out["mu"] = m.mu;
    out["a"] = m.a;
    out["b"] = m.b;
    out["b_minus_a_mu"] = m.b_minus_a_mu;
    out["mass_even"] = m.mass_even;
    out["mass_odd"] = m.mass_odd;
    out["mu_even"] = optional_number(m.mu_even);
    out["mu_odd"] = optional_number(m.mu_odd);
    out["even"] = r.even ? conditional_to_json(*r.even) : json(nullptr);
    out["odd"] = r.odd ? conditional_to_json(*r.odd) : json(nullptr);
    const auto& g = r.gaps;
    out["gaps"] = {
        {"mean_even", optional_number(g.mean_even_gap)},
        {"mean_odd", optional_number(g.mean_odd_gap)},
        {"mean_even_odd", optional_number(g.mean_even_odd_gap)},
        {"even_mode_to_mu", g.even_mode_mean_gaps},
        {"odd_mode_to_mu", g.odd_mode_mean_gaps},
        {"even_mode_to_mu_even", g.even_mode_cond_gaps},
        {"odd_mode_to_mu_odd", g.odd_mode_cond_gaps},
        {"max_mode_pair", optional_number(g.max_mode_pair_gap)},
    };
    if (r.degenerate) {
        out["degenerate"] = {{"k", r.degenerate->k},
                             {"shift", r.degenerate->shift},
                             {"bernoulli_probs", r.degenerate->bernoulli_probs}};
    } else {
        out["degenerate"] = nullptr;
    }
    return out;
}

/// CSV with header "index,p_k,q_k"; q is blank on the final row (it has one fewer coefficient).
inline std::string coefficients_csv(const ParityDecomposition& d) {
    std::string out = "index,p_k,q_k\n";
    for (std::size_t k = 0; k < d.p_coeffs.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        detail::write_number(out, d.p_coeffs[k]);
        out += ',';
        if (k < d.q_coeffs.size()) detail::write_number(out, d.q_coeffs[k]);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matchup

/// Both mirrors of a parsed instance document.
struct ParsedInstance {
    MatchupInstance instance;
    oracle::RationalMatchup exact;
};

/// A threshold on the half grid, as a doubled integer.
inline std::size_t read_k2(const json& j, std::size_t n) {
    const Rational k = read_rational(j, "k");
    const Rational k2 = 2 * k;
    if (k2.get_den() != 1) throw ValidationError("k: must lie on the half-integer grid");
    if (sgn(k2) < 0 || k2 > static_cast<long>(2 * n)) throw ValidationError("k: must lie in [0, n]");
    return static_cast<std::size_t>(k2.get_num().get_ui());
}

inline ParsedInstance instance_from_json(const json& j, std::optional<std::string> k_override = std::nullopt) {
    const Rational alpha = read_rational(require(j, "alpha", "instance"), "alpha");
    const Rational beta = read_rational(require(j, "beta", "instance"), "beta");
    auto team = [&](const char* key) {
        const json& arr = require(j, key, "instance");
        if (!arr.is_array()) throw ValidationError(std::string(key) + ": expected an array");
        std::vector<Rational> v;
        for (std::size_t i = 0; i < arr.size(); ++i)
            v.push_back(read_rational(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
        return v;
    };
    oracle::RationalMatchup exact;
    exact.alpha = alpha;
    exact.beta = beta;
    exact.team_a = team("team_a");
    exact.team_b = team("team_b");
    const std::size_t n = exact.team_a.size();
    exact.k2 = k_override ? read_k2(json(*k_override), n) : read_k2(require(j, "k", "instance"), n);

    auto to_doubles = [](const std::vector<Rational>& v) {
        std::vector<double> out;
        for (const auto& r : v) out.push_back(to_double(r));
        return out;
    };
    MatchupInstance inst(Team(to_doubles(exact.team_a)), Team(to_doubles(exact.team_b)),
                         LinearModel(to_double(alpha), to_double(beta)), exact.k2);
    return {std::move(inst), std::move(exact)};
}

inline std::string k_string(std::size_t k2) {
    return k2 % 2 == 0 ? std::to_string(k2 / 2) : std::to_string(k2 / 2) + ".5";
}

inline json instance_to_json(const MatchupInstance& inst) {
    auto a = inst.team_a().strengths();
    auto b = inst.team_b().strengths();
    return {{"alpha", inst.model().alpha()},
            {"beta", inst.model().beta()},
            {"team_a", std::vector<double>(a.begin(), a.end())},
            {"team_b", std::vector<double>(b.begin(), b.end())},
            {"k", k_string(inst.k2())}};
}

inline json instance_to_json(const oracle::RationalMatchup& inst) {
    json a = json::array(), b = json::array();
    for (const auto& v : inst.team_a) a.push_back(to_string(v));
    for (const auto& v : inst.team_b) b.push_back(to_string(v));
    return {{"alpha", to_string(inst.alpha)},
            {"beta", to_string(inst.beta)},
            {"team_a", a},
            {"team_b", b},
            {"k", k_string(inst.k2)}};
}

/// 1-based player numbers, as in the documents.
inline json ordering_to_json(const Ordering& sigma) {
    json out = json::array();
    for (std::size_t v : sigma) out.push_back(v + 1);
    return out;
}

inline Ordering ordering_from_json(const json& j, std::size_t n) {
    if (!j.is_array()) throw ValidationError("ordering: expected an array");
    Ordering sigma;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 1) throw ValidationError("ordering: entries are 1-based players");
        sigma.push_back(static_cast<std::size_t>(v.get<long long>() - 1));
    }
    validate_ordering(sigma, n);
    return sigma;
}

inline json decision_to_json(const Decision& d) {
    return {{"kind", to_string(d.kind)},
            {"band", {d.band.first, d.band.second}},
            {"near_boundary", d.near_boundary}};
}

inline json result_to_json(const Decision& d, const std::optional<SearchResult>& search) {
    json out;
    out["mu"] = d.mu;
    out["k"] = d.k;
    out["decision"] = to_string(d.kind);
    out["band"] = {d.band.first, d.band.second};
    out["near_boundary"] = d.near_boundary;
    if (search) {
        json orderings = json::array();
        for (const auto& s : search->best_orderings) orderings.push_back(ordering_to_json(s));
        out["best_orderings"] = orderings;
        out["tails"] = search->tails;
        out["tail"] = search->best_tail;
    } else {
        out["best_orderings"] = nullptr;
        out["tail"] = nullptr;
    }
    return out;
}

/// One row per ordering (lexicographic): "ordering,tail" with the ordering written as 1-based "1 2 3".
inline std::string ordering_tail_csv(const MatchupInstance& inst) {
    if (inst.size() > 6) throw SizeExceeded("ordering tail table is limited to n <= 6");
    std::string out = "ordering,tail\n";
    Ordering sigma = identity_ordering(inst.size());
    do {
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(sigma[i] + 1);
        }
        out += ',';
        detail::write_number(out, tail_probability(inst, sigma));
        out += '\n';
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

}  // namespace ptri::io
