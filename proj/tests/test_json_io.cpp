#include <gtest/gtest.h>

#include <string>

#include "ptri/json_io.hpp"

using namespace ptri;
using io::json;

TEST(Dump, SeventeenDigitsAndStableLayout) {
    const json j = {{"b", 0.1}, {"a", {1, 2.5}}, {"c", nullptr}};
    EXPECT_EQ(io::dump(j), "{\n  \"a\": [1, 2.5],\n  \"b\": 0.10000000000000001,\n  \"c\": null\n}");
}

TEST(Dump, FloatsRoundTrip) {
    for (double v : {0.1, 1.0 / 3, 2e-300, 123456.789, -0.0625}) {
        const auto back = io::parse_json(io::dump(json(v)));
        EXPECT_EQ(back.get<double>(), v);
    }
}

TEST(ParseJson, MalformedIsValidationError) { EXPECT_THROW(io::parse_json("{\"trials\": ["), ValidationError); }

TEST(ModelInput, NumbersAndRationalStrings) {
    const auto in = io::read_model_input(io::parse_json(R"({"trials": [{"t": 0.2, "w": "1/2"}, {"t": 0, "w": 1}]})"));
    ASSERT_EQ(in.tie_win.size(), 2u);
    EXPECT_EQ(in.tie_win[0].first, Rational(1, 5));
    EXPECT_EQ(in.tie_win[0].second, Rational(1, 2));
    const auto m = io::to_model(in);
    EXPECT_DOUBLE_EQ(m[0].loss(), 0.3);
    EXPECT_EQ(m[1].loss(), 0.0);
}

TEST(ModelInput, ErrorsNameTheField) {
    auto message = [](const char* text) {
        try {
            io::read_model_input(io::parse_json(text));
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message(R"({"trials": [{"t": 0.1, "w": 0.1}, {"t": 0.3, "w": 0.8}]})").find("trials[1]"), std::string::npos);
    EXPECT_NE(message(R"({"trials": [{"t": 0.1}]})").find("trials[0].w"), std::string::npos);
    EXPECT_NE(message(R"({"trials": [{"t": "x", "w": 0}]})").find("trials[0].t"), std::string::npos);
    EXPECT_NE(message(R"({"trials": []})").find("trials"), std::string::npos);
    EXPECT_NE(message(R"({"model": 1})").find("trials"), std::string::npos);
}

TEST(ModelInput, ClampsExactly) {
    const auto in = io::read_model_input(io::parse_json(R"({"trials": [{"t": "-1/10000000000000", "w": 0.5}]})"));
    EXPECT_EQ(in.tie_win[0].first, 0);
    EXPECT_THROW(io::read_model_input(io::parse_json(R"({"trials": [{"t": "-1/100000000000", "w": 0.5}]})")),
                 ValidationError);
}

TEST(Pmf, RoundTripIsBitExact) {
    const auto m = io::to_model(io::read_model_input(
        io::parse_json(R"({"trials": [{"t": "1/3", "w": 0.1}, {"t": 0.45, "w": 0.05}, {"t": 0.3, "w": 0.3}]})")));
    const auto p = pmf(m);
    const auto back = io::pmf_from_json(io::parse_json(io::dump(io::pmf_to_json(p))));
    EXPECT_EQ(back.probs, p.probs);
    EXPECT_EQ(split_parity(back), split_parity(p));
}

TEST(Pmf, ValidatesShapeAndN) {
    EXPECT_THROW(io::pmf_from_json(io::parse_json(R"({"n": 2, "probs": [0.25, 0.5, 0.25]})")), ValidationError);
    EXPECT_THROW(io::pmf_from_json(io::parse_json(R"({"probs": [0.5, 0.5]})")), ValidationError);
    EXPECT_THROW(io::pmf_from_json(io::parse_json(R"({"probs": [0.5, "x", 0.5]})")), ValidationError);
    EXPECT_EQ(io::read_pmf_or_model(io::parse_json(R"({"n": 1, "probs": [0.25, 0.5, 0.25]})")).n(), 1u);
}

TEST(Csv, Coefficients) {
    const auto d = split_parity(HalfLatticePMF{{0.25, 0.5, 0.25}});
    EXPECT_EQ(io::coefficients_csv(d), "index,p_k,q_k\n0,0.25,0.5\n1,0.25,\n");
}

TEST(Instance, ParsesAndValidatesK) {
    const auto j = io::parse_json(R"({"alpha": 0.1, "beta": "2/5", "team_a": [2, 1], "team_b": [1.5, 0], "k": "1.5"})");
    const auto pi = io::instance_from_json(j);
    EXPECT_EQ(pi.instance.k2(), 3u);
    EXPECT_EQ(pi.exact.alpha, Rational(1, 10));
    EXPECT_EQ(pi.exact.team_b[0], Rational(3, 2));
    EXPECT_EQ(io::instance_from_json(j, std::string("2")).instance.k2(), 4u);
    EXPECT_THROW(io::instance_from_json(j, std::string("0.3")), ValidationError);
    EXPECT_THROW(io::instance_from_json(j, std::string("2.5")), ValidationError);
    EXPECT_THROW(io::instance_from_json(j, std::string("-1")), ValidationError);
}

TEST(Instance, DomainViolationPropagates) {
    const auto j = io::parse_json(R"({"alpha": 0.1, "beta": 0.4, "team_a": [5, 0], "team_b": [0, 0], "k": 0})");
    EXPECT_THROW(io::instance_from_json(j), DomainViolation);
}

TEST(Instance, RoundTrip) {
    const auto j = io::parse_json(R"({"alpha": "1/20", "beta": "1/2", "team_a": [4, 3], "team_b": ["7/2", 3], "k": "1.5"})");
    const auto pi = io::instance_from_json(j);
    const auto again = io::instance_from_json(io::instance_to_json(pi.exact));
    EXPECT_EQ(again.exact.team_b, pi.exact.team_b);
    EXPECT_EQ(again.instance.k2(), 3u);
    EXPECT_EQ(io::k_string(3), "1.5");
    EXPECT_EQ(io::k_string(4), "2");
}

TEST(Ordering, OneBased) {
    EXPECT_EQ(io::ordering_to_json({2, 0, 1}).dump(), "[3,1,2]");
    EXPECT_EQ(io::ordering_from_json(json::parse("[3,1,2]"), 3), (Ordering{2, 0, 1}));
    EXPECT_THROW(io::ordering_from_json(json::parse("[0,1,2]"), 3), ValidationError);
    EXPECT_THROW(io::ordering_from_json(json::parse("[1,1,2]"), 3), ValidationError);
}

TEST(OrderingCsv, ListsEveryOrdering) {
    const auto pi = io::instance_from_json(
        io::parse_json(R"({"alpha": 0.1, "beta": 0.4, "team_a": [1, 0], "team_b": [1, 0], "k": 0})"));
    EXPECT_EQ(io::ordering_tail_csv(pi.instance), "ordering,tail\n1 2,1\n2 1,1\n");
}
