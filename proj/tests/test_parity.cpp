#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ptri/parity.hpp"
#include "ptri/verify.hpp"

using namespace ptri;

namespace {

TrinomialModel model_of(std::vector<RawTrial> raw) { return build_model(raw); }

void expect_probs(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-15) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

const HalfLatticePMF kSymmetric{{1 / 16.0, 4 / 16.0, 6 / 16.0, 4 / 16.0, 1 / 16.0}};

}  // namespace

TEST(SplitParity, Symmetric) {
    const auto d = split_parity(kSymmetric);
    expect_probs(d.p_coeffs, {1 / 16.0, 6 / 16.0, 1 / 16.0});
    expect_probs(d.q_coeffs, {4 / 16.0, 4 / 16.0});
    EXPECT_DOUBLE_EQ(d.p_norm, 0.5);
    EXPECT_DOUBLE_EQ(d.q_norm, 0.5);
}

TEST(SplitParity, SingleTrialAndNoTie) {
    const auto d = split_parity(HalfLatticePMF{{0.25, 0.5, 0.25}});
    expect_probs(d.p_coeffs, {0.25, 0.25});
    expect_probs(d.q_coeffs, {0.5});
    const auto e = split_parity(HalfLatticePMF{{0.25, 0, 0.5, 0, 0.25}});
    expect_probs(e.q_coeffs, {0, 0});
    EXPECT_EQ(e.q_norm, 0.0);
}

TEST(ConditionalPmf, Symmetric) {
    const auto d = split_parity(kSymmetric);
    const auto even = conditional_pmf(d, Parity::even);
    expect_probs(even.probs, {0.125, 0.75, 0.125});
    EXPECT_EQ(even.offset, 0.0);
    EXPECT_EQ(even.modes, std::vector<double>{1.0});
    EXPECT_DOUBLE_EQ(even.mean, 1.0);

    const auto odd = conditional_pmf(d, Parity::odd);
    expect_probs(odd.probs, {0.5, 0.5});
    EXPECT_EQ(odd.offset, 0.5);
    EXPECT_EQ(odd.modes, (std::vector<double>{0.5, 1.5}));
}

TEST(ConditionalPmf, EmptyParityThrows) {
    const auto d = split_parity(HalfLatticePMF{{0.25, 0, 0.5, 0, 0.25}});
    EXPECT_THROW(conditional_pmf(d, Parity::odd), EmptyParity);
    EXPECT_NO_THROW(conditional_pmf(d, Parity::even));
}

TEST(ModeIndices, TieTolerance) {
    const std::vector<double> v{0.3, 0.3 * (1 - 1e-13), 0.1};
    EXPECT_EQ(mode_indices(v), (std::vector<std::size_t>{0, 1}));
    const std::vector<double> w{0.3, 0.3 * (1 - 1e-10), 0.1};
    EXPECT_EQ(mode_indices(w), (std::vector<std::size_t>{0}));
}

TEST(LogConcave, Examples) {
    EXPECT_TRUE(is_log_concave(std::vector<double>{0.125, 0.75, 0.125}, 1e-12).holds);
    EXPECT_TRUE(is_log_concave(std::vector<double>{0.5, 0.5}, 1e-12).holds);
    const auto r = is_log_concave(std::vector<double>{0.4, 0.1, 0.4}, 1e-12);
    EXPECT_FALSE(r.holds);
    ASSERT_TRUE(r.first_violation);
    EXPECT_EQ(*r.first_violation, 1u);
}

TEST(LogConcave, SupportMustBeContiguous) {
    EXPECT_FALSE(is_log_concave(std::vector<double>{0.5, 0.0, 0.5}, 1e-12).holds);
    EXPECT_TRUE(is_log_concave(std::vector<double>{0.0, 0.5, 0.5, 0.0}, 1e-12).holds);
    EXPECT_TRUE(is_log_concave(std::vector<double>{0.5, 1e-320, 0.0}, 1e-12).holds);
}

TEST(Factor, SingleFactor) {
    const auto f = factor_poisson_binomial(std::vector<double>{0.25, 0.25});
    ASSERT_EQ(f.success_probs.size(), 1u);
    EXPECT_NEAR(f.success_probs[0], 0.5, 1e-12);
    EXPECT_LE(f.residual, 1e-8);
}

TEST(Factor, SymmetricEvenPart) {
    const auto f = factor_poisson_binomial(std::vector<double>{1 / 16.0, 6 / 16.0, 1 / 16.0});
    ASSERT_EQ(f.success_probs.size(), 2u);
    EXPECT_NEAR(f.success_probs[0], 1 / (4 - 2 * std::sqrt(2.0)), 1e-10);
    EXPECT_NEAR(f.success_probs[1], 1 / (4 + 2 * std::sqrt(2.0)), 1e-10);
    EXPECT_LE(f.residual, 1e-8);
}

TEST(Factor, ZeroConstantAndMissingDegree) {
    const auto f = factor_poisson_binomial(std::vector<double>{0, 0.3});
    EXPECT_EQ(f.success_probs, std::vector<double>{1.0});
    const auto g = factor_poisson_binomial(std::vector<double>{0.4, 0.6, 0.0});
    ASSERT_EQ(g.success_probs.size(), 2u);
    EXPECT_NEAR(g.success_probs[0], 0.6, 1e-12);
    EXPECT_EQ(g.success_probs[1], 0.0);
}

TEST(Factor, RepeatedRoots) {
    // (1 + z)^6 / 64: six equal success probabilities of 1/2.
    std::vector<double> c{1, 6, 15, 20, 15, 6, 1};
    for (double& v : c) v /= 64;
    const auto f = factor_poisson_binomial(c);
    ASSERT_EQ(f.success_probs.size(), 6u);
    for (double q : f.success_probs) EXPECT_NEAR(q, 0.5, 1e-3);
    EXPECT_LE(f.residual, 1e-8);
}

TEST(Factor, NotRealRooted) {
    EXPECT_THROW(factor_poisson_binomial(std::vector<double>{1, 0, 1}), NotRealRooted);
    EXPECT_THROW(factor_poisson_binomial(std::vector<double>{1, -3, 1}), std::exception);
    EXPECT_THROW(factor_poisson_binomial(std::vector<double>{0, 0}), std::exception);
}

TEST(Factor, RoundTripOnGeneratedModels) {
    for (auto fam : {verify::Family::general, verify::Family::tie_heavy, verify::Family::no_tie}) {
        verify::GeneratorConfig c{5, 150, 1, 15, fam};
        for (const auto& m : verify::gen_models(c)) {
            const auto d = split_parity(pmf(m));
            for (auto parity : {Parity::even, Parity::odd}) {
                const auto& coeffs = parity == Parity::even ? d.p_coeffs : d.q_coeffs;
                const double norm = parity == Parity::even ? d.p_norm : d.q_norm;
                if (norm <= 0) continue;
                const auto f = factor_poisson_binomial(coeffs);
                EXPECT_LE(f.residual, 1e-8);
                const auto cond = conditional_pmf(d, parity);
                const auto rebuilt = poisson_binomial_pmf(f.success_probs);
                ASSERT_EQ(rebuilt.size(), cond.probs.size());
                for (std::size_t i = 0; i < rebuilt.size(); ++i) EXPECT_NEAR(rebuilt[i], cond.probs[i], 1e-8);
            }
        }
    }
}

TEST(Hurwitz, Examples) {
    EXPECT_TRUE(hurwitz_check(TrialParams::make(0.5, 0.25)));
    EXPECT_TRUE(hurwitz_check(TrialParams::make(0.6, 0.2)));
    EXPECT_THROW(hurwitz_check(TrialParams::make(0.0, 0.5)), HypothesisNotMet);
    EXPECT_THROW(hurwitz_check(TrialParams::make(0.5, 0.5)), HypothesisNotMet);
}

TEST(StructureReport, Symmetric) {
    const auto r = structure_report(model_of({{0.5, 0.25}, {0.5, 0.25}}));
    ASSERT_TRUE(r.even && r.odd);
    EXPECT_NEAR(*r.gaps.mean_even_gap, 0.0, 1e-15);
    EXPECT_NEAR(*r.gaps.mean_odd_gap, 0.0, 1e-15);
    std::vector<double> gaps = r.gaps.even_mode_mean_gaps;
    gaps.insert(gaps.end(), r.gaps.odd_mode_mean_gaps.begin(), r.gaps.odd_mode_mean_gaps.end());
    std::sort(gaps.begin(), gaps.end());
    expect_probs(gaps, {0.0, 0.5, 0.5});
    EXPECT_DOUBLE_EQ(*r.gaps.max_mode_pair_gap, 0.5);
}

TEST(StructureReport, SingleTrial) {
    const auto r = structure_report(model_of({{0.2, 0.5}}));
    ASSERT_TRUE(r.even);
    expect_probs(r.even->probs, {0.375, 0.625});
    EXPECT_EQ(r.even->modes, std::vector<double>{1.0});
    ASSERT_EQ(r.gaps.even_mode_cond_gaps.size(), 1u);
    EXPECT_NEAR(r.gaps.even_mode_cond_gaps[0], 0.375, 1e-15);
}

TEST(StructureReport, Degenerate) {
    const auto r = structure_report(model_of({{1, 0}}));
    EXPECT_FALSE(r.even);
    ASSERT_TRUE(r.odd);
    expect_probs(r.odd->probs, {1.0});
    EXPECT_EQ(r.odd->modes, std::vector<double>{0.5});
    EXPECT_TRUE(r.degenerate);
}

TEST(StructureReport, ModeBoundsOnGeneratedModels) {
    verify::GeneratorConfig c{9, 300, 1, 15, verify::Family::general};
    for (const auto& m : verify::gen_models(c)) {
        const auto r = structure_report(m);
        for (const auto* part : {&r.even, &r.odd}) {
            ASSERT_TRUE(part->has_value());
            const auto& cd = **part;
            EXPECT_TRUE(is_log_concave(cd.probs, 1e-12).holds);
            ASSERT_GE(cd.modes.size(), 1u);
            ASSERT_LE(cd.modes.size(), 2u);
            if (cd.modes.size() == 2) {
                EXPECT_DOUBLE_EQ(cd.modes[1] - cd.modes[0], 1.0);
            }
        }
        for (double g : r.gaps.even_mode_cond_gaps) EXPECT_LE(g, 1 + 1e-9);
        for (double g : r.gaps.odd_mode_cond_gaps) EXPECT_LE(g, 1 + 1e-9);
        for (double g : r.gaps.even_mode_mean_gaps) EXPECT_LE(g, 1.5 + 1e-9);
        for (double g : r.gaps.odd_mode_mean_gaps) EXPECT_LE(g, 1.5 + 1e-9);
        EXPECT_LE(*r.gaps.max_mode_pair_gap, 2.5 + 1e-9);
    }
}

TEST(HurwitzProperty, InteriorTrialsAreStable) {
    verify::GeneratorConfig c{13, 200, 1, 15, verify::Family::general};
    for (const auto& m : verify::gen_models(c))
        for (const auto& t : m.trials())
            if (t.loss() > 0 && t.tie() > 0 && t.win() > 0) {
                EXPECT_TRUE(hurwitz_check(t));
            }
}
