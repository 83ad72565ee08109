#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ptri/matchup.hpp"
#include "ptri/oracle.hpp"
#include "ptri/verify.hpp"

using namespace ptri;

namespace {

MatchupInstance make(double alpha, double beta, std::vector<double> a, std::vector<double> b, std::size_t k2) {
    return MatchupInstance(Team(std::move(a)), Team(std::move(b)), LinearModel(alpha, beta), k2);
}

bool contains(const std::vector<Ordering>& v, const Ordering& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

TEST(LinearModel, Validation) {
    EXPECT_THROW(LinearModel(0.0, 0.4), ValidationError);
    EXPECT_THROW(LinearModel(0.1, 0.0), ValidationError);
    EXPECT_THROW(LinearModel(0.1, 0.6), ValidationError);
    EXPECT_TRUE(LinearModel(0.1, 0.4).has_ties());
    EXPECT_FALSE(LinearModel(0.1, 0.5).has_ties());
    const auto [lo, hi] = LinearModel(0.1, 0.4).valid_range();
    EXPECT_DOUBLE_EQ(lo, -4.0);
    EXPECT_DOUBLE_EQ(hi, 4.0);
}

TEST(Team, MustBeSortedNonIncreasing) {
    EXPECT_NO_THROW(Team({3, 3, 1}));
    EXPECT_THROW(Team({1, 2}), ValidationError);
}

TEST(TrialFromStrengths, Examples) {
    const LinearModel m(0.1, 0.4);
    const auto even = trial_from_strengths(m, 1.0, 1.0);
    EXPECT_NEAR(even.tie(), 0.2, 1e-15);
    EXPECT_NEAR(even.win(), 0.4, 1e-15);
    EXPECT_NEAR(even.loss(), 0.4, 1e-15);
    const auto up = trial_from_strengths(m, 0.0, 2.0);
    EXPECT_NEAR(up.win(), 0.6, 1e-15);
    EXPECT_NEAR(up.loss(), 0.2, 1e-15);
    EXPECT_THROW(trial_from_strengths(m, 0.0, 5.0), DomainViolation);
}

TEST(MatchupInstance, DomainViolationNamesPair) {
    try {
        make(0.1, 0.4, {5, 0}, {0, 0}, 0);
        FAIL();
    } catch (const DomainViolation& e) {
        EXPECT_NE(std::string(e.what()).find("a1=5"), std::string::npos) << e.what();
    }
    EXPECT_THROW(make(0.1, 0.4, {1}, {1, 0}, 0), ValidationError);
    EXPECT_THROW(make(0.1, 0.4, {1}, {1}, 3), ValidationError);
}

TEST(BuildDistribution, Basics) {
    const auto one = make(0.1, 0.4, {1}, {2}, 0);
    const auto m = build_distribution(one, {0});
    ASSERT_EQ(m.size(), 1u);
    EXPECT_NEAR(m[0].win(), 0.5, 1e-15);

    const auto eq = make(0.1, 0.4, {1, 1}, {1, 1}, 0);
    const auto lineup = build_distribution(eq, identity_ordering(2));
    for (const auto& t : lineup.trials()) {
        EXPECT_NEAR(t.win(), 0.4, 1e-15);
        EXPECT_NEAR(t.loss(), 0.4, 1e-15);
    }
    EXPECT_THROW(build_distribution(eq, {0, 0}), ValidationError);
}

TEST(ExpectedScore, Examples) {
    EXPECT_DOUBLE_EQ(expected_score(make(0.1, 0.4, {2, 1}, {2, 1}, 0)), 1.0);
    EXPECT_NEAR(expected_score(make(0.1, 0.4, {1, 0}, {3, 1}, 0)), 1.3, 1e-15);
}

TEST(ExpectedScore, OrderingInvariance) {
    const auto inst = make(0.05, 0.4, {3, 2, 1.5, 0.5, 0}, {2.5, 2, 1, 0.5, 0.25}, 0);
    verify::Rng rng(5);
    for (int rep = 0; rep < 50; ++rep)
        EXPECT_NEAR(mean(build_distribution(inst, rng.permutation(5))), expected_score(inst), 1e-12);
}

TEST(TailProbability, Examples) {
    const auto inst = make(0.1, 0.4, {1}, {2}, 0);
    EXPECT_DOUBLE_EQ(tail_probability(inst, {0}), 1.0);
    EXPECT_NEAR(tail_probability(inst.with_k2(2), {0}), 0.5, 1e-15);
}

TEST(TailProbability, MonotoneAndMatchesOracle) {
    verify::MatchupSuiteConfig c;
    c.count = 20;
    for (const auto& pi : verify::gen_instances(c)) {
        const auto n = pi.instance.size();
        const auto table = oracle::oracle_ordering_table(pi.exact);
        for (std::size_t o = 0; o < table.orderings.size(); o += 5) {
            double prev = 2.0;
            for (std::size_t k2 = 0; k2 <= 2 * n; ++k2) {
                const double t = tail_probability(pi.instance.with_k2(k2), table.orderings[o]);
                EXPECT_LE(t, prev);
                EXPECT_NEAR(t, to_double(table.tails[o][k2]), 1e-12);
                prev = t;
            }
        }
    }
}

TEST(SwapDelta, Examples) {
    const auto eq_a = make(0.1, 0.4, {1, 1}, {3, 0}, 0);
    EXPECT_EQ(swap_delta(eq_a, {0, 1}, 0, 1), 0.0);
    const auto inst = make(0.1, 0.4, {2, 0}, {3, 0}, 0);
    EXPECT_NEAR(swap_delta(inst, {0, 1}, 0, 1), -0.06, 1e-15);
    EXPECT_NEAR(swap_delta(inst, {1, 0}, 0, 1), 0.06, 1e-15);
    EXPECT_THROW(swap_delta(inst, {0, 1}, 1, 0), ValidationError);
}

TEST(ResidualStatistic, TwoPlayers) {
    const auto inst = make(0.1, 0.4, {2, 0}, {3, 0}, 4);
    EXPECT_DOUBLE_EQ(residual_statistic(inst, {0, 1}, 0, 1, 4), 1.0);
    EXPECT_DOUBLE_EQ(residual_statistic(inst, {0, 1}, 0, 1, 2), -1.0);
}

TEST(SwapIdentity, HoldsOnGeneratedInstances) {
    verify::MatchupSuiteConfig c;
    c.count = 60;
    verify::Rng rng(99);
    for (const auto& pi : verify::gen_instances(c)) {
        const auto& inst = pi.instance;
        const auto n = inst.size();
        for (int rep = 0; rep < 5; ++rep) {
            const auto sigma = rng.permutation(n);
            std::size_t i = rng.below(n), j = rng.below(n - 1);
            if (j >= i) ++j;
            if (i > j) std::swap(i, j);
            const double lhs = tail_probability(inst, swapped(sigma, i, j)) - tail_probability(inst, sigma);
            const double rhs = swap_delta(inst, sigma, i, j) * residual_statistic(inst, sigma, i, j, inst.k2());
            EXPECT_NEAR(lhs, rhs, 1e-12);
        }
    }
}

TEST(Decision, Examples) {
    // mu = 2.5 for equal teams of size 5.
    const auto ties = make(0.05, 0.4, {4, 3, 2, 1, 0}, {4, 3, 2, 1, 0}, 0);
    const auto strong = optimize_by_theorem(ties.with_k2(10));
    EXPECT_EQ(strong.kind, DecisionKind::strong_vs_strong);
    EXPECT_TRUE(strong.near_boundary);
    EXPECT_EQ(optimize_by_theorem(ties.with_k2(5)).kind, DecisionKind::indeterminate_band);
    EXPECT_EQ(optimize_by_theorem(ties.with_k2(1)).kind, DecisionKind::strong_vs_weak);
    EXPECT_EQ(optimize_by_theorem(ties.with_k2(9)).kind, DecisionKind::indeterminate_band);
    EXPECT_FALSE(optimize_by_theorem(ties.with_k2(3)).near_boundary);
    const auto band = optimize_by_theorem(ties).band;
    EXPECT_DOUBLE_EQ(band.first, 0.5);
    EXPECT_DOUBLE_EQ(band.second, 5.0);

    const auto no_ties = make(0.1, 0.5, {3, 2, 1, 0}, {3, 2, 1, 0}, 2);
    EXPECT_EQ(optimize_by_theorem(no_ties).kind, DecisionKind::strong_vs_weak);
    EXPECT_EQ(optimize_by_theorem(no_ties.with_k2(8)).kind, DecisionKind::strong_vs_strong);
    EXPECT_EQ(optimize_by_theorem(no_ties.with_k2(7)).kind, DecisionKind::indeterminate_band);
}

TEST(Search, SymmetricTeamsTie) {
    const auto inst = make(0.1, 0.4, {1, 1}, {1, 1}, 2);
    const auto r = optimize_search(inst, SearchStrategy::exhaustive);
    EXPECT_EQ(r.best_orderings.size(), 2u);
    EXPECT_EQ(r.evaluations, 2u);
}

TEST(Search, ExhaustiveCap) {
    std::vector<double> team(10, 0.0);
    const auto inst = make(0.1, 0.4, team, team, 0);
    EXPECT_THROW(optimize_search(inst, SearchStrategy::exhaustive), SizeExceeded);
}

TEST(Search, DecidedRegimesOnGeneratedInstances) {
    verify::MatchupSuiteConfig c;
    c.count = 40;
    verify::Rng rng(17);
    for (const auto& pi : verify::gen_instances(c)) {
        const auto n = pi.instance.size();
        for (std::size_t k2 = 0; k2 <= 2 * n; ++k2) {
            const auto inst = pi.instance.with_k2(k2);
            const auto d = optimize_by_theorem(inst);
            if (d.kind == DecisionKind::indeterminate_band || d.near_boundary) continue;
            const Ordering target =
                d.kind == DecisionKind::strong_vs_strong ? identity_ordering(n) : reversal_ordering(n);
            const auto ex = optimize_search(inst, SearchStrategy::exhaustive);
            EXPECT_TRUE(contains(ex.best_orderings, target));
            const auto local = optimize_search(inst, SearchStrategy::inversion_local_search, rng.permutation(n));
            EXPECT_EQ(local.best_orderings.front(), target);
        }
    }
}

TEST(Search, LocalSearchInBandNeverWorsens) {
    const auto inst = make(0.05, 0.4, {3, 2, 1.5, 0.5, 0}, {2.5, 2, 1, 0.5, 0.25}, 5);
    const Ordering start{4, 2, 0, 3, 1};
    const auto r = optimize_search(inst, SearchStrategy::inversion_local_search, start);
    EXPECT_GE(r.best_tail, tail_probability(inst, start) - 1e-15);
    EXPECT_THROW(optimize_search(inst, SearchStrategy::inversion_local_search, Ordering{0, 1}), ValidationError);
}
