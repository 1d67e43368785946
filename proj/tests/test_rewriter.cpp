#include <gtest/gtest.h>

#include <random>
#include <string>

#include "ddgeo/planner.hpp"
#include "ddgeo/rewriter.hpp"
#include "ddgeo/typing.hpp"
#include "support.hpp"

using namespace ddgeo;

namespace {

const Configuration kOrigin = Configuration::from_angle({0.0, 0.0}, 0.0);

DiscretePath unit_edges(const Params& p, std::vector<double> turns_in_theta) {
    std::vector<double> turns;
    for (const double t : turns_in_theta) turns.push_back(t * p.theta);
    const std::vector<double> lengths(turns.size() - 1, p.ell);
    return shoot(kOrigin, turns, lengths);
}

/// First seeded random path whose type contains `factor`.
std::optional<DiscretePath> witness(std::string_view factor, const Params& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    fixtures::RandomPathOptions opt;
    opt.separated = false;
    for (int i = 0; i < 20000; ++i) {
        DiscretePath path = fixtures::random_feasible_path(rng, p, opt);
        if (type_string(path, p).find(factor) != std::string::npos) return path;
    }
    return std::nullopt;
}

}  // namespace

TEST(RuleNames, RoundTrip) {
    for (std::size_t k = 0; k < kRuleCount; ++k) {
        const auto kind = static_cast<RuleKind>(k);
        EXPECT_EQ(rule_from_string(to_string(kind)), kind);
    }
    EXPECT_FALSE(rule_from_string("Nope").has_value());
}

TEST(FindApplicable, AdjacentLongEdgesShortcut) {
    const Params p = Params::from_sides(8, 1.0);
    const DiscretePath path = shoot(kOrigin, std::vector<double>{0.0, 0.1, 0.0}, std::vector<double>{2.0, 2.0});
    ASSERT_TRUE(is_feasible(path, p));
    const auto a = find_applicable(path, p);
    ASSERT_TRUE(a.has_value());
    EXPECT_EQ(a->rule.kind, RuleKind::LongLongShortcut);
    const DiscretePath out = apply(path, *a, p);
    EXPECT_TRUE(is_feasible(out, p));
    EXPECT_LT(path_length(out), path_length(path) - 1e-10);
}

TEST(FindApplicable, PlannedPathIsFixedPoint) {
    const Params p = Params::from_sides(8, 1.0);
    const auto r = plan(kOrigin, Configuration::from_angle({1.0, 3.0}, kPi), p);
    EXPECT_FALSE(find_applicable(r.path, p).has_value()) << r.type_word;
}

TEST(FindApplicable, RequiresFeasiblePath) {
    const Params p = Params::from_sides(8, 1.0);
    const DiscretePath bad = shoot(kOrigin, std::vector<double>{0.0, 2.0, 0.0}, std::vector<double>{1.0, 1.0});
    EXPECT_THROW((void)find_applicable(bad, p), PreconditionError);
}

TEST(FindApplicable, BridgeWithInflection) {
    const Params p = Params::from_sides(8, 1.0);
    std::mt19937_64 rng(5);
    fixtures::RandomPathOptions opt;
    opt.separated = false;
    int checked = 0;
    for (int i = 0; i < 4000 && checked < 5; ++i) {
        const DiscretePath path = fixtures::random_feasible_path(rng, p, opt);
        const PathStructure s = analyze(path, p);
        bool inflection = false;
        for (std::size_t e = 0; e < path.edge_count(); ++e) inflection = inflection || is_inflection(path, e);
        if (s.bridges.empty() || !inflection) continue;
        ++checked;
        EXPECT_TRUE(find_applicable(path, p).has_value()) << s.type_word;
    }
    EXPECT_EQ(checked, 5);
}

TEST(Apply, ThrowsWhenNotApplicable) {
    const Params p = Params::from_sides(8, 1.0);
    const DiscretePath ngon = fixtures::ngon_path(8, 1.0, 3);
    EXPECT_THROW((void)apply(ngon, {{RuleKind::LongLongShortcut, 0.01}, {1, 0}}, p), RewriteError);
}

TEST(Apply, FourArcsBecomeThree) {
    const Params p = Params::from_sides(8, 1.0);
    const DiscretePath path = unit_edges(p, {-0.5, -1, -1, -0.6, -1, -1, -0.7, -1, -1, -0.5, -1, -1, -0.4});
    ASSERT_EQ(type_string(path, p), "AAAA");
    const auto a = find_applicable(path, p);
    ASSERT_TRUE(a.has_value());
    EXPECT_EQ(a->rule.kind, RuleKind::AaaaToAaa);
    const DiscretePath out = apply(path, *a, p);
    EXPECT_TRUE(is_feasible(out, p));
    EXPECT_NEAR(path_length(out), path_length(path), 1e-12);
    EXPECT_LE(type_string(out, p).size(), 3u);
}

TEST(ThreeArcTransform, FlushOrFewerArcs) {
    const Params p = Params::from_sides(8, 1.0);
    for (const auto& turns : {std::vector<double>{-0.5, -1, -1, -0.6, -1, -1, -0.7, -1, -1, -0.4},
                              std::vector<double>{-0.2, -1, -0.3, -1, -1, -1, -0.9, -1, -0.95}}) {
        const DiscretePath path = unit_edges(p, turns);
        ASSERT_EQ(type_string(path, p), "AAA");
        const auto out = three_arc_transform(path, p);
        ASSERT_TRUE(out.has_value());
        EXPECT_TRUE(is_feasible(*out, p));
        EXPECT_NEAR(path_length(*out), path_length(path), 1e-10);
        EXPECT_NEAR(distance(out->vertices.back(), path.vertices.back()), 0.0, 1e-12);
        const bool flush = std::abs(vertex_turns(*out).front()) >= p.theta - 1e-9;
        EXPECT_TRUE(flush || type_string(*out, p).size() <= 2);
    }
}

TEST(ThreeArcTransform, RejectsOtherTypes) {
    const Params p = Params::from_sides(8, 1.0);
    EXPECT_THROW((void)three_arc_transform(fixtures::ngon_path(8, 1.0, 3), p), PreconditionError);
}

TEST(Shorten, FixedPointUnchanged) {
    const Params p = Params::from_sides(8, 1.0);
    const DiscretePath ngon = fixtures::ngon_path(8, 1.0, 3);
    const auto r = shorten(ngon, p);
    EXPECT_TRUE(r.trace.fixed_point);
    EXPECT_TRUE(r.trace.steps.empty());
    EXPECT_EQ(r.path.vertices, ngon.vertices);
}

TEST(Shorten, RandomPathsReachTrueTypes) {
    std::mt19937_64 rng(17);
    for (const int n : {6, 8, 12}) {
        const Params p = Params::from_sides(n, 1.0);
        for (int i = 0; i < 4; ++i) {
            const DiscretePath path = fixtures::random_feasible_path(rng, p);
            const auto r = shorten(path, p);
            EXPECT_TRUE(r.trace.fixed_point);
            EXPECT_TRUE(is_feasible(r.path, p));
            EXPECT_FALSE(find_forbidden_subtype(type_string(r.path, p)).has_value()) << type_string(r.path, p);
            EXPECT_LE(path_length(r.path), path_length(path) + 1e-12);
            for (const RewriteStep& s : r.trace.steps) EXPECT_TRUE(is_progress(s, p));
        }
    }
}

TEST(Shorten, BudgetIsReported) {
    const Params p = Params::from_sides(8, 1.0);
    const DiscretePath path = unit_edges(p, {-0.5, -1, -1, -0.6, -1, -1, -0.7, -1, -1, -0.5, -1, -1, -0.4});
    RewriteOptions ro;
    ro.budget = 0;
    const auto r = shorten(path, p, ro);
    EXPECT_FALSE(r.trace.fixed_point);
    EXPECT_TRUE(r.trace.budget_exhausted);
    EXPECT_EQ(r.path.vertices, path.vertices);
}

TEST(Apply, FeasibilityPreservedOverManyApplications) {
    std::mt19937_64 rng(23);
    RewriteOptions ro;
    ro.allow_replan = false;
    int applications = 0;
    for (int round = 0; applications < 1000 && round < 400; ++round) {
        const Params p = Params::from_sides(round % 2 == 0 ? 8 : 12, 1.0);
        DiscretePath path = fixtures::random_feasible_path(rng, p);
        for (int k = 0; k < 40 && applications < 1000; ++k) {
            const auto a = find_applicable(path, p, ro);
            if (!a) break;
            const double before = path_length(path);
            const DiscretePath next = apply(path, *a, p, ro);
            ++applications;
            ASSERT_TRUE(is_feasible(next, p)) << to_string(a->rule.kind);
            ASSERT_LE(path_length(next), before + 1e-12);
            path = next;
        }
    }
    EXPECT_GE(applications, 1000);
}

TEST(Elimination, EveryForbiddenFactorHasAMove) {
    const Params p = Params::from_sides(8, 1.0);
    for (const std::string_view factor : kForbiddenFactors) {
        const auto path = factor == "AAAA"
                              ? std::optional(unit_edges(p, {-0.5, -1, -1, -0.6, -1, -1, -0.7, -1, -1, -0.5, -1, -1, -0.4}))
                              : witness(factor, p, 31);
        ASSERT_TRUE(path.has_value()) << factor;
        EXPECT_TRUE(find_applicable(*path, p).has_value()) << factor << " in " << type_string(*path, p);
    }
}

TEST(IsProgress, LexicographicOrder) {
    const Params p = Params::from_sides(8, 1.0);
    RewriteStep s;
    s.length_before = 5.0;
    s.length_after = 4.0;
    s.type_before = "AB";
    s.type_after = "ABA";
    EXPECT_TRUE(is_progress(s, p));
    s.length_after = 5.0;
    EXPECT_FALSE(is_progress(s, p));
    s.type_after = "A";
    EXPECT_TRUE(is_progress(s, p));
}
