#include <gtest/gtest.h>

#include <random>

#include "ddgeo/planner.hpp"
#include "ddgeo/smooth.hpp"
#include "ddgeo/typing.hpp"
#include "support.hpp"

using namespace ddgeo;

namespace {

using Spec = CandidateSpec;

Configuration conf(double x, double y, double heading) { return Configuration::from_angle({x, y}, heading); }

/// Smooth shortest length when both end headings may deviate by up to half a
/// turn step: the continuous counterpart of the free turns at u and v.
double relaxed_dubins(const Configuration& u, const Configuration& v, double theta) {
    double best = std::numeric_limits<double>::infinity();
    const int k = 60;
    for (int i = 0; i <= k; ++i) {
        for (int j = 0; j <= k; ++j) {
            const double a = -theta / 2 + theta * i / k;
            const double b = -theta / 2 + theta * j / k;
            const auto uu = conf(u.point.x, u.point.y, heading_angle(u.heading) + a);
            const auto vv = conf(v.point.x, v.point.y, heading_angle(v.heading) + b);
            best = std::min(best, dubins_solve(uu, vv, 1.0).length());
        }
    }
    return best;
}

void expect_valid_true_type(const PlanResult& r, const Params& p) {
    EXPECT_TRUE(is_feasible(r.path, p));
    EXPECT_TRUE(is_true_type(type_string(r.path, p))) << type_string(r.path, p);
    EXPECT_EQ(r.type_word, type_string(r.path, p));
    EXPECT_NEAR(r.length, path_length(r.path), 1e-12 * r.length);
}

}  // namespace

TEST(ForwardConstruct, StraightBridgeCloses) {
    const Params p = Params::from_sides(8, 1.0);
    Spec s;
    s.items = {{Spec::ItemKind::Free}};
    s.edges = {Spec::EdgeRole::Free};
    const auto r = forward_construct(s, {{0.0}, {7.5}, {}}, conf(0, 0, 0), conf(7.5, 0, 0), p);
    EXPECT_NEAR(r.position_residual, 0.0, 1e-12);
    EXPECT_NEAR(r.final_turn, 0.0, 1e-12);
    EXPECT_EQ(type_string(r.path, p), "B");
}

TEST(ForwardConstruct, FullRunIsRegularPolygon) {
    for (const int n : {6, 8, 12}) {
        const Params p = Params::from_sides(n, 1.0);
        Spec s;
        s.items = {{Spec::ItemKind::Run, Orientation::Left, n}};
        s.edges = {Spec::EdgeRole::Normal};
        s.flush_end = Orientation::Left;
        const DiscretePath ngon = fixtures::ngon_path(n, 1.0, n);
        const auto r = forward_construct(s, {}, ngon.start, ngon.end, p);
        EXPECT_NEAR(r.position_residual, 0.0, 1e-12);
        EXPECT_NEAR(r.heading_residual, 0.0, 1e-12);
        ASSERT_EQ(r.path.vertices.size(), ngon.vertices.size());
        for (std::size_t i = 0; i < ngon.vertices.size(); ++i)
            EXPECT_NEAR(distance(r.path.vertices[i], ngon.vertices[i]), 0.0, 1e-12);
    }
}

TEST(ForwardConstruct, ZeroTurnsDegenerateToBridge) {
    const Params p = Params::from_sides(8, 1.0);
    Spec s;
    s.items = {{Spec::ItemKind::Free}, {Spec::ItemKind::Free}};
    s.edges = {Spec::EdgeRole::Free, Spec::EdgeRole::Free};
    const auto r = forward_construct(s, {{0.0, 0.0}, {2.0, 3.0}, {}}, conf(0, 0, 0), conf(5, 0, 0), p);
    EXPECT_NEAR(r.position_residual, 0.0, 1e-12);
    EXPECT_EQ(type_string(r.path, p), "B");
}

TEST(ForwardConstruct, RejectsMalformedSpec) {
    const Params p = Params::from_sides(8, 1.0);
    Spec s;
    s.items = {{Spec::ItemKind::Free}};
    EXPECT_THROW((void)forward_construct(s, {{0.0}, {}, {}}, conf(0, 0, 0), conf(1, 0, 0), p), PreconditionError);
}

TEST(SolveCandidate, ClosesOneDrivingFamily) {
    const Params p = Params::from_sides(8, 1.0);
    Spec s;
    s.items = {{Spec::ItemKind::Free}, {Spec::ItemKind::Run, Orientation::Left, 2}};
    s.edges = {Spec::EdgeRole::Free, Spec::EdgeRole::Free};
    ASSERT_EQ(s.driving_dims(), 1);
    const auto u = conf(0, 0, 0);
    const std::vector<double> turns{0.2, p.theta, p.theta, -0.3};
    const std::vector<double> lengths{3.0, 1.0, 2.0};
    const DiscretePath member = shoot(u, turns, lengths);
    ASSERT_TRUE(is_feasible(member, p));
    const auto r = solve_candidate(s, u, member.end, p);
    ASSERT_TRUE(r.has_value());
    EXPECT_TRUE(is_feasible(*r, p));
    EXPECT_NEAR(distance(r->vertices.back(), member.end.point), 0.0, 1e-9);
    EXPECT_LE(path_length(*r), path_length(member) + 1e-9);
}

TEST(Plan, StraightInstanceIsBridge) {
    const Params p = Params::from_sides(8, 1.0);
    const auto r = plan(conf(0, 0, 0), conf(10, 0, 0), p);
    EXPECT_EQ(r.type_word, "B");
    EXPECT_NEAR(r.length, 10.0, 1e-9);
}

TEST(Plan, ReversalIsNoLongerThanOracle) {
    const Params p = Params::from_sides(8, 1.0);
    const auto u = conf(0, 0, 0);
    const auto v = conf(0, 0, kPi);
    const auto r = plan(u, v, p);
    expect_valid_true_type(r, p);
    OracleOptions oo;
    oo.restarts = 8;
    oo.iterations = 6000;
    const auto o = oracle_search(u, v, p, oo);
    EXPECT_TRUE(is_feasible(o.path, p));
    EXPECT_GE(o.length, r.length - 1e-6);
}

TEST(Plan, RandomInstancesAgainstOracle) {
    std::mt19937_64 rng(41);
    const Params p = Params::from_sides(8, 1.0);
    OracleOptions oo;
    oo.restarts = 8;
    oo.iterations = 8000;
    for (int i = 0; i < 3; ++i) {
        const auto [u, v] = fixtures::random_instance(rng, 0.5, 5.0);
        const auto r = plan(u, v, p);
        expect_valid_true_type(r, p);
        const auto o = oracle_search(u, v, p, oo);
        EXPECT_GE(o.length, r.length - 1e-6 * r.length) << "instance " << i;
    }
}

TEST(Plan, SandwichedByDiscretizedSmoothPath) {
    std::mt19937_64 rng(43);
    for (const int n : {8, 16}) {
        const Params p = Params::from_sides(n, 2.0 * std::sin(kPi / n));
        for (int i = 0; i < 3; ++i) {
            const auto [u, v] = fixtures::random_instance(rng, 1.0, 6.0);
            const auto r = plan(u, v, p);
            expect_valid_true_type(r, p);
            const SmoothPath g = dubins_solve(u, v, 1.0);
            EXPECT_LE(r.length, path_length(discretize(g, p.theta)) + 1e-9);
        }
    }
}

TEST(Plan, MatchesRelaxedSmoothOptimumAtFineResolution) {
    const int n = 120;
    const Params p = Params::from_sides(n, 2.0 * std::sin(kPi / n));
    const auto u = conf(0, 0, 0);
    const auto v = conf(0, 4, 0);
    const auto r = plan(u, v, p);
    expect_valid_true_type(r, p);
    const double smooth = dubins_solve(u, v, 1.0).length();
    EXPECT_LE(r.length, smooth + 1e-9);
    EXPECT_NEAR(r.length, relaxed_dubins(u, v, p.theta), 2e-3 * smooth);
}

TEST(Plan, RigidMotionReflectionAndReversal) {
    const Params p = Params::from_sides(8, 1.0);
    const auto u = conf(0.3, -0.2, 0.4);
    const auto v = conf(2.9, 1.7, 2.2);
    const double base = plan(u, v, p).length;
    const RigidMotion m{1.1, {3.0, -4.0}, false};
    const RigidMotion f{0.0, {}, true};
    auto moved = [](const Configuration& c, const RigidMotion& t) {
        return Configuration::make(t.apply_point(c.point), t.apply_vector(c.heading));
    };
    EXPECT_NEAR(plan(moved(u, m), moved(v, m), p).length, base, 1e-9 * base);
    EXPECT_NEAR(plan(moved(u, f), moved(v, f), p).length, base, 1e-9 * base);
    EXPECT_NEAR(plan(v.reversed(), u.reversed(), p).length, base, 1e-9 * base);
}

TEST(Plan, PointSymmetricInstanceHasMirroredArcs) {
    const Params p = Params::from_sides(8, 1.0);
    const auto u = conf(-3, 0, kPi / 2);
    const auto v = conf(3, 0, -kPi / 2);
    const auto r = plan(u, v, p);
    expect_valid_true_type(r, p);
    const auto s = analyze(r.path, p);
    ASSERT_GE(s.arcs.size(), 2u);
    EXPECT_EQ(s.arcs.front().edge_count, s.arcs.back().edge_count);
    EXPECT_EQ(s.arcs.front().orientation, s.arcs.back().orientation);
    // The half-turn image of the reversed path is another optimum.
    const RigidMotion half{kPi, {}, false};
    const DiscretePath image = transformed(reversed(r.path), half);
    EXPECT_TRUE(is_feasible(image, p));
    EXPECT_NEAR(distance(image.vertices.front(), u.point), 0.0, 1e-9);
}

TEST(Plan, DeterministicAcrossThreadModes) {
    const Params p = Params::from_sides(8, 1.0);
    const auto u = conf(0, 0, 0.5);
    const auto v = conf(1.5, 2.5, -2.0);
    PlannerOptions serial;
    serial.parallel = false;
    const auto a = plan(u, v, p);
    const auto b = plan(u, v, p, serial);
    EXPECT_EQ(a.length, b.length);
    EXPECT_EQ(a.type_word, b.type_word);
    EXPECT_EQ(a.path.vertices, b.path.vertices);
}

TEST(VertexBound, GrowsWithBudget) {
    const Params p = Params::from_sides(8, 1.0);
    EXPECT_EQ(vertex_bound(10.0, p), 23);
    EXPECT_LT(vertex_bound(1.0, p), vertex_bound(2.0, p));
}

TEST(Oracle, StraightInstance) {
    const Params p = Params::from_sides(8, 1.0);
    OracleOptions oo;
    oo.restarts = 2;
    oo.iterations = 500;
    const auto o = oracle_search(conf(0, 0, 0), conf(6, 0, 0), p, oo);
    EXPECT_NEAR(o.length, 6.0, 1e-6);
}

TEST(Oracle, SameSeedSameResult) {
    const Params p = Params::from_sides(8, 1.0);
    OracleOptions oo;
    oo.restarts = 3;
    oo.iterations = 1500;
    oo.seed = 9;
    const auto a = oracle_search(conf(0, 0, 0), conf(1, 2, 2.0), p, oo);
    const auto b = oracle_search(conf(0, 0, 0), conf(1, 2, 2.0), p, oo);
    EXPECT_EQ(a.length, b.length);
}
