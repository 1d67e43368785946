#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ddgeo/planner.hpp"
#include "ddgeo/rewriter.hpp"
#include "ddgeo/smooth.hpp"
#include "ddgeo/typing.hpp"
#include "support.hpp"

using namespace ddgeo;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> body;
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

bool has_violation(const std::vector<Violation>& vs, Violation::Kind k, std::size_t loc, double magnitude,
                   double tol) {
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) {
        return v.kind == k && v.location == loc && std::abs(v.magnitude - magnitude) <= tol;
    });
}

Outcome validator_suite() {
    Outcome o;
    int checks = 0;
    for (const int n : {8, 12, 360}) {
        const Params p = Params::from_sides(n, 1.0);
        const DiscretePath ngon = fixtures::ngon_path(n, 1.0, n);
        ++checks;
        if (!is_feasible(ngon, p)) o.pass = false;
        std::vector<double> turns(n + 1, p.theta);
        turns[n / 2] += 0.1;
        const std::vector<double> lengths(n, 1.0);
        const auto vs = validate(shoot(ngon.start, turns, lengths), p);
        ++checks;
        if (vs.size() != 1 || !has_violation(vs, Violation::Kind::Turn, n / 2, 0.1, 1e-9)) o.pass = false;
    }
    const Params p = Params::from_sides(8, 1.0);
    DiscretePath two_short;
    two_short.start = Configuration::from_angle({0, 0}, 0.0);
    two_short.end = Configuration::from_angle({1, 0}, 0.0);
    two_short.vertices = {{0, 0}, {0.5, 0}, {1.0, 0}};
    const auto vs_short = validate(two_short, p);
    ++checks;
    if (vs_short.size() != 1 || vs_short[0].kind != Violation::Kind::Length) o.pass = false;
    const double th = p.theta;
    const DiscretePath tol = shoot(Configuration::from_angle({0, 0}, 0.0), std::vector<double>{0.0, 0.7 * th, 0.7 * th, 0.0},
                                   std::vector<double>{2.0, 0.5, 2.0});
    const auto vs_tol = validate(tol, p);
    ++checks;
    if (vs_tol.size() != 1 || !has_violation(vs_tol, Violation::Kind::TurnOverLength, 1, 0.4 * th, 1e-9)) o.pass = false;
    o.detail = std::to_string(checks) + " fixtures";
    return o;
}

Outcome typing_suite() {
    Outcome o;
    const std::set<std::string> truth{"B", "A", "AB", "BA", "AA", "ABA", "AAA"};
    const std::vector<std::string> forbidden{"BB", "BAB", "AAB", "BAA", "AAAA"};
    int words = 0;
    int mismatches = 0;
    for (int len = 1; len <= 6; ++len) {
        for (int mask = 0; mask < (1 << len); ++mask) {
            std::string w;
            for (int i = 0; i < len; ++i) w += (mask >> i) & 1 ? 'B' : 'A';
            bool clean = true;
            for (const auto& f : forbidden) clean = clean && w.find(f) == std::string::npos;
            const bool listed = truth.count(w) > 0;
            ++words;
            if (clean != listed || is_true_type(w) != listed || find_forbidden_subtype(w).has_value() == clean)
                ++mismatches;
        }
    }
    std::mt19937_64 rng(2);
    int canon_bad = 0;
    for (int i = 0; i < 500; ++i) {
        const Params p = Params::from_sides(i % 3 == 0 ? 6 : (i % 3 == 1 ? 8 : 12), 1.0);
        const DiscretePath path = fixtures::random_feasible_path(rng, p);
        const DiscretePath c = canonicalize(path, p);
        const double a = path_length(path);
        if (std::abs(path_length(c) - a) > 1e-12 * a || !is_feasible(c, p)) ++canon_bad;
    }
    o.pass = mismatches == 0 && canon_bad == 0;
    o.detail = std::to_string(words) + " words, " + std::to_string(mismatches) + " mismatches; 500 canonicalizations, " +
               std::to_string(canon_bad) + " bad";
    return o;
}

Outcome rewriter_soundness() {
    Outcome o;
    std::mt19937_64 rng(3);
    const int ns[] = {6, 8, 12};
    int bad = 0;
    int not_fixed = 0;
    int regress = 0;
    std::size_t steps = 0;
    fixtures::RandomPathOptions opt;
    opt.max_edges = 11;
    for (int i = 0; i < 500; ++i) {
        const Params p = Params::from_sides(ns[i % 3], 1.0);
        opt.separated = i % 2 == 0;
        const DiscretePath path = fixtures::random_feasible_path(rng, p, opt);
        const auto r = shorten(path, p);
        if (!r.trace.fixed_point) ++not_fixed;
        if (!is_feasible(r.path, p) || find_forbidden_subtype(type_string(r.path, p))) ++bad;
        const double eps = 1e-10 * p.ell;
        double prev = path_length(path);
        for (const RewriteStep& s : r.trace.steps) {
            const bool shorter = s.length_after <= s.length_before - eps;
            const bool tie = std::abs(s.length_after - s.length_before) <= eps && s.type_after.size() < s.type_before.size();
            if (!(shorter || tie) || std::abs(s.length_before - prev) > 1e-12 * prev) ++regress;
            prev = s.length_after;
        }
        steps += r.trace.steps.size();
    }
    o.pass = bad == 0 && not_fixed == 0 && regress == 0;
    o.detail = "500 paths, " + std::to_string(steps) + " steps; infeasible/forbidden " + std::to_string(bad) +
               ", not fixed " + std::to_string(not_fixed) + ", non-progress " + std::to_string(regress);
    return o;
}

Outcome planner_vs_oracle() {
    Outcome o;
    std::mt19937_64 rng(4);
    int fails = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const int n : {8, 16}) {
        const Params p = Params::from_sides(n, 1.0);
        for (int i = 0; i < 25; ++i) {
            const auto [u, v] = fixtures::random_instance(rng, 0.5, 6.0);
            const PlanResult r = plan(u, v, p);
            const OracleResult orc = oracle_search(u, v, p);
            const bool ok = r.length <= orc.length + 1e-6 * r.length && is_feasible(r.path, p) &&
                            is_true_type(type_string(r.path, p));
            if (!ok) ++fails;
            worst = std::max(worst, (r.length - orc.length) / r.length);
        }
    }
    o.pass = fails == 0;
    o.detail = "50 instances, " + std::to_string(fails) + " fail; max (plan-oracle)/L " + fmt("%.2e", worst);
    return o;
}

Outcome discretization() {
    Outcome o;
    std::mt19937_64 rng(5);
    int bad = 0;
    int runs = 0;
    for (int c = 0; c < 50; ++c) {
        SmoothPath g = fixtures::random_dubins_curve(rng);
        while (g.length() <= kTwoPi / 8) g = fixtures::random_dubins_curve(rng);
        for (const int n : {8, 16, 64, 360}) {
            const double theta = kTwoPi / n;
            const Params p = Params::from_theta(theta, 2.0 * std::sin(theta / 2.0));
            const DiscretePath d = discretize(g, theta);
            ++runs;
            bool ok = is_feasible(d, p);
            const auto lens = edge_lengths(d);
            for (std::size_t e = 1; e + 1 < lens.size(); ++e) ok = ok && lens[e] >= 2.0 * std::sin(kPi / n) - 1e-9;
            for (const double t : vertex_turns(d)) ok = ok && std::abs(t) <= theta + 1e-9;
            if (!ok) ++bad;
        }
    }
    o.pass = bad == 0;
    o.detail = std::to_string(runs) + " discretizations, " + std::to_string(bad) + " bad";
    return o;
}

Outcome chord_angle_sweeps() {
    Outcome o;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double min_chord = std::numeric_limits<double>::infinity();
    double min_angle = min_chord;
    std::vector<SmoothPath> curves;
    for (int i = 0; i < 100; ++i) curves.push_back(fixtures::random_dubins_curve(rng));
    for (int k = 0; k < 10000; ++k) {
        const SmoothPath& g = curves[k % curves.size()];
        const double total = g.length();
        const double t = unit(rng) * total * 0.999;
        const double span = std::min(kPi, total - t) * (1e-3 + 0.998 * unit(rng));
        const double s = t + span;
        const auto [pt, dt] = eval(g, t);
        const auto [ps, ds] = eval(g, s);
        (void)ds;
        min_chord = std::min(min_chord, distance(pt, ps) - 2.0 * std::sin(span / 2.0));
        const Vec2 ray = ps - pt;
        const double angle = std::atan2(std::abs(cross(dt, ray)), dot(dt, ray));
        min_angle = std::min(min_angle, span / 2.0 - angle);
        if (!chord_bound_check(g, t, s) || !angle_bound_check(g, t, s)) o.pass = false;
    }
    o.pass = o.pass && min_chord >= -1e-9 && min_angle >= -1e-9;
    o.detail = "10000 pairs; min chord slack " + fmt("%.2e", min_chord) + ", min angle slack " + fmt("%.2e", min_angle);
    return o;
}

Outcome convergence() {
    Outcome o;
    std::mt19937_64 rng(7);
    int sandwich_bad = 0;
    int gap_bad = 0;
    double worst_gap = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto [u, v] = fixtures::random_instance(rng, 3.0, 15.0);
        const auto rows = convergence_experiment(u, v, {8, 16, 32, 64, 128, 360});
        for (const ConvergenceRow& r : rows) {
            if (!(r.plan_length <= r.discretized_length + 1e-9 && r.discretized_length <= r.dubins_length + 1e-9))
                ++sandwich_bad;
            if (r.n == 360) {
                const double gap = (r.dubins_length - r.plan_length) / r.dubins_length;
                worst_gap = std::max(worst_gap, gap);
                if (gap > 1e-3) ++gap_bad;
            }
        }
    }
    o.pass = sandwich_bad == 0 && gap_bad == 0;
    o.detail = "20 instances; sandwich violations " + std::to_string(sandwich_bad) + "; n=360 gap > 1e-3 on " +
               std::to_string(gap_bad) + ", max gap " + fmt("%.2e", worst_gap);
    return o;
}

Outcome symmetry() {
    Outcome o;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> shift(-10.0, 10.0);
    const Params p = Params::from_sides(8, 1.0);
    auto moved = [](const Configuration& c, const RigidMotion& m) {
        return Configuration::make(m.apply_point(c.point), m.apply_vector(c.heading));
    };
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
        const auto [u, v] = fixtures::random_instance(rng, 0.5, 6.0);
        const double base = plan(u, v, p).length;
        const RigidMotion m{ang(rng), {shift(rng), shift(rng)}, false};
        const RigidMotion f{ang(rng), {shift(rng), shift(rng)}, true};
        for (const double other : {plan(moved(u, m), moved(v, m), p).length, plan(moved(u, f), moved(v, f), p).length,
                                   plan(v.reversed(), u.reversed(), p).length}) {
            worst = std::max(worst, std::abs(other - base) / base);
        }
    }
    o.pass = worst <= 1e-9;
    o.detail = "25 instances at n=8; max relative difference " + fmt("%.2e", worst);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "validator", 1.0, validator_suite},
        {2, "typing", 10.0, typing_suite},
        {3, "rewriter soundness", 120.0, rewriter_soundness},
        {4, "planner vs oracle", 300.0, planner_vs_oracle},
        {5, "discretization", 60.0, discretization},
        {6, "chord/angle sweeps", 30.0, chord_angle_sweeps},
        {7, "convergence", 600.0, convergence},
        {8, "symmetry", 120.0, symmetry},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && only.count(c.id) == 0) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.body();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit_seconds;
        const bool pass = out.pass && in_time;
        if (!pass) ++failed;
        std::printf("%s  %d %s: %s; %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    out.detail.c_str(), secs, c.limit_seconds, in_time ? "" : ", over time");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
