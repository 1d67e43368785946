#pragma once

#include <random>
#include <vector>

#include "ddgeo/path.hpp"
#include "ddgeo/smooth.hpp"

namespace ddgeo::fixtures {

/// Traversal of `edges` sides of the regular n-gon with side ell, flush at both ends.
inline DiscretePath ngon_path(int n, double ell, int edges) {
    const Params p = Params::from_sides(n, ell);
    std::vector<double> turns(edges + 1, p.theta);
    std::vector<double> lengths(edges, ell);
    return shoot(Configuration::from_angle({0.0, 0.0}, 0.0), turns, lengths);
}

struct RandomPathOptions {
    int max_edges = 11;
    /// Only Normal edges may neighbour Short or Long edges (the shape canonicalize needs).
    bool separated = true;
    double p_theta = 0.45;
};

/// Random feasible path built by shooting random turns and edge classes; retries until feasible.
inline DiscretePath random_feasible_path(std::mt19937_64& rng, const Params& params,
                                         const RandomPathOptions& opt = {}) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double th = params.theta;
    const double ell = params.ell;
    auto rand_turn = [&](double lo, double hi) {
        if (unit(rng) < opt.p_theta) {
            const double pick = unit(rng) < 0.5 ? -th : th;
            if (pick >= lo && pick <= hi) return pick;
        }
        return lo + (hi - lo) * unit(rng);
    };
    for (;;) {
        std::uniform_int_distribution<int> ne(1, opt.max_edges);
        const int edges = ne(rng);
        std::vector<double> lengths(edges);
        std::vector<int> cls(edges);
        for (int e = 0; e < edges; ++e) {
            const double r = unit(rng);
            int c = r < 0.45 ? 1 : (r < 0.75 ? 2 : 0);
            if (c == 0 && e > 0 && cls[e - 1] != 1) c = 1;
            if (c == 2 && opt.separated && e > 0 && cls[e - 1] != 1) c = 1;
            cls[e] = c;
        }
        for (int e = 0; e < edges; ++e) {
            if (cls[e] == 0) lengths[e] = ell * (0.15 + 0.8 * unit(rng));
            else if (cls[e] == 1) lengths[e] = ell;
            else lengths[e] = ell * (1.2 + 2.5 * unit(rng));
        }
        std::vector<double> turns(edges + 1);
        turns[0] = rand_turn(-th, th);
        for (int i = 1; i <= edges; ++i) {
            double lo = -th, hi = th;
            if (cls[i - 1] == 0 && unit(rng) < 0.7) {
                const double prev = turns[i - 1];
                if (prev > 0) { lo = -th; hi = th - prev; }
                else if (prev < 0) { lo = -th - prev; hi = th; }
            }
            turns[i] = rand_turn(lo, hi);
        }
        std::uniform_real_distribution<double> ang(-kPi, kPi);
        std::uniform_real_distribution<double> pos(-5.0, 5.0);
        DiscretePath path = shoot(Configuration::from_angle({pos(rng), pos(rng)}, ang(rng)), turns, lengths);
        if (is_feasible(path, params)) return path;
    }
}

/// Random configuration pair with |uv| in [dmin, dmax].
inline std::pair<Configuration, Configuration> random_instance(std::mt19937_64& rng, double dmin, double dmax) {
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> dist(dmin, dmax);
    std::uniform_real_distribution<double> pos(-3.0, 3.0);
    const Point2 u{pos(rng), pos(rng)};
    const Point2 v = u + dist(rng) * unit_from_angle(ang(rng));
    return {Configuration::from_angle(u, ang(rng)), Configuration::from_angle(v, ang(rng))};
}

/// Random unit-radius Dubins-type curve with 1 to 3 segments.
inline SmoothPath random_dubins_curve(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    SmoothPath g;
    g.start = Configuration::from_angle({4.0 * unit(rng) - 2.0, 4.0 * unit(rng) - 2.0}, ang(rng));
    const bool ccc = unit(rng) < 0.3;
    const SegmentKind first = unit(rng) < 0.5 ? SegmentKind::Left : SegmentKind::Right;
    const SegmentKind other = first == SegmentKind::Left ? SegmentKind::Right : SegmentKind::Left;
    const SegmentKind last = unit(rng) < 0.5 ? first : other;
    g.push(first, 0.1 + (kTwoPi - 0.1) * unit(rng));
    if (ccc) {
        g.push(other, kPi + (kPi - 0.1) * unit(rng));
        g.push(first, 0.1 + (kTwoPi - 0.1) * unit(rng));
    } else {
        g.push(SegmentKind::Straight, 0.2 + 10.0 * unit(rng));
        g.push(last, 0.1 + (kTwoPi - 0.1) * unit(rng));
    }
    return g;
}

}  // namespace ddgeo::fixtures
