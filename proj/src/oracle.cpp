#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ddgeo/planner.hpp"
#include "ddgeo/rewriter.hpp"
#include "ddgeo/smooth.hpp"

namespace ddgeo {

namespace {

struct Walk {
    DiscretePath path;
    double length = 0.0;
    bool exhausted = false;
};

/// Random local search from one seed: vertex moves with a shrinking radius and
/// vertex deletions, keeping only feasible improvements; then rewriter polish.
Walk descend(DiscretePath path, const Params& params, const OracleOptions& options, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double length = path_length(path);
    const double hi = 0.3 * params.ell;
    const double lo = 1e-6 * params.ell;
    for (int it = 0; it < options.iterations; ++it) {
        const std::size_t n = path.vertices.size();
        if (n <= 2) break;
        const double frac = static_cast<double>(it) / std::max(1, options.iterations - 1);
        const double sigma = hi * std::pow(lo / hi, frac);
        std::uniform_int_distribution<std::size_t> pick(1, n - 2);
        const std::size_t i = pick(rng);
        DiscretePath cand = path;
        const double r = unit(rng);
        if (r < 0.1) {
            cand.vertices.erase(cand.vertices.begin() + static_cast<std::ptrdiff_t>(i));
        } else if (r < 0.4) {
            cand.vertices[i] = cand.vertices[i] + Vec2{sigma * gauss(rng), sigma * gauss(rng)};
        } else {
            // Rigid motion of a block of consecutive vertices keeps its internal turns.
            std::uniform_int_distribution<std::size_t> pick_last(i, n - 2);
            const std::size_t j = pick_last(rng);
            if (r < 0.7) {
                const Vec2 t{sigma * gauss(rng), sigma * gauss(rng)};
                for (std::size_t k = i; k <= j; ++k) cand.vertices[k] = cand.vertices[k] + t;
            } else {
                const Point2 pivot = unit(rng) < 0.5 ? path.vertices[i - 1] : path.vertices[j + 1];
                const double angle = sigma / params.ell * gauss(rng);
                for (std::size_t k = i; k <= j; ++k) cand.vertices[k] = rotate_about(cand.vertices[k], pivot, angle);
            }
        }
        const double len = path_length(cand);
        if (len >= length) continue;
        bool ok = false;
        try {
            ok = is_feasible(cand, params);
        } catch (const std::exception&) {
            ok = false;
        }
        if (!ok) continue;
        path = std::move(cand);
        length = len;
    }
    RewriteOptions ro;
    ro.allow_replan = false;
    ro.budget = options.rewrite_budget;
    ShortenResult polished = shorten(path, params, ro);
    Walk w;
    w.path = std::move(polished.path);
    w.length = path_length(w.path);
    w.exhausted = polished.trace.budget_exhausted;
    return w;
}

}  // namespace

OracleResult oracle_search(const Configuration& u, const Configuration& v, const Params& params,
                           const OracleOptions& options) {
    std::vector<DiscretePath> seeds;
    for (DubinsWord w : kDubinsWords) {
        const auto g = dubins_word(u, v, w, params.radius());
        if (!g) continue;
        DiscretePath p = discretize(*g, params.theta);
        p.start = u;
        p.end = v;
        p.vertices.front() = u.point;
        p.vertices.back() = v.point;
        if (is_feasible(p, params)) seeds.push_back(std::move(p));
    }
    if (seeds.empty()) throw PlannerError("oracle_search: no feasible seed");
    std::sort(seeds.begin(), seeds.end(),
              [](const DiscretePath& a, const DiscretePath& b) { return path_length(a) < path_length(b); });
    const int restarts = std::max(1, options.restarts);
    std::vector<Walk> walks(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < restarts; ++r) {
        const DiscretePath& seed = seeds[static_cast<std::size_t>(r) % seeds.size()];
        walks[static_cast<std::size_t>(r)] =
            descend(seed, params, options, options.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r));
    }
    OracleResult best;
    best.length = std::numeric_limits<double>::infinity();
    for (const Walk& w : walks) {
        if (w.length < best.length) {
            best.path = w.path;
            best.length = w.length;
            best.budget_exhausted = w.exhausted;
        }
    }
    return best;
}

}  // namespace ddgeo
