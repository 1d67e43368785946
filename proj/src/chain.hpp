#pragma once

#include <optional>
#include <vector>

#include "ddgeo/path.hpp"

namespace ddgeo::detail {

/// One step of a chain template. Turn-like ops (FreeTurn, Run, Corner) alternate
/// with edge ops (NormalEdge, FreeEdge).
struct Op {
    enum Kind { FreeTurn, NormalEdge, FreeEdge, Run, Corner } kind = FreeTurn;
    int index = 0;  // FreeTurn / FreeEdge slot
    int count = 0;  // Run: number of theta vertices
    int sign = 1;   // Run / Corner orientation
};

/// Alternating turn/edge sequence from u to v. The first op is the turn at u.
/// A Corner is a free turn, a free edge and a second turn that together turn by
/// exactly sign * theta (a short edge with an active turn-over-length bound).
/// The turn at v is implied by the end heading unless end_sign fixes it to
/// end_sign * theta; then the last free turn absorbs the heading equation.
struct Chain {
    std::vector<Op> ops;
    int free_turns = 0;
    int free_edges = 0;
    int corners = 0;
    int end_sign = 0;
    double fixed_length = 0.0;
};

struct ChainSolution {
    double length = 0.0;
    double residual = 0.0;
    std::vector<double> turns;    // every vertex turn, u first, v last
    std::vector<double> lengths;  // every edge length
};

struct ChainSearch {
    int grid = 16;
    int golden_iterations = 60;
    int max_driving = 2;
    /// Local minima of the grid refined at the outermost / inner search levels.
    int outer_minima = 3;
    int inner_minima = 2;
};

/// Turns left free after closure; negative when the chain is overdetermined.
[[nodiscard]] int driving_dims(const Chain& c);

/// Lower bound on the length of any feasible realization; +inf when the heading
/// intervals of the chain cannot reach v.
[[nodiscard]] double lower_bound(const Chain& chain, const Configuration& u, const Configuration& v,
                                 const Params& params);

/// Minimum-length feasible realization of the chain between u and v, or nullopt.
[[nodiscard]] std::optional<ChainSolution> solve_chain(const Chain& chain, const Configuration& u,
                                                       const Configuration& v, const Params& params,
                                                       const ChainSearch& search = {});

/// Explicit path from a chain solution.
[[nodiscard]] DiscretePath realize(const ChainSolution& s, const Configuration& u, const Configuration& v);

}  // namespace ddgeo::detail
