#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddgeo/path.hpp"
#include "ddgeo/typing.hpp"

namespace ddgeo {

/// Shape of a candidate: vertex items joined by edges, starting at u.
/// A Free item is a vertex with an unknown turn in [-theta, theta]; a leading
/// Free item is the turn at u. A Run item is `count` consecutive theta-turns of
/// one orientation joined by normal edges. A Corner item is two vertices joined
/// by an edge of unknown length and direction whose turns add up to exactly
/// theta in its orientation. Every item is followed by one edge. The turn at v
/// is implied by the closure, or fixed to theta when `flush_end` is set.
struct CandidateSpec {
    enum class ItemKind { Free, Run, Corner };
    enum class EdgeRole { Normal, Free };
    struct Item {
        ItemKind kind = ItemKind::Free;
        Orientation orientation = Orientation::Left;
        int count = 1;
    };

    std::vector<Item> items;
    std::vector<EdgeRole> edges;
    std::optional<Orientation> flush_end;

    [[nodiscard]] int free_turns() const;
    [[nodiscard]] int free_edges() const;
    [[nodiscard]] int corners() const;
    [[nodiscard]] int runs() const;
    /// Continuous parameters left after closure.
    [[nodiscard]] int driving_dims() const;
    /// Compact form such as "F n L3 f R2 n |R".
    [[nodiscard]] std::string describe() const;
};

/// Values for the unknowns of a spec: one turn per Free item, one length per
/// Free edge and one displacement per Corner.
struct CandidateUnknowns {
    std::vector<double> turns;
    std::vector<double> lengths;
    std::vector<Vec2> corners;
};

struct ForwardResult {
    DiscretePath path;
    /// |end - v.point|.
    double position_residual = 0.0;
    /// Heading mismatch at v; zero unless the end turn is fixed.
    double heading_residual = 0.0;
    /// Turn made at the last vertex.
    double final_turn = 0.0;
};

/// Builds the polyline from u; the end point is wherever the unknowns lead.
[[nodiscard]] ForwardResult forward_construct(const CandidateSpec& spec, const CandidateUnknowns& unknowns,
                                              const Configuration& u, const Configuration& v, const Params& params);

/// Shortest feasible member of the candidate family, or nullopt.
[[nodiscard]] std::optional<DiscretePath> solve_candidate(const CandidateSpec& spec, const Configuration& u,
                                                          const Configuration& v, const Params& params);

struct PlannerOptions {
    /// Full run-count enumeration when n_sides is at most this value; otherwise
    /// run counts are windowed around the smooth solutions.
    int full_enumeration_max_n = 24;
    int window = 4;
    /// Largest number of continuous parameters searched numerically per candidate.
    int max_driving = 1;
    /// Samples per driving parameter before local refinement.
    int grid = 64;
    bool parallel = true;
};

struct CandidateDiagnostic {
    std::string spec;
    double length = 0.0;
    std::string type_word;
    bool valid = false;
};

struct PlanResult {
    DiscretePath path;
    std::string type_word;
    double length = 0.0;
    double residual = 0.0;
    /// Length of the discretized smooth solution used as the initial bound.
    double upper_bound = 0.0;
    std::size_t candidates = 0;
    /// Candidates whose lower bound did not rule them out.
    std::size_t attempted = 0;
    std::size_t solved = 0;
    std::size_t infeasible = 0;
    /// Solved candidates within the tie window of the optimum.
    std::vector<CandidateDiagnostic> finalists;
};

/// Shortest path from u to v. Throws PlannerError if no candidate solves.
[[nodiscard]] PlanResult plan(const Configuration& u, const Configuration& v, const Params& params,
                              const PlannerOptions& options = {});

struct PlannerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Vertex bound: paths with more vertices than this are longer than `bound`.
[[nodiscard]] int vertex_bound(double bound, const Params& params);

struct OracleOptions {
    int restarts = 20;
    int iterations = 20000;
    std::uint64_t seed = 1;
    std::size_t rewrite_budget = 2000;
};

struct OracleResult {
    DiscretePath path;
    double length = 0.0;
    bool budget_exhausted = false;
};

/// Independent randomized search: perturbs vertex coordinates of discretized
/// smooth seeds, keeping only feasible improvements, then polishes with the rewriter.
[[nodiscard]] OracleResult oracle_search(const Configuration& u, const Configuration& v, const Params& params,
                                         const OracleOptions& options = {});

}  // namespace ddgeo
