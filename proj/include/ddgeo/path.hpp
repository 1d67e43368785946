#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ddgeo/geometry.hpp"

namespace ddgeo {

inline constexpr double kTolLenRel = 1e-9;
inline constexpr double kTolAng = 1e-9;
inline constexpr double kTolDedupRel = 1e-12;

/// Turning bound theta = 2 pi / n_sides and nominal edge length ell.
struct Params {
    double theta = kPi / 2.0;
    double ell = 1.0;
    int n_sides = 4;

    /// Throws PreconditionError unless n_sides >= 4 and ell > 0.
    [[nodiscard]] static Params from_sides(int n_sides, double ell);
    /// Throws PreconditionError unless 2 pi / theta is an integer within 1e-9.
    [[nodiscard]] static Params from_theta(double theta, double ell);

    [[nodiscard]] double tol_len() const { return kTolLenRel * ell; }
    [[nodiscard]] double tol_dedup() const { return kTolDedupRel * ell; }
    /// Circumradius of the discrete circle.
    [[nodiscard]] double radius() const;
};

struct Configuration {
    Point2 point{};
    Vec2 heading{1.0, 0.0};

    /// Normalizes the heading; throws GeometryError on a zero vector.
    [[nodiscard]] static Configuration make(Point2 point, Vec2 heading);
    [[nodiscard]] static Configuration from_angle(Point2 point, double heading_radians);
    /// Same point, opposite heading.
    [[nodiscard]] Configuration reversed() const { return {point, -heading}; }
};

struct DiscretePath {
    Configuration start;
    Configuration end;
    std::vector<Point2> vertices;
    bool canonical = false;

    [[nodiscard]] std::size_t edge_count() const {
        return vertices.empty() ? 0 : vertices.size() - 1;
    }
};

enum class EdgeClass { Short, Normal, Long };

struct Violation {
    enum class Kind { Turn, Length, TurnOverLength, PreEdge, PostEdge };
    Kind kind = Kind::Turn;
    /// Vertex index for turn kinds, edge index otherwise.
    std::size_t location = 0;
    double magnitude = 0.0;
};

[[nodiscard]] const char* to_string(EdgeClass c);
[[nodiscard]] const char* to_string(Violation::Kind k);
[[nodiscard]] std::string describe(const Violation& v);

[[nodiscard]] EdgeClass classify_edge(double length, const Params& params);

/// [u'] ++ vertices ++ [v'] with pre/post-edges of length ell.
[[nodiscard]] std::vector<Point2> augmented(const DiscretePath& path, const Params& params);

/// Turn at every path vertex measured on the augmented path (index i = vertex i).
[[nodiscard]] std::vector<double> vertex_turns(const DiscretePath& path);

[[nodiscard]] std::vector<double> edge_lengths(const DiscretePath& path);

/// True iff the turns at the two ends of the edge have strictly opposite signs.
[[nodiscard]] bool is_inflection(const DiscretePath& path, std::size_t edge_index);

/// Sign with |turn| <= tol_ang mapped to zero.
[[nodiscard]] int turn_sign(double turn);

/// Throws GeometryError on repeated vertices, PreconditionError on broken endpoints.
void check_invariants(const DiscretePath& path, const Params& params);

[[nodiscard]] std::vector<Violation> validate(const DiscretePath& path, const Params& params);
[[nodiscard]] bool is_feasible(const DiscretePath& path, const Params& params);

[[nodiscard]] double path_length(const DiscretePath& path);

/// The same point set traversed from v to u with flipped headings.
[[nodiscard]] DiscretePath reversed(const DiscretePath& path);
[[nodiscard]] DiscretePath transformed(const DiscretePath& path, const RigidMotion& motion);

/// Drops internal vertices whose turn is zero within tol_ang.
[[nodiscard]] DiscretePath without_straight_vertices(const DiscretePath& path);

/// Builds a path from a start configuration by alternating turns and edge lengths:
/// turns[i] is applied before edge i; the last turn gives the end heading.
/// Requires turns.size() == lengths.size() + 1.
[[nodiscard]] DiscretePath shoot(const Configuration& start, std::span<const double> turns,
                                 std::span<const double> lengths);

}  // namespace ddgeo
