#include "ddgeo/path.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace ddgeo {

Params Params::from_sides(int n_sides, double ell) {
    if (n_sides < 4) throw PreconditionError("n_sides must be at least 4");
    if (!(ell > 0.0) || !std::isfinite(ell)) throw PreconditionError("ell must be positive");
    return Params{kTwoPi / n_sides, ell, n_sides};
}

Params Params::from_theta(double theta, double ell) {
    if (!(theta > 0.0)) throw PreconditionError("theta must be positive");
    const double n = kTwoPi / theta;
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > 1e-9 * rounded) {
        throw PreconditionError("2*pi/theta must be an integer");
    }
    return from_sides(static_cast<int>(rounded), ell);
}

double Params::radius() const { return ell / (2.0 * std::sin(theta / 2.0)); }

Configuration Configuration::make(Point2 point, Vec2 heading) {
    return {point, normalized(heading)};
}

Configuration Configuration::from_angle(Point2 point, double heading_radians) {
    return {point, unit_from_angle(heading_radians)};
}

const char* to_string(EdgeClass c) {
    switch (c) {
        case EdgeClass::Short: return "Short";
        case EdgeClass::Normal: return "Normal";
        case EdgeClass::Long: return "Long";
    }
    return "?";
}

const char* to_string(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::Turn: return "Turn";
        case Violation::Kind::Length: return "Length";
        case Violation::Kind::TurnOverLength: return "TurnOverLength";
        case Violation::Kind::PreEdge: return "PreEdge";
        case Violation::Kind::PostEdge: return "PostEdge";
    }
    return "?";
}

std::string describe(const Violation& v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s at %zu (magnitude %.6g)", to_string(v.kind), v.location,
                  v.magnitude);
    return buf;
}

EdgeClass classify_edge(double length, const Params& params) {
    if (!(length > 0.0)) throw GeometryError("edge length must be positive");
    const double tol = params.tol_len();
    if (length < params.ell - tol) return EdgeClass::Short;
    if (length > params.ell + tol) return EdgeClass::Long;
    return EdgeClass::Normal;
}

std::vector<Point2> augmented(const DiscretePath& path, const Params& params) {
    std::vector<Point2> out;
    out.reserve(path.vertices.size() + 2);
    out.push_back(path.start.point - params.ell * path.start.heading);
    out.insert(out.end(), path.vertices.begin(), path.vertices.end());
    out.push_back(path.end.point + params.ell * path.end.heading);
    return out;
}

std::vector<double> vertex_turns(const DiscretePath& path) {
    const std::size_t n = path.vertices.size();
    std::vector<double> turns(n);
    Vec2 incoming = path.start.heading;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 outgoing = i + 1 < n ? path.vertices[i + 1] - path.vertices[i] : path.end.heading;
        turns[i] = turn_angle(incoming, outgoing);
        incoming = outgoing;
    }
    return turns;
}

std::vector<double> edge_lengths(const DiscretePath& path) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        out.push_back(distance(path.vertices[i], path.vertices[i + 1]));
    }
    return out;
}

int turn_sign(double turn) {
    if (turn > kTolAng) return 1;
    if (turn < -kTolAng) return -1;
    return 0;
}

bool is_inflection(const DiscretePath& path, std::size_t edge_index) {
    if (edge_index >= path.edge_count()) throw std::out_of_range("edge index out of range");
    const Vec2 before = edge_index == 0 ? path.start.heading
                                        : path.vertices[edge_index] - path.vertices[edge_index - 1];
    const Vec2 edge = path.vertices[edge_index + 1] - path.vertices[edge_index];
    const Vec2 after = edge_index + 2 < path.vertices.size()
                           ? path.vertices[edge_index + 2] - path.vertices[edge_index + 1]
                           : path.end.heading;
    return turn_sign(turn_angle(before, edge)) * turn_sign(turn_angle(edge, after)) < 0;
}

void check_invariants(const DiscretePath& path, const Params& params) {
    if (path.vertices.empty()) throw PreconditionError("path has no vertices");
    for (const Vec2 h : {path.start.heading, path.end.heading}) {
        if (std::abs(norm(h) - 1.0) > kTolUnit) throw PreconditionError("heading is not a unit vector");
    }
    const double tol = params.tol_len();
    if (distance(path.vertices.front(), path.start.point) > tol ||
        distance(path.vertices.back(), path.end.point) > tol) {
        throw PreconditionError("path endpoints do not match its configurations");
    }
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        if (!(distance(path.vertices[i], path.vertices[i + 1]) > params.tol_dedup())) {
            throw GeometryError("repeated vertex at index " + std::to_string(i + 1));
        }
    }
}

std::vector<Violation> validate(const DiscretePath& path, const Params& params) {
    check_invariants(path, params);
    using Kind = Violation::Kind;
    std::vector<Violation> out;
    const std::size_t nv = path.vertices.size();
    const std::vector<double> turns = vertex_turns(path);
    const std::vector<double> lengths = edge_lengths(path);
    const double limit = params.theta + kTolAng;

    for (std::size_t i = 0; i < nv; ++i) {
        const double a = std::abs(turns[i]);
        if (a > limit) {
            const Kind kind = i == 0 ? Kind::PreEdge : (i + 1 == nv ? Kind::PostEdge : Kind::Turn);
            out.push_back({kind, i, a - params.theta});
        }
    }
    std::vector<EdgeClass> classes;
    for (const double l : lengths) classes.push_back(classify_edge(l, params));
    for (std::size_t e = 0; e + 1 < classes.size(); ++e) {
        if (classes[e] == EdgeClass::Short && classes[e + 1] == EdgeClass::Short) {
            out.push_back({Kind::Length, e, params.ell - std::max(lengths[e], lengths[e + 1])});
        }
    }
    for (std::size_t e = 0; e < classes.size(); ++e) {
        if (classes[e] != EdgeClass::Short) continue;
        if (turn_sign(turns[e]) * turn_sign(turns[e + 1]) < 0) continue;
        const double a = std::abs(turns[e] + turns[e + 1]);
        if (a > limit) {
            const Kind kind = e == 0 ? Kind::PreEdge
                                     : (e + 1 == classes.size() ? Kind::PostEdge : Kind::TurnOverLength);
            out.push_back({kind, e, a - params.theta});
        }
    }
    return out;
}

bool is_feasible(const DiscretePath& path, const Params& params) {
    return validate(path, params).empty();
}

double path_length(const DiscretePath& path) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        total += distance(path.vertices[i], path.vertices[i + 1]);
    }
    return total;
}

DiscretePath reversed(const DiscretePath& path) {
    DiscretePath out;
    out.start = path.end.reversed();
    out.end = path.start.reversed();
    out.vertices.assign(path.vertices.rbegin(), path.vertices.rend());
    out.canonical = path.canonical;
    return out;
}

DiscretePath transformed(const DiscretePath& path, const RigidMotion& motion) {
    DiscretePath out;
    out.start = {motion.apply_point(path.start.point), motion.apply_vector(path.start.heading)};
    out.end = {motion.apply_point(path.end.point), motion.apply_vector(path.end.heading)};
    for (const Point2 p : path.vertices) out.vertices.push_back(motion.apply_point(p));
    out.canonical = path.canonical;
    return out;
}

DiscretePath without_straight_vertices(const DiscretePath& path) {
    DiscretePath out = path;
    out.canonical = false;
    if (path.vertices.size() <= 2) return out;
    const std::vector<double> turns = vertex_turns(path);
    out.vertices.clear();
    out.vertices.push_back(path.vertices.front());
    for (std::size_t i = 1; i + 1 < path.vertices.size(); ++i) {
        if (turn_sign(turns[i]) != 0) out.vertices.push_back(path.vertices[i]);
    }
    out.vertices.push_back(path.vertices.back());
    return out;
}

DiscretePath shoot(const Configuration& start, std::span<const double> turns,
                   std::span<const double> lengths) {
    if (turns.size() != lengths.size() + 1) {
        throw PreconditionError("shoot needs one more turn than edge lengths");
    }
    DiscretePath out;
    out.start = start;
    double angle = heading_angle(start.heading);
    Point2 p = start.point;
    out.vertices.push_back(p);
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        angle += turns[i];
        p += lengths[i] * unit_from_angle(angle);
        out.vertices.push_back(p);
    }
    angle += turns.back();
    out.end = {p, unit_from_angle(angle)};
    return out;
}

}  // namespace ddgeo
