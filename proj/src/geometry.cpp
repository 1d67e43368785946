#include "ddgeo/geometry.hpp"

#include <cstdio>

namespace ddgeo {

Vec2 normalized(Vec2 a) {
    const double n = norm(a);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw GeometryError("cannot normalize a zero or non-finite vector");
    }
    return a / n;
}

Vec2 unit_from_angle(double radians) { return {std::cos(radians), std::sin(radians)}; }

double heading_angle(Vec2 a) { return std::atan2(a.y, a.x); }

double wrap_angle(double a) {
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

double wrap_positive(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

double turn_angle(Vec2 incoming, Vec2 outgoing) {
    if ((incoming.x == 0.0 && incoming.y == 0.0) || (outgoing.x == 0.0 && outgoing.y == 0.0)) {
        throw GeometryError("turn_angle of a zero vector");
    }
    const double a = std::atan2(cross(incoming, outgoing), dot(incoming, outgoing));
    return a == -kPi ? kPi : a;
}

Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Point2 rotate_about(Point2 p, Point2 center, double angle) {
    return center + rotate(p - center, angle);
}

std::optional<Point2> line_intersection(Point2 p1, Vec2 d1, Point2 p2, Vec2 d2) {
    const Vec2 u1 = normalized(d1);
    const Vec2 u2 = normalized(d2);
    const double c = cross(u1, u2);
    if (std::abs(c) < kTolParallel) return std::nullopt;
    const double t = cross(p2 - p1, u2) / c;
    return p1 + t * u1;
}

double point_line_distance(Point2 p, Point2 origin, Vec2 direction) {
    return std::abs(cross(normalized(direction), p - origin));
}

Point2 RigidMotion::apply_point(Point2 p) const { return apply_vector(p) + translation; }

Vec2 RigidMotion::apply_vector(Vec2 v) const {
    if (reflect) v.y = -v.y;
    return rotate(v, angle);
}

std::string to_string(Vec2 v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", v.x, v.y);
    return buf;
}

}  // namespace ddgeo
