#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace ddgeo {

/// Raised on zero vectors, repeated vertices and similar degenerate input.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an operation is called outside its documented precondition.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kTolParallel = 1e-12;
inline constexpr double kTolUnit = 1e-9;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

using Point2 = Vec2;

[[nodiscard]] constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
[[nodiscard]] constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
[[nodiscard]] inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
[[nodiscard]] inline double distance(Point2 a, Point2 b) { return norm(b - a); }
/// Left normal (counterclockwise quarter turn).
[[nodiscard]] constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// Unit vector; throws GeometryError on a zero vector.
[[nodiscard]] Vec2 normalized(Vec2 a);
[[nodiscard]] Vec2 unit_from_angle(double radians);
[[nodiscard]] double heading_angle(Vec2 a);

/// Maps an angle into (-pi, pi].
[[nodiscard]] double wrap_angle(double a);
/// Maps an angle into [0, 2pi).
[[nodiscard]] double wrap_positive(double a);

/// Signed angle from incoming to outgoing, left positive, in (-pi, pi].
[[nodiscard]] double turn_angle(Vec2 incoming, Vec2 outgoing);

[[nodiscard]] Vec2 rotate(Vec2 v, double angle);
[[nodiscard]] Point2 rotate_about(Point2 p, Point2 center, double angle);

/// Intersection of two supporting lines, or nullopt when they are parallel.
[[nodiscard]] std::optional<Point2> line_intersection(Point2 p1, Vec2 d1, Point2 p2, Vec2 d2);

[[nodiscard]] double point_line_distance(Point2 p, Point2 origin, Vec2 direction);

/// Rotation by angle followed by translation; reflect mirrors y before rotating.
struct RigidMotion {
    double angle = 0.0;
    Vec2 translation{};
    bool reflect = false;

    [[nodiscard]] Point2 apply_point(Point2 p) const;
    [[nodiscard]] Vec2 apply_vector(Vec2 v) const;
};

[[nodiscard]] std::string to_string(Vec2 v);

}  // namespace ddgeo
