#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddgeo/path.hpp"

namespace ddgeo {

enum class SegmentKind { Left, Right, Straight };

struct Segment {
    SegmentKind kind = SegmentKind::Straight;
    /// Arclength; for arcs this is radius times the sweep angle.
    double length = 0.0;
};

/// Arc-line word with a common arc radius, parameterized by arclength.
struct SmoothPath {
    Configuration start;
    std::vector<Segment> segments;
    double radius = 1.0;

    [[nodiscard]] double length() const;
    /// Appends a segment, skipping zero lengths.
    void push(SegmentKind kind, double length);
};

[[nodiscard]] char to_char(SegmentKind k);
[[nodiscard]] std::string word_of(const SmoothPath& g);

/// Point and unit tangent at arclength t; throws PreconditionError out of range.
[[nodiscard]] std::pair<Point2, Vec2> eval(const SmoothPath& g, double t);
[[nodiscard]] Configuration end_configuration(const SmoothPath& g);

/// |g(s) - g(t)| >= 2 sin((s - t)/2) - 1e-9 for unit-radius curves; requires t < s < t + pi.
[[nodiscard]] bool chord_bound_check(const SmoothPath& g, double t, double s);
/// Angle between g'(t) and the ray g(t) -> g(s) is at most (s - t)/2 + 1e-9.
[[nodiscard]] bool angle_bound_check(const SmoothPath& g, double t, double s);
/// Signed slacks of the two bounds above (nonnegative when they hold).
[[nodiscard]] double chord_bound_slack(const SmoothPath& g, double t, double s);
[[nodiscard]] double angle_bound_slack(const SmoothPath& g, double t, double s);

struct DiscretizationPlan {
    double theta = 0.0;
    int m = 0;
    double delta = 0.0;
    std::vector<double> breakpoints;
};

[[nodiscard]] DiscretizationPlan discretization_plan(double total_length, double step);

/// theta-discretization of a unit-radius curve; the result is feasible for
/// Params(theta, 2 sin(theta/2)). For radius r the step is r*theta and ell scales by r.
[[nodiscard]] DiscretePath discretize(const SmoothPath& g, double theta);
[[nodiscard]] Params discretization_params(const SmoothPath& g, double theta);

enum class DubinsWord { LSL, RSR, LSR, RSL, RLR, LRL };
inline constexpr std::array<DubinsWord, 6> kDubinsWords{DubinsWord::LSL, DubinsWord::RSR, DubinsWord::LSR,
                                                        DubinsWord::RSL, DubinsWord::RLR, DubinsWord::LRL};
[[nodiscard]] const char* to_string(DubinsWord w);

/// Closed-form solution of one word, or nullopt when the word does not exist.
[[nodiscard]] std::optional<SmoothPath> dubins_word(const Configuration& u, const Configuration& v,
                                                    DubinsWord word, double radius = 1.0);
/// Shortest of the six words.
[[nodiscard]] SmoothPath dubins_solve(const Configuration& u, const Configuration& v, double radius = 1.0);

struct ConvergenceRow {
    int n = 0;
    double theta = 0.0;
    double ell = 0.0;
    double plan_length = 0.0;
    double discretized_length = 0.0;
    double dubins_length = 0.0;
};

[[nodiscard]] std::vector<ConvergenceRow> convergence_experiment(const Configuration& u, const Configuration& v,
                                                                 const std::vector<int>& n_list);

}  // namespace ddgeo
