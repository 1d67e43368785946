#include "ddgeo/smooth.hpp"

#include <algorithm>
#include <limits>

namespace ddgeo {

namespace {

Configuration advance(const Configuration& c, const Segment& seg, double a, double radius) {
    switch (seg.kind) {
        case SegmentKind::Straight:
            return {c.point + a * c.heading, c.heading};
        case SegmentKind::Left:
        case SegmentKind::Right: {
            const double sg = seg.kind == SegmentKind::Left ? 1.0 : -1.0;
            const double phi = sg * a / radius;
            const Point2 center = c.point + sg * radius * perp(c.heading);
            return {rotate_about(c.point, center, phi), rotate(c.heading, phi)};
        }
    }
    return c;
}

double mod2pi(double a) {
    const double r = wrap_positive(a);
    return r > kTwoPi - 1e-12 ? 0.0 : r;
}

}  // namespace

double SmoothPath::length() const {
    double total = 0.0;
    for (const Segment& s : segments) total += s.length;
    return total;
}

void SmoothPath::push(SegmentKind kind, double len) {
    if (len > 0.0) segments.push_back({kind, len});
}

char to_char(SegmentKind k) {
    switch (k) {
        case SegmentKind::Left: return 'L';
        case SegmentKind::Right: return 'R';
        case SegmentKind::Straight: return 'S';
    }
    return '?';
}

std::string word_of(const SmoothPath& g) {
    std::string w;
    for (const Segment& s : g.segments) w.push_back(to_char(s.kind));
    return w;
}

std::pair<Point2, Vec2> eval(const SmoothPath& g, double t) {
    const double total = g.length();
    const double slack = 1e-12 * std::max(1.0, total);
    if (t < -slack || t > total + slack) throw PreconditionError("eval outside [0, |g|]");
    t = std::clamp(t, 0.0, total);
    Configuration c = g.start;
    for (std::size_t i = 0; i < g.segments.size(); ++i) {
        const Segment& seg = g.segments[i];
        if (t <= seg.length || i + 1 == g.segments.size()) {
            const Configuration r = advance(c, seg, std::min(t, seg.length), g.radius);
            return {r.point, r.heading};
        }
        c = advance(c, seg, seg.length, g.radius);
        t -= seg.length;
    }
    return {c.point, c.heading};
}

Configuration end_configuration(const SmoothPath& g) {
    const auto [p, h] = eval(g, g.length());
    return {p, h};
}

namespace {

void check_pair(const SmoothPath& g, double t, double s) {
    const double total = g.length();
    if (!(t < s) || !(s < t + kPi * g.radius) || t < 0.0 || s > total + 1e-12 * std::max(1.0, total)) {
        throw PreconditionError("bound check needs 0 <= t < s < t + pi <= |g|");
    }
}

}  // namespace

double chord_bound_slack(const SmoothPath& g, double t, double s) {
    check_pair(g, t, s);
    const double r = g.radius;
    return distance(eval(g, t).first, eval(g, s).first) - 2.0 * r * std::sin((s - t) / (2.0 * r));
}

double angle_bound_slack(const SmoothPath& g, double t, double s) {
    check_pair(g, t, s);
    const auto [p, h] = eval(g, t);
    const Point2 q = eval(g, s).first;
    const double angle = std::abs(turn_angle(h, q - p));
    return (s - t) / (2.0 * g.radius) - angle;
}

bool chord_bound_check(const SmoothPath& g, double t, double s) { return chord_bound_slack(g, t, s) >= -1e-9; }
bool angle_bound_check(const SmoothPath& g, double t, double s) { return angle_bound_slack(g, t, s) >= -1e-9; }

DiscretizationPlan discretization_plan(double total_length, double step) {
    if (!(step < total_length)) throw PreconditionError("discretization step must be shorter than the curve");
    DiscretizationPlan plan;
    plan.theta = step;
    plan.m = static_cast<int>(std::floor(total_length / step + 1e-9));
    plan.delta = total_length - plan.m * step;
    if (plan.delta < 1e-9 * step) plan.delta = 0.0;
    plan.breakpoints.push_back(0.0);
    if (plan.delta == 0.0) {
        for (int i = 1; i < plan.m; ++i) plan.breakpoints.push_back(i * step);
    } else {
        for (int i = 0; i <= plan.m; ++i) plan.breakpoints.push_back(plan.delta / 2.0 + i * step);
    }
    plan.breakpoints.push_back(total_length);
    return plan;
}

Params discretization_params(const SmoothPath& g, double theta) {
    return Params::from_theta(theta, 2.0 * g.radius * std::sin(theta / 2.0));
}

DiscretePath discretize(const SmoothPath& g, double theta) {
    const DiscretizationPlan plan = discretization_plan(g.length(), theta * g.radius);
    DiscretePath out;
    out.start = g.start;
    out.end = end_configuration(g);
    for (const double t : plan.breakpoints) out.vertices.push_back(eval(g, t).first);
    out.vertices.front() = out.start.point;
    out.vertices.back() = out.end.point;
    return out;
}

const char* to_string(DubinsWord w) {
    switch (w) {
        case DubinsWord::LSL: return "LSL";
        case DubinsWord::RSR: return "RSR";
        case DubinsWord::LSR: return "LSR";
        case DubinsWord::RSL: return "RSL";
        case DubinsWord::RLR: return "RLR";
        case DubinsWord::LRL: return "LRL";
    }
    return "?";
}

std::optional<SmoothPath> dubins_word(const Configuration& u, const Configuration& v, DubinsWord word,
                                      double radius) {
    const Vec2 dv = v.point - u.point;
    const double d = norm(dv) / radius;
    const double frame = d > 0.0 ? heading_angle(dv) : 0.0;
    const double alpha = mod2pi(heading_angle(u.heading) - frame);
    const double beta = mod2pi(heading_angle(v.heading) - frame);
    const double sa = std::sin(alpha), sb = std::sin(beta);
    const double ca = std::cos(alpha), cb = std::cos(beta);
    const double cab = std::cos(alpha - beta);

    double t = 0.0, p = 0.0, q = 0.0;
    SegmentKind k0{}, k1{}, k2{};
    using K = SegmentKind;
    switch (word) {
        case DubinsWord::LSL: {
            const double p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sa - sb);
            if (p2 < 0.0) return std::nullopt;
            const double tmp = std::atan2(cb - ca, d + sa - sb);
            t = mod2pi(tmp - alpha);
            p = std::sqrt(p2);
            q = mod2pi(beta - tmp);
            k0 = K::Left, k1 = K::Straight, k2 = K::Left;
            break;
        }
        case DubinsWord::RSR: {
            const double p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sb - sa);
            if (p2 < 0.0) return std::nullopt;
            const double tmp = std::atan2(ca - cb, d - sa + sb);
            t = mod2pi(alpha - tmp);
            p = std::sqrt(p2);
            q = mod2pi(tmp - beta);
            k0 = K::Right, k1 = K::Straight, k2 = K::Right;
            break;
        }
        case DubinsWord::LSR: {
            const double p2 = -2.0 + d * d + 2.0 * cab + 2.0 * d * (sa + sb);
            if (p2 < 0.0) return std::nullopt;
            p = std::sqrt(p2);
            const double tmp = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
            t = mod2pi(tmp - alpha);
            q = mod2pi(tmp - beta);
            k0 = K::Left, k1 = K::Straight, k2 = K::Right;
            break;
        }
        case DubinsWord::RSL: {
            const double p2 = -2.0 + d * d + 2.0 * cab - 2.0 * d * (sa + sb);
            if (p2 < 0.0) return std::nullopt;
            p = std::sqrt(p2);
            const double tmp = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
            t = mod2pi(alpha - tmp);
            q = mod2pi(beta - tmp);
            k0 = K::Right, k1 = K::Straight, k2 = K::Left;
            break;
        }
        case DubinsWord::RLR: {
            const double c = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sa - sb)) / 8.0;
            if (std::abs(c) > 1.0) return std::nullopt;
            const double phi = std::atan2(ca - cb, d - sa + sb);
            p = mod2pi(kTwoPi - std::acos(c));
            t = mod2pi(alpha - phi + mod2pi(p / 2.0));
            q = mod2pi(alpha - beta - t + mod2pi(p));
            k0 = K::Right, k1 = K::Left, k2 = K::Right;
            break;
        }
        case DubinsWord::LRL: {
            const double c = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sb - sa)) / 8.0;
            if (std::abs(c) > 1.0) return std::nullopt;
            const double phi = std::atan2(ca - cb, d + sa - sb);
            p = mod2pi(kTwoPi - std::acos(c));
            t = mod2pi(-alpha - phi + p / 2.0);
            q = mod2pi(mod2pi(beta) - alpha - t + mod2pi(p));
            k0 = K::Left, k1 = K::Right, k2 = K::Left;
            break;
        }
    }
    SmoothPath g;
    g.start = u;
    g.radius = radius;
    g.push(k0, t * radius);
    g.push(k1, p * radius);
    g.push(k2, q * radius);
    const Configuration e = end_configuration(g);
    const double scale = std::max(1.0, norm(dv));
    if (distance(e.point, v.point) > 1e-8 * scale || std::abs(turn_angle(e.heading, v.heading)) > 1e-8) {
        return std::nullopt;
    }
    return g;
}

SmoothPath dubins_solve(const Configuration& u, const Configuration& v, double radius) {
    if (distance(u.point, v.point) == 0.0 && std::abs(turn_angle(u.heading, v.heading)) < 1e-15) {
        SmoothPath g;
        g.start = u;
        g.radius = radius;
        return g;
    }
    std::optional<SmoothPath> best;
    for (const DubinsWord w : kDubinsWords) {
        auto g = dubins_word(u, v, w, radius);
        if (g && (!best || g->length() < best->length())) best = std::move(g);
    }
    if (!best) throw std::logic_error("no Dubins word reached the goal");
    return *best;
}

}  // namespace ddgeo
