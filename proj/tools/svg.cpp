#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "ddgeo/typing.hpp"

namespace ddgeo::cli {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

/// y is flipped so that the drawing has the usual orientation.
std::string points_attr(const std::vector<Point2>& pts) {
    std::string s;
    for (const Point2 p : pts) {
        if (!s.empty()) s += ' ';
        s += num(p.x) + "," + num(-p.y);
    }
    return s;
}

void polyline(std::ostringstream& out, const std::vector<Point2>& pts, const std::string& stroke, double width,
              const std::string& extra = "") {
    out << "  <polyline points=\"" << points_attr(pts) << "\" fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"" << num(width) << "\"" << extra << "/>\n";
}

void arrow(std::ostringstream& out, const Configuration& c, double size, const std::string& stroke) {
    const Point2 tip = c.point + size * c.heading;
    const Vec2 back = -size * 0.35 * c.heading;
    const Vec2 side = size * 0.2 * perp(c.heading);
    polyline(out, {c.point, tip}, stroke, size * 0.08);
    polyline(out, {tip + back + side, tip, tip + back - side}, stroke, size * 0.08);
}

}  // namespace

std::string render_svg(const DiscretePath& path, const Params& params, const SmoothPath* overlay) {
    std::vector<Point2> smooth_pts;
    if (overlay != nullptr) {
        const double total = overlay->length();
        const int samples = 400;
        for (int i = 0; i <= samples; ++i) smooth_pts.push_back(eval(*overlay, total * i / samples).first);
    }
    double lo_x = std::numeric_limits<double>::infinity();
    double lo_y = lo_x;
    double hi_x = -lo_x;
    double hi_y = -lo_x;
    auto extend = [&](Point2 p) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, -p.y);
        hi_y = std::max(hi_y, -p.y);
    };
    for (const Point2 p : path.vertices) extend(p);
    for (const Point2 p : smooth_pts) extend(p);
    const double arrow_size = params.ell * 0.6;
    extend(path.start.point + arrow_size * path.start.heading);
    extend(path.end.point + arrow_size * path.end.heading);
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    const double margin = 0.05 * span;
    const double w = hi_x - lo_x + 2.0 * margin;
    const double h = hi_y - lo_y + 2.0 * margin;
    const double stroke = span / 400.0;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\""
        << num(800.0 * h / w) << "\" viewBox=\"" << num(lo_x - margin) << ' ' << num(lo_y - margin) << ' '
        << num(w) << ' ' << num(h) << "\">\n";
    if (!smooth_pts.empty()) polyline(out, smooth_pts, "#2a9d3a", stroke * 1.5, " stroke-opacity=\"0.7\"");
    polyline(out, path.vertices, "#888888", stroke);

    bool feasible = false;
    try {
        feasible = is_feasible(path, params);
    } catch (const std::exception&) {
        feasible = false;
    }
    if (feasible) {
        const PathStructure s = analyze(path, params);
        for (const Arc& a : s.arcs) {
            std::vector<Point2> pts{a.start_pt};
            if (a.first_vertex && a.last_vertex) {
                for (std::size_t i = *a.first_vertex; i <= *a.last_vertex; ++i) pts.push_back(path.vertices[i]);
            }
            pts.push_back(a.end_pt);
            polyline(out, pts, a.orientation == Orientation::Left ? "#1f5fbf" : "#c0392b", stroke * 3.0,
                     " stroke-opacity=\"0.8\"");
        }
        for (const Bridge& b : s.bridges) {
            polyline(out, {b.start_pt, b.end_pt}, "#000000", stroke * 2.0,
                     " stroke-dasharray=\"" + num(stroke * 8.0) + "," + num(stroke * 5.0) + "\"");
        }
    }
    for (const Point2 p : path.vertices) {
        out << "  <circle cx=\"" << num(p.x) << "\" cy=\"" << num(-p.y) << "\" r=\"" << num(stroke * 2.0)
            << "\" fill=\"#333333\"/>\n";
    }
    arrow(out, path.start, arrow_size, "#2a9d3a");
    arrow(out, path.end, arrow_size, "#8e44ad");
    out << "</svg>\n";
    return out.str();
}

}  // namespace ddgeo::cli
