#include "document.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ddgeo/typing.hpp"

namespace ddgeo::cli {

using nlohmann::json;

namespace {

constexpr double kDegree = kPi / 180.0;

json point_json(Point2 p) { return json::array({p.x, p.y}); }

Point2 point_from(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw DocumentError(field + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

double number_from(const json& j, const std::string& field) {
    if (!j.is_number()) throw DocumentError(field + ": expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw DocumentError(field + ": not finite");
    return x;
}

const json& member(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw DocumentError(where + ": missing \"" + key + "\"");
    return *it;
}

json pose_json(const PoseRecord& r) {
    return {{"point", json::array({r.x, r.y})}, {"heading_degrees", r.heading_degrees}};
}

PoseRecord pose_from(const json& j, const std::string& where) {
    if (!j.is_object()) throw DocumentError(where + ": expected an object");
    const Point2 p = point_from(member(j, "point", where), where + ".point");
    const double h = number_from(member(j, "heading_degrees", where), where + ".heading_degrees");
    return {p.x, p.y, normalize_degrees(h)};
}

/// 1-based line and column of a byte offset.
std::string position_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

double normalize_degrees(double degrees) {
    double d = std::remainder(degrees, 360.0);
    if (d <= -180.0) d += 360.0;
    return d;
}

PoseRecord to_record(const Configuration& c) {
    return {c.point.x, c.point.y, normalize_degrees(heading_angle(c.heading) / kDegree)};
}

Configuration to_configuration(const PoseRecord& r) {
    return Configuration::from_angle({r.x, r.y}, r.heading_degrees * kDegree);
}

Params params_of(const PathDocument& doc) {
    if (doc.n_sides) return Params::from_sides(*doc.n_sides, doc.ell);
    if (doc.theta_degrees) return Params::from_theta(*doc.theta_degrees * kDegree, doc.ell);
    throw DocumentError("params: need n_sides or theta_degrees");
}

void set_params(PathDocument& doc, const Params& params) {
    doc.n_sides = params.n_sides;
    doc.theta_degrees.reset();
    doc.ell = params.ell;
}

DiscretePath path_of(const PathDocument& doc) {
    DiscretePath p;
    p.start = to_configuration(doc.start);
    p.end = to_configuration(doc.end);
    p.vertices = doc.vertices;
    return p;
}

void set_path(PathDocument& doc, const DiscretePath& path) {
    doc.start = to_record(path.start);
    doc.end = to_record(path.end);
    doc.vertices = path.vertices;
}

json to_json(const PathDocument& doc) {
    json params = json::object();
    if (doc.n_sides) params["n_sides"] = *doc.n_sides;
    if (doc.theta_degrees) params["theta_degrees"] = *doc.theta_degrees;
    params["ell"] = doc.ell;
    json j = {{"version", doc.version}, {"params", params}, {"start", pose_json(doc.start)},
              {"end", pose_json(doc.end)}};
    json vs = json::array();
    for (const Point2 p : doc.vertices) vs.push_back(point_json(p));
    j["vertices"] = std::move(vs);
    if (doc.structure) j["structure"] = *doc.structure;
    if (doc.trace) j["trace"] = *doc.trace;
    return j;
}

PathDocument from_json(const json& j) {
    if (!j.is_object()) throw DocumentError("document: expected an object");
    PathDocument doc;
    const json& version = member(j, "version", "document");
    if (!version.is_number_integer()) throw DocumentError("version: expected an integer");
    doc.version = version.get<int>();
    if (doc.version != 1) throw DocumentError("version: unsupported " + std::to_string(doc.version));

    const json& params = member(j, "params", "document");
    if (!params.is_object()) throw DocumentError("params: expected an object");
    const bool has_n = params.contains("n_sides");
    const bool has_theta = params.contains("theta_degrees");
    if (has_n == has_theta) throw DocumentError("params: need exactly one of n_sides, theta_degrees");
    if (has_n) {
        if (!params["n_sides"].is_number_integer()) throw DocumentError("params.n_sides: expected an integer");
        doc.n_sides = params["n_sides"].get<int>();
        if (*doc.n_sides < 4) throw DocumentError("params.n_sides: must be at least 4");
    } else {
        doc.theta_degrees = number_from(params["theta_degrees"], "params.theta_degrees");
    }
    doc.ell = number_from(member(params, "ell", "params"), "params.ell");
    if (!(doc.ell > 0.0)) throw DocumentError("params.ell: must be positive");

    doc.start = pose_from(member(j, "start", "document"), "start");
    doc.end = pose_from(member(j, "end", "document"), "end");
    if (const auto it = j.find("vertices"); it != j.end()) {
        if (!it->is_array()) throw DocumentError("vertices: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            doc.vertices.push_back(point_from((*it)[i], "vertices[" + std::to_string(i) + "]"));
    }
    if (const auto it = j.find("structure"); it != j.end()) doc.structure = *it;
    if (const auto it = j.find("trace"); it != j.end()) doc.trace = *it;
    return doc;
}

PathDocument parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
        throw DocumentError(position_of(text, e.byte) + ": " + what);
    }
    return from_json(j);
}

PathDocument load_document(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw DocumentError(file + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_document(ss.str());
    } catch (const DocumentError& e) {
        throw DocumentError(file + ": " + e.what());
    }
}

std::string dump_document(const PathDocument& doc) { return to_json(doc).dump(2) + "\n"; }

void save_document(const PathDocument& doc, const std::string& file) {
    std::ofstream out(file);
    if (!out) throw DocumentError(file + ": cannot write");
    out << dump_document(doc);
}

json structure_json(const DiscretePath& path, const Params& params) {
    const PathStructure s = analyze(path, params);
    json arcs = json::array();
    for (const Arc& a : s.arcs) {
        arcs.push_back({{"orientation", a.orientation == Orientation::Left ? "L" : "R"},
                        {"start", point_json(a.start_pt)},
                        {"end", point_json(a.end_pt)},
                        {"edges", a.edge_count}});
    }
    json bridges = json::array();
    for (const Bridge& b : s.bridges) {
        bridges.push_back({{"start", point_json(b.start_pt)}, {"end", point_json(b.end_pt)}, {"edge", b.host_edge}});
    }
    return {{"type", s.type_word}, {"arcs", arcs}, {"bridges", bridges}};
}

}  // namespace ddgeo::cli
