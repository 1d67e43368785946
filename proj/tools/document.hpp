#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddgeo/path.hpp"

namespace ddgeo::cli {

struct DocumentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Boundary configuration as stored on disk: degrees, not radians.
struct PoseRecord {
    double x = 0.0;
    double y = 0.0;
    double heading_degrees = 0.0;

    friend bool operator==(const PoseRecord&, const PoseRecord&) = default;
};

/// Exchange format for paths and planning queries. Exactly one of n_sides and
/// theta_degrees is set.
struct PathDocument {
    int version = 1;
    std::optional<int> n_sides;
    std::optional<double> theta_degrees;
    double ell = 1.0;
    PoseRecord start;
    PoseRecord end;
    std::vector<Point2> vertices;
    std::optional<nlohmann::json> structure;
    std::optional<nlohmann::json> trace;

    friend bool operator==(const PathDocument&, const PathDocument&) = default;
};

[[nodiscard]] double normalize_degrees(double degrees);

[[nodiscard]] PoseRecord to_record(const Configuration& c);
[[nodiscard]] Configuration to_configuration(const PoseRecord& r);

[[nodiscard]] Params params_of(const PathDocument& doc);
void set_params(PathDocument& doc, const Params& params);

[[nodiscard]] DiscretePath path_of(const PathDocument& doc);
void set_path(PathDocument& doc, const DiscretePath& path);

[[nodiscard]] nlohmann::json to_json(const PathDocument& doc);
/// Schema check; throws DocumentError naming the offending field.
[[nodiscard]] PathDocument from_json(const nlohmann::json& j);

/// Parses text; syntax errors are reported as "line L, column C: ...".
[[nodiscard]] PathDocument parse_document(const std::string& text);
[[nodiscard]] PathDocument load_document(const std::string& file);
[[nodiscard]] std::string dump_document(const PathDocument& doc);
void save_document(const PathDocument& doc, const std::string& file);

[[nodiscard]] nlohmann::json structure_json(const DiscretePath& path, const Params& params);

}  // namespace ddgeo::cli
