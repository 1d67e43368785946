#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddgeo/path.hpp"

namespace ddgeo {

enum class Orientation { Left, Right };

[[nodiscard]] const char* to_string(Orientation o);
[[nodiscard]] inline int sign_of(Orientation o) { return o == Orientation::Left ? 1 : -1; }

/// Maximal subpath of a discrete circle; endpoints may lie mid-edge.
struct Arc {
    Point2 start_pt{};
    Point2 end_pt{};
    /// Arclength positions of the endpoints along the path.
    double start_s = 0.0;
    double end_s = 0.0;
    /// Internal arc vertices (path indices); empty for single-segment arcs.
    std::optional<std::size_t> first_vertex;
    std::optional<std::size_t> last_vertex;
    Orientation orientation = Orientation::Left;
    /// Number of segments p_i p_{i+1}.
    std::size_t edge_count = 1;
};

/// Maximal straight piece of the path not covered by arcs.
struct Bridge {
    Point2 start_pt{};
    Point2 end_pt{};
    double start_s = 0.0;
    double end_s = 0.0;
    std::size_t host_edge = 0;
};

struct PathStructure {
    std::vector<Arc> arcs;
    std::vector<Bridge> bridges;
    std::string type_word;
};

inline constexpr std::array<std::string_view, 7> kTrueTypes{"B", "A", "AB", "BA", "AA", "ABA", "AAA"};
inline constexpr std::array<std::string_view, 5> kForbiddenFactors{"BB", "BAB", "AAB", "BAA", "AAAA"};

/// Requires a feasible path (PreconditionError otherwise).
[[nodiscard]] std::vector<Arc> extract_arcs(const DiscretePath& path, const Params& params);
[[nodiscard]] std::vector<Bridge> extract_bridges(const DiscretePath& path, const std::vector<Arc>& arcs,
                                                  const Params& params);
[[nodiscard]] PathStructure analyze(const DiscretePath& path, const Params& params);
[[nodiscard]] std::string type_string(const DiscretePath& path, const Params& params);

/// Inserts every bridge endpoint as a zero-turn vertex.
/// Throws PreconditionError when the input, or the result, is infeasible; the latter
/// happens only when a Long edge neighbours a Short or Long edge.
[[nodiscard]] DiscretePath canonicalize(const DiscretePath& path, const Params& params);

struct ForbiddenMatch {
    std::string_view factor;
    std::size_t position = 0;
};

/// Leftmost forbidden factor; among factors starting at the same position the
/// first in kForbiddenFactors order wins.
[[nodiscard]] std::optional<ForbiddenMatch> find_forbidden_subtype(std::string_view word);
[[nodiscard]] bool is_true_type(std::string_view word);

}  // namespace ddgeo
