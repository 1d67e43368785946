#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ddgeo/path.hpp"

namespace ddgeo {

/// Local moves, in priority order.
enum class RuleKind {
    LongLongShortcut,
    LongShortSlide,
    InflectionRotate,
    InflectionSlide,
    LongBreakSlide,
    TwoInflectionSlide,
    BridgeTranslate,
    AabElim,
    AaaaToAaa,
    SubpathReplan,
};

inline constexpr std::size_t kRuleCount = 10;

[[nodiscard]] const char* to_string(RuleKind k);
[[nodiscard]] std::optional<RuleKind> rule_from_string(std::string_view s);

struct RewriteRule {
    RuleKind kind = RuleKind::LongLongShortcut;
    /// Move magnitude: a distance, or an angle times ell for rotations.
    double step = 0.0;
};

/// Where a rule acts, in the indices of the working form of the path
/// (canonical form when it exists, see `working_form`).
///   LongLongShortcut, LongShortSlide: first = vertex.
///   InflectionRotate: first = inflection edge, second = neighbouring edge.
///   InflectionSlide, LongBreakSlide, TwoInflectionSlide, BridgeTranslate: edges first < second.
///   AabElim: first = index of the rotated arc, second = pivot vertex.
///   AaaaToAaa: first = index of the first of three arcs, second = 0 (pivot at its start) or 1 (at the end).
///   SubpathReplan: vertices first < second bounding the replaced subpath.
struct Location {
    std::size_t first = 0;
    std::size_t second = 0;

    friend bool operator==(const Location&, const Location&) = default;
};

struct Application {
    RewriteRule rule;
    Location location;
};

struct RewriteOptions {
    /// Initial step, smallest step and least accepted improvement, in units of ell.
    double initial_step = 1e-2;
    double min_step = 1e-10;
    double improve_eps = 1e-10;
    /// Largest step tried when a move keeps succeeding, in units of ell.
    double max_step = 4.0;
    std::size_t budget = 10000;
    /// Enables SubpathReplan, which calls the planner on subpaths.
    bool allow_replan = true;
};

struct RewriteStep {
    RuleKind rule = RuleKind::LongLongShortcut;
    Location location;
    double step = 0.0;
    double length_before = 0.0;
    double length_after = 0.0;
    std::string type_before;
    std::string type_after;
};

struct RewriteTrace {
    std::vector<RewriteStep> steps;
    bool fixed_point = false;
    bool budget_exhausted = false;
};

struct RewriteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Canonical form of a feasible path, or the path itself when inserting the
/// bridge endpoints would break feasibility.
[[nodiscard]] DiscretePath working_form(const DiscretePath& path, const Params& params);

/// First rule, under the fixed priority, that shortens the path by at least
/// improve_eps or keeps its length and shortens its type. Requires a feasible path.
[[nodiscard]] std::optional<Application> find_applicable(const DiscretePath& path, const Params& params,
                                                         const RewriteOptions& options = {});

/// Performs the move, starting at the rule's step; throws RewriteError when it
/// does not apply at any step down to min_step.
[[nodiscard]] DiscretePath apply(const DiscretePath& path, const Application& application, const Params& params,
                                 const RewriteOptions& options = {});

struct ShortenResult {
    DiscretePath path;
    RewriteTrace trace;
};

/// Applies rules until none applies or the budget runs out.
[[nodiscard]] ShortenResult shorten(const DiscretePath& path, const Params& params,
                                    const RewriteOptions& options = {});

/// Equal-length rotation of a path made of three arcs of one orientation into
/// one that is flush at u or has at most two arcs; returns the path itself when
/// it is already flush, nullopt when no rotation reaches either event.
[[nodiscard]] std::optional<DiscretePath> three_arc_transform(const DiscretePath& path, const Params& params,
                                                              const RewriteOptions& options = {});

/// Whether (before -> after) is lexicographic (length, type length) progress.
[[nodiscard]] bool is_progress(const RewriteStep& step, const Params& params, const RewriteOptions& options = {});

}  // namespace ddgeo
