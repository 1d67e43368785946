#pragma once

#include <string>

#include "ddgeo/path.hpp"
#include "ddgeo/smooth.hpp"

namespace ddgeo::cli {

/// SVG 1.1 drawing of a path: arcs coloured by orientation, bridges dashed,
/// an optional smooth curve overlaid. Infeasible paths are drawn plain.
[[nodiscard]] std::string render_svg(const DiscretePath& path, const Params& params,
                                     const SmoothPath* overlay = nullptr);

}  // namespace ddgeo::cli
