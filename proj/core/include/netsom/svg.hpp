#pragma once

#include <string>
#include <vector>

#include "netsom/layout.hpp"
#include "netsom/som.hpp"

namespace netsom {

/// Hex-tiled SVG of a numeric grid (odd-r offset layout): linear two-color
/// ramp with a min/max legend. Deterministic bytes for identical input.
std::string render_hexmap_numeric(int rows, int cols, const std::vector<double>& values,
                                  const std::string& title = "");

/// Hex-tiled SVG of a categorical grid: fixed palette keyed in a legend;
/// empty-string cells are drawn unfilled.
std::string render_hexmap_categories(int rows, int cols, const std::vector<std::string>& values,
                                     const std::string& title = "");

/// Embedded graph drawing: nodes at layout coordinates, radius scaled by
/// log(1 + hits), straight edges.
std::string render_layout_svg(const DirectedGraph& g, const Layout& layout,
                              const Partition& partition);

}  // namespace netsom
