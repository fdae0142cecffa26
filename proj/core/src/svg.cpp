#include "netsom/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>

namespace netsom {

namespace {

constexpr double kHexSize = 16.0;  // center-to-vertex

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// Pointy-top hexagon centers, odd rows shifted half a cell right.
void hex_center(int row, int col, double& cx, double& cy) {
  const double w = kHexSize * std::numbers::sqrt3;
  cx = w * (col + 0.5 * (row & 1)) + w / 2.0 + 4.0;
  cy = kHexSize * 1.5 * row + kHexSize + 4.0;
}

std::string hex_points(double cx, double cy) {
  std::string pts;
  for (int i = 0; i < 6; ++i) {
    const double angle = std::numbers::pi / 180.0 * (60.0 * i - 30.0);
    if (i > 0) pts += ' ';
    pts += num(cx + kHexSize * std::cos(angle)) + ',' + num(cy + kHexSize * std::sin(angle));
  }
  return pts;
}

std::string ramp_color(double t) {
  // linear ramp white -> steel blue
  const int r = static_cast<int>(std::lround(255.0 + t * (49.0 - 255.0)));
  const int g = static_cast<int>(std::lround(255.0 + t * (110.0 - 255.0)));
  const int b = static_cast<int>(std::lround(255.0 + t * (171.0 - 255.0)));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

const char* kPalette[12] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860",
                            "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd", "#2f4b7c", "#ffa600"};

std::string svg_open(int rows, int cols, int legend_height) {
  const double w = kHexSize * std::numbers::sqrt3 * (cols + 0.5) + 8.0;
  const double h = kHexSize * 1.5 * (rows - 1) + 2.0 * kHexSize + 8.0 + legend_height;
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
}

}  // namespace

std::string render_hexmap_numeric(int rows, int cols, const std::vector<double>& values,
                                  const std::string& title) {
  if (rows < 1 || cols < 1 || values.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::invalid_argument("render_hexmap: empty or mismatched grid");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  const double span = hi > lo ? hi - lo : 1.0;

  std::string svg = svg_open(rows, cols, 28);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double cx, cy;
      hex_center(r, c, cx, cy);
      const double t = (values[static_cast<std::size_t>(r * cols + c)] - lo) / span;
      svg += "<polygon points=\"" + hex_points(cx, cy) + "\" fill=\"" + ramp_color(t) +
             "\" stroke=\"#444\" stroke-width=\"0.5\"/>\n";
    }
  }
  const double ly = kHexSize * 1.5 * (rows - 1) + 2.0 * kHexSize + 18.0;
  svg += "<text x=\"6\" y=\"" + num(ly) + "\">" + (title.empty() ? "" : title + "  ") +
         "min=" + num(lo) + " max=" + num(hi) + "</text>\n</svg>\n";
  return svg;
}

std::string render_hexmap_categories(int rows, int cols, const std::vector<std::string>& values,
                                     const std::string& title) {
  if (rows < 1 || cols < 1 || values.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::invalid_argument("render_hexmap: empty or mismatched grid");
  }
  std::map<std::string, std::string> color;  // category -> fill, keyed in sorted order
  for (const auto& v : values) {
    if (!v.empty()) color.emplace(v, "");
  }
  std::size_t i = 0;
  for (auto& [cat, fill] : color) fill = kPalette[i++ % 12];

  std::string svg = svg_open(rows, cols, 28 + static_cast<int>(color.size()) * 14);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double cx, cy;
      hex_center(r, c, cx, cy);
      const auto& v = values[static_cast<std::size_t>(r * cols + c)];
      const std::string fill = v.empty() ? "none" : color[v];
      svg += "<polygon points=\"" + hex_points(cx, cy) + "\" fill=\"" + fill +
             "\" stroke=\"#444\" stroke-width=\"0.5\"/>\n";
    }
  }
  double ly = kHexSize * 1.5 * (rows - 1) + 2.0 * kHexSize + 18.0;
  if (!title.empty()) {
    svg += "<text x=\"6\" y=\"" + num(ly) + "\">" + title + "</text>\n";
  }
  ly += 4.0;
  for (const auto& [cat, fill] : color) {
    ly += 14.0;
    svg += "<rect x=\"6\" y=\"" + num(ly - 10.0) + "\" width=\"10\" height=\"10\" fill=\"" + fill +
           "\"/><text x=\"20\" y=\"" + num(ly) + "\">" + cat + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_layout_svg(const DirectedGraph& g, const Layout& layout,
                              const Partition& partition) {
  const std::size_t n = g.node_count();
  if (layout.coords.size() != n || partition.labels.size() != n) {
    throw std::invalid_argument("render_layout_svg: size mismatch");
  }
  double lo_x = layout.coords[0].x, hi_x = lo_x, lo_y = layout.coords[0].y, hi_y = lo_y;
  for (const auto& p : layout.coords) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const double scale = 760.0 / std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  auto px = [&](const Vec2& p) { return 20.0 + (p.x - lo_x) * scale; };
  auto py = [&](const Vec2& p) { return 20.0 + (p.y - lo_y) * scale; };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\">\n"
      "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  g.for_each_edge([&](int u, int v) {
    svg += "<line x1=\"" + num(px(layout.coords[static_cast<std::size_t>(u)])) + "\" y1=\"" +
           num(py(layout.coords[static_cast<std::size_t>(u)])) + "\" x2=\"" +
           num(px(layout.coords[static_cast<std::size_t>(v)])) + "\" y2=\"" +
           num(py(layout.coords[static_cast<std::size_t>(v)])) +
           "\" stroke=\"#bbb\" stroke-width=\"0.4\"/>\n";
  });
  for (std::size_t i = 0; i < n; ++i) {
    const double radius = 1.5 + std::log1p(static_cast<double>(g.node(static_cast<int>(i)).hits)) * 0.4;
    svg += "<circle cx=\"" + num(px(layout.coords[i])) + "\" cy=\"" + num(py(layout.coords[i])) +
           "\" r=\"" + num(radius) + "\" fill=\"" +
           kPalette[static_cast<std::size_t>(partition.labels[i]) % 12] + "\" fill-opacity=\"0.8\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace netsom
