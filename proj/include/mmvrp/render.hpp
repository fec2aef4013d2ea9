#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mmvrp/image.hpp"
#include "mmvrp/instance.hpp"

namespace mmvrp {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct RenderSpec {
  int width = 1024;   // per panel
  int height = 1024;
  double margin = 0.06;  // fraction of the shorter side kept free on each edge
  int depot_marker_size = 14;
  int customer_marker_radius = 5;
  int label_font_px = 18;      // used up to ~50 nodes, then scaled down
  int min_label_font_px = 8;
  int panel_label_font_px = 48;
  int gutter = 32;             // between the A and B panels of a pair
  std::vector<Rgb> route_colors = {
      {31, 119, 180}, {255, 127, 14}, {44, 160, 44},  {214, 39, 40},  {148, 103, 189},
      {140, 86, 75},  {227, 119, 194}, {127, 127, 127}, {188, 189, 34}, {23, 190, 207}};
};

struct PixelBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool intersects(const PixelBox& o) const {
    return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
  }
};

struct VectorMarker {
  enum class Kind { kDepot, kCustomer };
  Kind kind = Kind::kCustomer;
  CustomerId id = 0;  // 0 for the depot
  double x = 0, y = 0;
};

struct VectorLabel {
  std::string text;
  int font_px = 0;
  PixelBox box;
};

struct VectorPolyline {
  std::size_t route_index = 0;
  Rgb color;
  std::vector<std::array<double, 2>> points;
};

// Structured twin of the raster; every drawn element appears here.
struct VectorImage {
  int width = 0;
  int height = 0;
  std::vector<VectorMarker> markers;
  std::vector<VectorLabel> labels;        // vertex labels
  std::vector<VectorLabel> panel_labels;  // "A" / "B"
  std::vector<VectorPolyline> polylines;
};

struct RenderedImage {
  VectorImage vector;
  EncodedImage png;
};

// Sub-figure A: depot (square) and customers (dots) with ID labels.
RenderedImage render_layout(const Instance& instance, const RenderSpec& spec = {});
// Layout plus one polyline depot -> ... -> depot per non-empty route.
// Throws UnknownCustomerId.
RenderedImage render_routes(const Instance& instance, const Solution& solution,
                            const RenderSpec& spec = {});
// "A" (layout) and "B" (routes) side by side; width = 2 * spec.width + gutter.
RenderedImage render_pair(const Instance& instance, const Solution& solution,
                          const RenderSpec& spec = {});

std::string to_svg(const VectorImage& image);

// Number of intersecting vertex-label pairs; 0 when placement succeeded.
std::size_t count_label_overlaps(const VectorImage& image);

// Writes <stem>.png and <stem>.svg into `dir`.
void write_rendered(const RenderedImage& image, const std::filesystem::path& dir,
                    const std::string& stem);

}  // namespace mmvrp
