#include "mmvrp/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "mmvrp/error.hpp"

namespace mmvrp {

namespace {

constexpr int kFont = cv::FONT_HERSHEY_SIMPLEX;
// Hershey simplex cap height is ~22 px at scale 1.
constexpr double kFontPxPerScale = 22.0;

cv::Scalar bgr(Rgb c) { return cv::Scalar(c.b, c.g, c.r); }

struct Transform {
  double cx = 0, cy = 0, scale = 1, half_w = 0, half_h = 0;

  std::array<double, 2> apply(Point p) const {
    return {half_w + (p.x - cx) * scale, half_h - (p.y - cy) * scale};
  }
};

Transform fit(const Instance& instance, const RenderSpec& spec) {
  double min_x = instance.depot.x, max_x = instance.depot.x;
  double min_y = instance.depot.y, max_y = instance.depot.y;
  for (const auto& c : instance.customers) {
    min_x = std::min(min_x, c.pos.x);
    max_x = std::max(max_x, c.pos.x);
    min_y = std::min(min_y, c.pos.y);
    max_y = std::max(max_y, c.pos.y);
  }
  double extent = std::max(max_x - min_x, max_y - min_y);
  if (!(extent > 0)) extent = 1.0;  // all points coincide
  const double inner = std::min(spec.width, spec.height) * (1.0 - 2.0 * spec.margin);
  Transform t;
  t.cx = (min_x + max_x) / 2;
  t.cy = (min_y + max_y) / 2;
  t.scale = inner / extent;
  t.half_w = spec.width / 2.0;
  t.half_h = spec.height / 2.0;
  return t;
}

int label_font_px(std::size_t nodes, const RenderSpec& spec) {
  if (nodes <= 50) return spec.label_font_px;
  const double scaled = spec.label_font_px * std::sqrt(50.0 / static_cast<double>(nodes));
  return std::clamp(static_cast<int>(std::lround(scaled)), spec.min_label_font_px,
                    spec.label_font_px);
}

struct TextMetrics {
  double scale;
  int thickness;
  double w, h, baseline;
};

TextMetrics measure(const std::string& text, int font_px) {
  TextMetrics m{};
  m.scale = font_px / kFontPxPerScale;
  m.thickness = font_px >= 28 ? 2 : 1;
  int baseline = 0;
  const cv::Size size = cv::getTextSize(text, kFont, m.scale, m.thickness, &baseline);
  m.w = size.width;
  m.h = size.height + baseline;
  m.baseline = baseline;
  return m;
}

void draw_text(cv::Mat& mat, const VectorLabel& label, double x_offset = 0) {
  const TextMetrics m = measure(label.text, label.font_px);
  const cv::Point origin(static_cast<int>(std::lround(label.box.x0 + x_offset)),
                         static_cast<int>(std::lround(label.box.y1 - m.baseline)));
  cv::putText(mat, label.text, origin, kFont, m.scale, cv::Scalar(0, 0, 0), m.thickness,
              cv::LINE_AA);
}

// Places each label next to its marker, trying a ring of candidate
// positions and taking the first one clear of earlier labels and of markers.
std::vector<VectorLabel> place_labels(const std::vector<VectorMarker>& markers,
                                      const std::vector<PixelBox>& marker_boxes, int font_px,
                                      const RenderSpec& spec) {
  std::vector<VectorLabel> placed;
  placed.reserve(markers.size());
  const double r0 = spec.customer_marker_radius + 2;
  for (std::size_t i = 0; i < markers.size(); ++i) {
    const auto& mk = markers[i];
    const std::string text = mk.kind == VectorMarker::Kind::kDepot ? "D" : std::to_string(mk.id);
    const TextMetrics m = measure(text, font_px);

    std::optional<PixelBox> first_in_canvas;
    std::optional<PixelBox> chosen;
    for (int ring = 0; ring < 4 && !chosen; ++ring) {
      const double r = r0 + ring * m.h * 0.75;
      const std::array<std::array<double, 2>, 8> offsets = {{
          {r, -r - m.h},
          {r, r},
          {-r - m.w, -r - m.h},
          {-r - m.w, r},
          {-m.w / 2, -r - m.h},
          {-m.w / 2, r},
          {r, -m.h / 2},
          {-r - m.w, -m.h / 2},
      }};
      for (const auto& [dx, dy] : offsets) {
        PixelBox box{mk.x + dx, mk.y + dy, mk.x + dx + m.w, mk.y + dy + m.h};
        if (box.x0 < 0 || box.y0 < 0 || box.x1 > spec.width || box.y1 > spec.height) continue;
        if (!first_in_canvas) first_in_canvas = box;
        const bool hits_label = std::any_of(placed.begin(), placed.end(), [&](const auto& l) {
          return l.box.intersects(box);
        });
        if (hits_label) continue;
        const bool hits_marker = std::any_of(marker_boxes.begin(), marker_boxes.end(),
                                             [&](const auto& mb) { return mb.intersects(box); });
        if (hits_marker) continue;
        chosen = box;
        break;
      }
    }
    PixelBox box = chosen.value_or(first_in_canvas.value_or(
        PixelBox{mk.x + r0, mk.y - r0 - m.h, mk.x + r0 + m.w, mk.y - r0}));
    placed.push_back({text, font_px, box});
  }
  return placed;
}

struct Panel {
  cv::Mat mat;
  VectorImage vector;
};

Panel draw_panel(const Instance& instance, const Solution* solution, const RenderSpec& spec) {
  const Transform t = fit(instance, spec);
  Panel panel;
  auto& vec = panel.vector;
  vec.width = spec.width;
  vec.height = spec.height;

  const auto depot_px = t.apply(instance.depot);
  vec.markers.push_back({VectorMarker::Kind::kDepot, 0, depot_px[0], depot_px[1]});
  for (const auto& c : instance.customers) {
    const auto p = t.apply(c.pos);
    vec.markers.push_back({VectorMarker::Kind::kCustomer, c.id, p[0], p[1]});
  }

  if (solution) {
    for (std::size_t r = 0; r < solution->routes.size(); ++r) {
      const Route& route = solution->routes[r];
      if (route.empty()) continue;
      VectorPolyline line;
      line.route_index = r;
      line.color = spec.route_colors[r % spec.route_colors.size()];
      line.points.push_back(depot_px);
      for (CustomerId id : route) line.points.push_back(t.apply(instance.customer(id).pos));
      line.points.push_back(depot_px);
      vec.polylines.push_back(std::move(line));
    }
  }

  std::vector<PixelBox> marker_boxes;
  for (const auto& mk : vec.markers) {
    const double half = mk.kind == VectorMarker::Kind::kDepot ? spec.depot_marker_size / 2.0
                                                              : spec.customer_marker_radius;
    marker_boxes.push_back({mk.x - half, mk.y - half, mk.x + half, mk.y + half});
  }
  vec.labels = place_labels(vec.markers, marker_boxes, label_font_px(vec.markers.size(), spec), spec);

  cv::Mat& mat = panel.mat;
  mat = cv::Mat(spec.height, spec.width, CV_8UC3, cv::Scalar(255, 255, 255));
  auto px = [](double v) { return static_cast<int>(std::lround(v)); };
  for (const auto& line : vec.polylines) {
    std::vector<cv::Point> pts;
    for (const auto& p : line.points) pts.emplace_back(px(p[0]), px(p[1]));
    cv::polylines(mat, pts, false, bgr(line.color), 2, cv::LINE_AA);
  }
  for (const auto& mk : vec.markers) {
    if (mk.kind == VectorMarker::Kind::kDepot) {
      const int h = spec.depot_marker_size / 2;
      cv::rectangle(mat, cv::Point(px(mk.x) - h, px(mk.y) - h), cv::Point(px(mk.x) + h, px(mk.y) + h),
                    cv::Scalar(30, 30, 200), cv::FILLED);
    } else {
      cv::circle(mat, cv::Point(px(mk.x), px(mk.y)), spec.customer_marker_radius,
                 cv::Scalar(60, 60, 60), cv::FILLED, cv::LINE_AA);
    }
  }
  for (const auto& label : vec.labels) draw_text(mat, label);
  return panel;
}

void add_panel_label(Panel& panel, const std::string& text, const RenderSpec& spec) {
  const TextMetrics m = measure(text, spec.panel_label_font_px);
  const double pad = 6;
  VectorLabel label{text, spec.panel_label_font_px, {pad, pad, pad + m.w, pad + m.h}};
  draw_text(panel.mat, label);
  panel.vector.panel_labels.push_back(label);
}

EncodedImage encode_png(const cv::Mat& mat) {
  EncodedImage img;
  img.media_type = "image/png";
  std::vector<uchar> buf;
  if (!cv::imencode(".png", mat, buf, {cv::IMWRITE_PNG_COMPRESSION, 6})) {
    throw Error("PNG encoding failed");
  }
  img.bytes.assign(buf.begin(), buf.end());
  return img;
}

void shift(VectorLabel& l, double dx) {
  l.box.x0 += dx;
  l.box.x1 += dx;
}

}  // namespace

RenderedImage render_layout(const Instance& instance, const RenderSpec& spec) {
  Panel panel = draw_panel(instance, nullptr, spec);
  return {std::move(panel.vector), encode_png(panel.mat)};
}

RenderedImage render_routes(const Instance& instance, const Solution& solution,
                            const RenderSpec& spec) {
  Panel panel = draw_panel(instance, &solution, spec);
  return {std::move(panel.vector), encode_png(panel.mat)};
}

RenderedImage render_pair(const Instance& instance, const Solution& solution,
                          const RenderSpec& spec) {
  Panel left = draw_panel(instance, nullptr, spec);
  Panel right = draw_panel(instance, &solution, spec);
  add_panel_label(left, "A", spec);
  add_panel_label(right, "B", spec);

  const int width = 2 * spec.width + spec.gutter;
  cv::Mat mat(spec.height, width, CV_8UC3, cv::Scalar(255, 255, 255));
  left.mat.copyTo(mat(cv::Rect(0, 0, spec.width, spec.height)));
  right.mat.copyTo(mat(cv::Rect(spec.width + spec.gutter, 0, spec.width, spec.height)));

  VectorImage vec = std::move(left.vector);
  vec.width = width;
  const double dx = spec.width + spec.gutter;
  for (auto mk : right.vector.markers) {
    mk.x += dx;
    vec.markers.push_back(mk);
  }
  for (auto l : right.vector.labels) {
    shift(l, dx);
    vec.labels.push_back(std::move(l));
  }
  for (auto l : right.vector.panel_labels) {
    shift(l, dx);
    vec.panel_labels.push_back(std::move(l));
  }
  for (auto line : right.vector.polylines) {
    for (auto& p : line.points) p[0] += dx;
    vec.polylines.push_back(std::move(line));
  }
  return {std::move(vec), encode_png(mat)};
}

std::string to_svg(const VectorImage& image) {
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      image.width, image.height, image.width, image.height);
  for (const auto& line : image.polylines) {
    out += fmt::format("<polyline class=\"route\" data-route=\"{}\" fill=\"none\" "
                       "stroke=\"rgb({},{},{})\" stroke-width=\"2\" points=\"",
                       line.route_index + 1, line.color.r, line.color.g, line.color.b);
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      out += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", line.points[i][0], line.points[i][1]);
    }
    out += "\"/>\n";
  }
  for (const auto& mk : image.markers) {
    if (mk.kind == VectorMarker::Kind::kDepot) {
      out += fmt::format("<rect class=\"marker depot\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"14\" "
                         "height=\"14\" fill=\"rgb(200,30,30)\"/>\n",
                         mk.x - 7, mk.y - 7);
    } else {
      out += fmt::format("<circle class=\"marker customer\" data-id=\"{}\" cx=\"{:.2f}\" "
                         "cy=\"{:.2f}\" r=\"5\" fill=\"rgb(60,60,60)\"/>\n",
                         mk.id, mk.x, mk.y);
    }
  }
  auto text = [&](const VectorLabel& l, const char* cls) {
    out += fmt::format("<text class=\"{}\" x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"{}\" "
                       "font-family=\"sans-serif\">{}</text>\n",
                       cls, l.box.x0, l.box.y1, l.font_px, l.text);
  };
  for (const auto& l : image.labels) text(l, "label");
  for (const auto& l : image.panel_labels) text(l, "panel-label");
  out += "</svg>\n";
  return out;
}

std::size_t count_label_overlaps(const VectorImage& image) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < image.labels.size(); ++i) {
    for (std::size_t j = i + 1; j < image.labels.size(); ++j) {
      if (image.labels[i].box.intersects(image.labels[j].box)) ++n;
    }
  }
  return n;
}

void write_rendered(const RenderedImage& image, const std::filesystem::path& dir,
                    const std::string& stem) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream png(dir / (stem + ".png"), std::ios::binary);
    png.write(reinterpret_cast<const char*>(image.png.bytes.data()),
              static_cast<std::streamsize>(image.png.bytes.size()));
    if (!png) throw Error(fmt::format("cannot write {}", (dir / (stem + ".png")).string()));
  }
  std::ofstream svg(dir / (stem + ".svg"), std::ios::binary);
  svg << to_svg(image.vector);
  if (!svg) throw Error(fmt::format("cannot write {}", (dir / (stem + ".svg")).string()));
}

}  // namespace mmvrp
