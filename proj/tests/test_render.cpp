#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "mmvrp/render.hpp"
#include "test_support.hpp"

using namespace mmvrp;

namespace {

std::size_t count_kind(const VectorImage& v, VectorMarker::Kind k) {
  return std::count_if(v.markers.begin(), v.markers.end(),
                       [&](const VectorMarker& m) { return m.kind == k; });
}

}  // namespace

TEST(Layout, SingleCustomer) {
  const Instance inst = make_instance("one-n2-k1", {0, 0}, {{{5, 5}, 1}}, 5, 1);
  const auto img = render_layout(inst);
  EXPECT_EQ(img.vector.markers.size(), 2u);
  EXPECT_EQ(img.vector.labels.size(), 2u);
  EXPECT_TRUE(img.vector.polylines.empty());
}

TEST(Layout, SmallestInstance) {
  const auto img = render_layout(support::named("P-n19-k2"));
  EXPECT_EQ(img.vector.markers.size(), 19u);
  EXPECT_EQ(count_kind(img.vector, VectorMarker::Kind::kDepot), 1u);
  ASSERT_EQ(img.vector.labels.size(), 19u);
  std::size_t numeric = 0, depot = 0;
  for (const auto& l : img.vector.labels) {
    if (l.text == "D") ++depot;
    else if (std::all_of(l.text.begin(), l.text.end(), ::isdigit)) ++numeric;
  }
  EXPECT_EQ(numeric, 18u);
  EXPECT_EQ(depot, 1u);
  EXPECT_EQ(count_label_overlaps(img.vector), 0u);
}

TEST(Layout, Deterministic) {
  const Instance inst = support::named("A-n45-k6");
  const auto a = render_layout(inst);
  const auto b = render_layout(inst);
  EXPECT_EQ(a.png.bytes, b.png.bytes);
  EXPECT_EQ(to_svg(a.vector), to_svg(b.vector));
  // PNG signature
  ASSERT_GT(a.png.bytes.size(), 8u);
  EXPECT_EQ(a.png.bytes[1], 'P');
  EXPECT_EQ(a.png.bytes[2], 'N');
  EXPECT_EQ(a.png.bytes[3], 'G');
}

TEST(Layout, MarkersInsideCanvas) {
  const RenderSpec spec;
  const auto img = render_layout(support::named("X-n162-k11"), spec);
  for (const auto& m : img.vector.markers) {
    EXPECT_GE(m.x, 0);
    EXPECT_LE(m.x, spec.width);
    EXPECT_GE(m.y, 0);
    EXPECT_LE(m.y, spec.height);
  }
}

TEST(Routes, EmptySolutionEqualsLayout) {
  const Instance inst = support::named("P-n19-k2");
  EXPECT_EQ(render_routes(inst, {}).png.bytes, render_layout(inst).png.bytes);
}

TEST(Routes, OnePolylinePerRoute) {
  const Instance inst = support::named("A-n45-k6");
  const auto img = render_routes(inst, support::named_solution("A-n45-k6"));
  EXPECT_EQ(img.vector.polylines.size(), 6u);
}

TEST(Routes, SingleRouteHasThreePoints) {
  const Instance inst = support::toy();
  const auto img = render_routes(inst, {{{4}}});
  ASSERT_EQ(img.vector.polylines.size(), 1u);
  const auto& pts = img.vector.polylines[0].points;
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts.front(), pts.back());
}

TEST(Routes, EmptyRoutesAreSkipped) {
  const auto img = render_routes(support::toy(), {{{1, 2}, {}, {3}}});
  EXPECT_EQ(img.vector.polylines.size(), 2u);
}

TEST(Pair, CompositeWidth) {
  const RenderSpec spec;
  const Instance inst = support::named("P-n60-k10");
  const auto img = render_pair(inst, support::named_solution("P-n60-k10"), spec);
  EXPECT_EQ(img.vector.width, 2 * spec.width + spec.gutter);
  EXPECT_EQ(img.vector.height, spec.height);
  ASSERT_EQ(img.vector.panel_labels.size(), 2u);
  EXPECT_EQ(img.vector.panel_labels[0].text, "A");
  EXPECT_EQ(img.vector.panel_labels[1].text, "B");
  EXPECT_EQ(img.vector.polylines.size(), 10u);
  EXPECT_EQ(img.vector.markers.size(), 2 * (inst.size() + 1));
}

TEST(Pair, EmptySolutionMirrorsLayout) {
  const RenderSpec spec;
  const Instance inst = support::named("P-n19-k2");
  const auto img = render_pair(inst, {}, spec);
  EXPECT_TRUE(img.vector.polylines.empty());
  const auto& m = img.vector.markers;
  const std::size_t half = m.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    EXPECT_DOUBLE_EQ(m[i + half].x - m[i].x, spec.width + spec.gutter);
    EXPECT_DOUBLE_EQ(m[i + half].y, m[i].y);
  }
}

TEST(Svg, WritesFiles) {
  const auto dir = support::scratch_dir("render");
  write_rendered(render_layout(support::toy()), dir, "toy");
  EXPECT_TRUE(std::filesystem::exists(dir / "toy.png"));
  std::ifstream in(dir / "toy.svg");
  std::string svg((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  std::filesystem::remove_all(dir);
}
