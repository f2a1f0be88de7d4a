#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "wbl/errors.hpp"
#include "wbl/geometry.hpp"

using namespace wbl;
using testutil::Rng;

namespace {

Domain unit_moon() { return Domain::moon({0.0, 1.0}, {0.45, 0.55}); }
Domain fig_moon() { return Domain::moon({0.0, 2.0}, {1.3, 0.7}); }

Domain stage_like() {
  ArcCell cell;
  cell.circles.push_back({Circle{0.0, 1.0}, true});
  cell.circles.push_back({Circle{0.25, 0.75}, false});
  cell.sector = SectorConstraint{std::numbers::pi / 4, 2 * std::numbers::pi - std::numbers::pi / 4, false};
  ArcRegion reg;
  reg.cells.push_back(cell);
  return Domain::arc_region(reg);
}

}  // namespace

TEST(Contains, DiscAndMoon) {
  EXPECT_TRUE(Domain::disc(0.0, 1.0).contains(0.5));
  EXPECT_FALSE(unit_moon().contains(0.2));
  EXPECT_TRUE(unit_moon().contains(-0.5));
  EXPECT_FALSE(Domain::disc(0.0, 1.0).contains(2.0));
  EXPECT_TRUE(Domain::truncated_plane(40.0).contains({30.0, 10.0}));
}

TEST(Contains, BoundaryPointsAreOutside) {
  const Domain d = Domain::disc(0.0, 1.0);
  EXPECT_FALSE(d.contains(1.0));
  EXPECT_FALSE(d.contains(1.0 - 1e-13));
  EXPECT_TRUE(d.contains(1.0 - 1e-9));
  // The tangency point belongs to neither piece.
  EXPECT_FALSE(unit_moon().contains(1.0));
}

TEST(BoundaryDistance, Examples) {
  EXPECT_NEAR(Domain::disc(0.0, 1.0).boundary_distance(0.0), 1.0, 1e-15);
  EXPECT_NEAR(fig_moon().boundary_distance(-1.0), 1.0, 1e-15);
  EXPECT_EQ(Domain::disc(0.0, 1.0).boundary_distance(2.0), 0.0);
  EXPECT_EQ(unit_moon().boundary_distance(0.45), 0.0);
}

TEST(Construction, RejectsBadInput) {
  EXPECT_THROW(Domain::disc(0.0, 0.0), InvalidArgument);
  EXPECT_THROW(Domain::truncated_plane(-1.0), InvalidArgument);
  EXPECT_THROW(Domain::moon({0.0, 1.0}, {0.4, 0.55}), TangencyNotFound);
  EXPECT_THROW(Domain::moon({0.0, 1.0}, {0.0, 0.5}), TangencyNotFound);
  EXPECT_THROW(Domain::arc_region({}), InvalidParameters);
}

TEST(MoonTangency, TangencyPoints) {
  const MoonTangency f = moon_tangency(fig_moon());
  EXPECT_NEAR(std::abs(f.q - cplx(2.0, 0.0)), 0.0, 1e-12);
  EXPECT_GT(f.c, 0.0);
  EXPECT_GE(f.samples, 1000u);
  const MoonTangency u = moon_tangency(unit_moon());
  EXPECT_NEAR(std::abs(u.q - cplx(1.0, 0.0)), 0.0, 1e-12);
  EXPECT_THROW(moon_tangency(Domain::disc(0.0, 1.0)), InvalidArgument);
}

TEST(MoonTangency, FigureProbeCircle) {
  // Radius 1.5 about 0.5 passes through Q = 2.
  const MoonTangency f = moon_tangency(fig_moon(), 1.5);
  EXPECT_NEAR(std::abs(f.probe.center - cplx(0.5, 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(f.probe.radius, 1.5, 1e-12);
  EXPECT_GT(f.c, 0.0);
  const Domain m = fig_moon();
  for (int k = 0; k < 5000; ++k) {
    const double t = (k + 0.37) * 2 * std::numbers::pi / 5000;
    const cplx z = f.probe.center + std::polar(f.probe.radius, t);
    if (std::abs(z - f.q) < 1e-9) continue;
    EXPECT_GE(m.boundary_distance(z), f.c * std::norm(z - f.q)) << "t=" << t;
  }
}

TEST(Properties, InscribedDiscStaysInside) {
  Rng rng(11);
  for (const Domain& d : {Domain::disc({0.3, -0.2}, 1.7), unit_moon(), fig_moon(), stage_like()}) {
    const Box& b = d.bounding_box();
    int checked = 0;
    for (int i = 0; i < 400 && checked < 100; ++i) {
      const cplx z = rng.in_box(b.xmin, b.xmax, b.ymin, b.ymax);
      if (!d.contains(z)) continue;
      ++checked;
      const double r = d.boundary_distance(z);
      ASSERT_GT(r, 0.0);
      for (int k = 0; k < 64; ++k) {
        const cplx w = z + std::polar(0.999 * r, 2 * std::numbers::pi * k / 64);
        EXPECT_TRUE(d.contains_raw(w)) << z << " r=" << r;
      }
    }
    EXPECT_GT(checked, 20);
  }
}

TEST(Properties, ContainsImpliesBoundingBox) {
  Rng rng(12);
  for (const Domain& d : {Domain::disc({1.0, 1.0}, 0.5), unit_moon(), fig_moon(), stage_like()}) {
    for (int i = 0; i < 2000; ++i) {
      const cplx z = rng.in_box(-3, 3, -3, 3);
      if (d.contains(z)) EXPECT_TRUE(d.bounding_box().contains(z));
    }
  }
}

TEST(ArcRegion, SectorAndCircles) {
  const Domain d = stage_like();
  EXPECT_TRUE(d.contains(-0.8));
  EXPECT_FALSE(d.contains(0.1));                           // inside the excluded disc
  EXPECT_FALSE(d.contains(std::polar(0.99, 0.1)));          // outside the sector
  EXPECT_TRUE(d.contains(std::polar(0.8, std::numbers::pi / 2 + 0.3)));
}

TEST(Curves, RayCircleCrossing) {
  std::vector<double> t;
  ray_crossings(Curve{Circle{0.0, 1.0}}, 0.0, 1.0, t);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_NEAR(t[0], 1.0, 1e-15);
  std::vector<cplx> pts;
  curve_intersections(Curve{Circle{0.0, 1.0}}, Curve{Circle{0.45, 0.55}}, pts);
  ASSERT_FALSE(pts.empty());
  EXPECT_NEAR(std::abs(pts[0] - cplx(1.0, 0.0)), 0.0, 1e-7);
}
