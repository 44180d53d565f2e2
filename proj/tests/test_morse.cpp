#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace spider;

namespace {

// Hooke energy without the radial-center hint: forces the scan path.
struct ScanHooke {
  Triangle tri;
  double value(Point x) const { return hooke_value(x, tri); }
  Vec2 gradient(Point x) const { return hooke_gradient(x, tri); }
  Mat2 hessian(Point) const { return hooke_hessian(); }
};

struct NegatedHooke {
  Triangle tri;
  double value(Point x) const { return -hooke_value(x, tri); }
  Vec2 gradient(Point x) const { return -1.0 * hooke_gradient(x, tri); }
  Mat2 hessian(Point) const { return hooke_hessian() * -1.0; }
};

std::vector<Point> expected_hole_saddles(const Triangle& t, Point z, double r_minus) {
  std::vector<Point> out;
  for (int i = 0; i < 3; ++i) {
    Point foot = t.vertex(i);
    auto pts = line_circle_intersections(z, foot, foot, r_minus);
    REQUIRE(pts.size() == 2);
    out.push_back(distance(pts[0], z) > distance(pts[1], z) ? pts[0] : pts[1]);
  }
  return out;
}

}  // namespace

TEST_CASE("interior critical points of the hooke energy", "[morse]") {
  Hooke pot{fixtures::t1()};
  for (const SpiderSpec& spec : {fixtures::s1(), fixtures::s2()}) {
    Workspace w = build_workspace(spec);
    auto pts = interior_critical_points(pot, w);
    REQUIRE(pts.size() == 1);
    CHECK(distance(pts[0].location, {0, 0}) <= 1e-10);
    CHECK(pts[0].index == 0);
    CHECK(norm(pot.gradient(pts[0].location)) <= 1e-10);
  }
}

TEST_CASE("weighted hooke moves the interior minimum", "[morse]") {
  WeightedHooke pot{fixtures::t1(), {2, 1, 1}};
  Workspace w = build_workspace(fixtures::s1());
  auto pts = interior_critical_points(pot, w);
  REQUIRE(pts.size() == 1);
  CHECK(distance(pts[0].location, {0.25, 0.0}) <= 1e-10);
  CHECK(pts[0].index == 0);
}

TEST_CASE("restriction criticals on S1", "[morse]") {
  Hooke pot{fixtures::t1()};
  Workspace w = build_workspace(fixtures::s1());
  auto bcs = boundary_restriction_criticals(pot, w);

  int on_holes = 0, on_outer = 0;
  for (const auto& bc : bcs)
    (w.arcs[bc.arc].full ? on_holes : on_outer)++;
  CHECK(on_holes == 6);
  CHECK(on_outer == 3);

  SECTION("hole circle about A carries the two line-circle points") {
    std::vector<Point> found;
    for (const auto& bc : bcs) {
      const ConstraintCircle& c = w.circles[w.arcs[bc.arc].circle];
      if (c.kind == CircleKind::inner && c.foot == 0) found.push_back(bc.at);
    }
    REQUIRE(found.size() == 2);
    std::sort(found.begin(), found.end(), [](Point a, Point b) { return a.x < b.x; });
    CHECK(distance(found[0], {0.8, 0.0}) <= 1e-9);
    CHECK(distance(found[1], {1.2, 0.0}) <= 1e-9);
  }
  SECTION("outer arc about A keeps only the near intersection") {
    std::vector<Point> found;
    for (const auto& bc : bcs) {
      const ConstraintCircle& c = w.circles[w.arcs[bc.arc].circle];
      if (c.kind == CircleKind::outer && c.foot == 0) found.push_back(bc.at);
    }
    REQUIRE(found.size() == 1);
    CHECK(distance(found[0], {-1.0, 0.0}) <= 1e-9);
  }
}

TEST_CASE("restriction criticals on S2", "[morse]") {
  Hooke pot{fixtures::t1()};
  Workspace w = build_workspace(fixtures::s2());
  auto bcs = boundary_restriction_criticals(pot, w);
  REQUIRE(bcs.size() == 3);  // one per outer arc; far intersections are off-arc
  bool found_axis = false;
  for (const auto& bc : bcs)
    if (distance(bc.at, {-0.3, 0.0}) <= 1e-9) found_axis = true;
  CHECK(found_axis);
}

TEST_CASE("scan agrees with the closed form", "[morse]") {
  Workspace w = build_workspace(fixtures::s1());
  auto closed = boundary_restriction_criticals(Hooke{fixtures::t1()}, w);
  auto scanned = boundary_restriction_criticals(ScanHooke{fixtures::t1()}, w);
  REQUIRE(closed.size() == scanned.size());
  for (const auto& c : closed) {
    double best = 1e9;
    for (const auto& s : scanned) best = std::min(best, distance(c.at, s.at));
    CHECK(best <= 1e-9);
  }
}

TEST_CASE("boundary classification follows the standard rules", "[morse]") {
  Hooke pot{fixtures::t1()};
  SECTION("S1: far hole points are saddles, near ones no-change") {
    Workspace w = build_workspace(fixtures::s1());
    for (const auto& bc : boundary_restriction_criticals(pot, w)) {
      CellChange c = classify_boundary_critical(pot, bc, w);
      if (distance(bc.at, {1.2, 0.0}) <= 1e-9) CHECK(c == CellChange::cell1);
      if (distance(bc.at, {0.8, 0.0}) <= 1e-9) CHECK(c == CellChange::none);
      if (distance(bc.at, {-1.0, 0.0}) <= 1e-9) CHECK(c == CellChange::none);
    }
  }
  SECTION("S2: no boundary singularities") {
    Workspace w = build_workspace(fixtures::s2());
    for (const auto& bc : boundary_restriction_criticals(pot, w))
      CHECK(classify_boundary_critical(pot, bc, w) == CellChange::none);
  }
}

TEST_CASE("corners are regular for the hooke energy", "[morse]") {
  Hooke pot{fixtures::t1()};
  for (const SpiderSpec& spec : {fixtures::s1(), fixtures::s2()}) {
    Workspace w = build_workspace(spec);
    for (const Corner& c : w.corners)
      CHECK(classify_corner(pot, c, w) == CellChange::none);
  }
}

TEST_CASE("negated energy turns S2 corners into minima", "[morse]") {
  NegatedHooke pot{fixtures::t1()};
  Workspace w = build_workspace(fixtures::s2());
  for (const Corner& c : w.corners)
    CHECK(classify_corner(pot, c, w) == CellChange::cell0);
  MorseCensus mc = census(pot, w);
  auto gc = oracle::grid_census(pot, w, 256);
  CHECK(mc.mu0 == gc.mu0);
  CHECK(mc.mu1 == gc.mu1);
  CHECK(mc.mu2 == gc.mu2);
}

TEST_CASE("fixture censuses", "[morse]") {
  Hooke pot{fixtures::t1()};
  MorseCensus c1 = census(pot, build_workspace(fixtures::s1()));
  CHECK(c1.mu0 == 1);
  CHECK(c1.mu1 == 3);
  CHECK(c1.mu2 == 0);
  CHECK(c1.euler == -2);
  MorseCensus c2 = census(pot, build_workspace(fixtures::s2()));
  CHECK(c2.mu0 == 1);
  CHECK(c2.mu1 == 0);
  CHECK(c2.mu2 == 0);
  CHECK(c2.euler == 1);
  MorseCensus cw = census(WeightedHooke{fixtures::t1(), {2, 1, 1}},
                          build_workspace(fixtures::s1()));
  CHECK(cw.mu0 == 1);
  CHECK(cw.mu1 == 3);
  CHECK(cw.mu2 == 0);
}

TEST_CASE("saddles sit at the far line-circle intersections", "[morse]") {
  Hooke pot{fixtures::t1()};
  Workspace w = build_workspace(fixtures::s1());
  MorseCensus mc = census(pot, w);
  auto expected = expected_hole_saddles(fixtures::t1(), {0, 0}, 0.2);
  int matched = 0;
  for (const CriticalPoint& cp : mc.points) {
    if (cp.cell != CellChange::cell1) continue;
    for (Point e : expected)
      if (distance(cp.location, e) <= 1e-8) ++matched;
  }
  CHECK(matched == 3);
}

TEST_CASE("perfect morse for random positive weights", "[morse]") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> uw(0.5, 2.0);
  for (const SpiderSpec& spec : {fixtures::s1(), fixtures::s2()}) {
    Workspace w = build_workspace(spec);
    auto [b0, b1] = w.betti();
    for (int k = 0; k < 10; ++k) {
      WeightedHooke pot{fixtures::t1(), {uw(rng), uw(rng), uw(rng)}};
      MorseCensus mc = census(pot, w);
      CHECK(mc.mu0 == b0);
      CHECK(mc.mu1 == b1);
      CHECK(mc.mu2 == 0);
    }
  }
}

TEST_CASE("census agrees with the grid oracle on random specs", "[morse]") {
  std::mt19937 rng(83);
  int answered = 0, declined = 0;
  while (answered < 20) {
    SpiderSpec spec = testutil::random_census_spec(rng);
    Workspace w = build_workspace(spec);
    MorseCensus mc = census(Hooke{spec.feet}, w);
    oracle::GridCensus gc;
    try {
      gc = oracle::grid_census(Hooke{spec.feet}, w, 256);
    } catch (const Error& e) {
      REQUIRE(std::string(e.name()) == "ResolutionTooCoarse");
      try {
        gc = oracle::grid_census(Hooke{spec.feet}, w, 512);
      } catch (const Error& e2) {
        REQUIRE(std::string(e2.name()) == "ResolutionTooCoarse");
        ++declined;  // the oracle says it cannot answer; draw another spec
        REQUIRE(declined < 20);
        continue;
      }
    }
    ++answered;
    CHECK(mc.mu0 == gc.mu0);
    CHECK(mc.mu1 == gc.mu1);
    CHECK(mc.mu2 == gc.mu2);
  }
}

TEST_CASE("degenerate critical points are flagged, not classified", "[morse]") {
  // Monkey-saddle field: gradient zero at the origin with a singular Hessian.
  struct Monkey {
    double value(Point p) const { return p.x * p.x * p.x - 3.0 * p.x * p.y * p.y; }
    Vec2 gradient(Point p) const {
      return {3.0 * p.x * p.x - 3.0 * p.y * p.y, -6.0 * p.x * p.y};
    }
    Mat2 hessian(Point p) const { return {6.0 * p.x, -6.0 * p.y, -6.0 * p.x}; }
  };
  std::array<Annulus, 3> an{Annulus{{3, 0}, 0.0, 4.0}, Annulus{{-3, 0}, 0.0, 4.0},
                            Annulus{{0, 3}, 0.0, 4.0}};
  Workspace w = build_workspace_from_annuli(Triangle{{3, 0}, {-3, 0}, {0, 3}}, an);
  // A degenerate zero shows up as a cluster of pseudo-zeros at the residual
  // tolerance; every one of them must carry the flag.
  auto pts = interior_critical_points(Monkey{}, w);
  REQUIRE(!pts.empty());
  for (const CriticalPoint& cp : pts) {
    CHECK(cp.degenerate);
    CHECK(cp.index == -1);
    CHECK(norm(cp.location) <= 1e-5);
  }
  CHECK_THROWS_AS(census(Monkey{}, w), Error);
  try {
    census(Monkey{}, w);
  } catch (const Error& e) {
    CHECK(e.name() == "NonMorsePoint");
  }
}

TEST_CASE("tangent gradients at restriction criticals are flagged", "[morse]") {
  // Put the weighted minimum exactly on the hole circle about A: the nearby
  // restriction critical has a vanishing normal derivative.
  Triangle t = fixtures::t1();
  auto wts = barycentric({0.8, 0.0}, t);
  WeightedHooke pot{t, {wts[0], wts[1], wts[2]}};
  Workspace w = build_workspace(fixtures::s1());
  auto bcs = boundary_restriction_criticals(pot, w);
  bool flagged = false;
  for (const auto& bc : bcs) {
    if (distance(bc.at, {0.8, 0.0}) > 1e-6) continue;
    try {
      classify_boundary_critical(pot, bc, w);
    } catch (const Error& e) {
      CHECK(e.name() == "TangentGradient");
      flagged = true;
    }
  }
  CHECK(flagged);
}

TEST_CASE("no-change points do not move the filtration", "[morse]") {
  Hooke pot{fixtures::t1()};
  Workspace w = build_workspace(fixtures::s1());
  auto gc = oracle::grid_census(pot, w, 256);
  for (const auto& bc : boundary_restriction_criticals(pot, w)) {
    if (classify_boundary_critical(pot, bc, w) != CellChange::none) continue;
    for (const auto& e : gc.events)
      CHECK(std::abs(e.level - bc.value) > 0.05);
  }
}
