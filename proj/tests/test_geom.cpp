#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace spider;
using testutil::random_interior_point;
using testutil::random_point;
using testutil::random_triangle;

TEST_CASE("signed area", "[geom]") {
  CHECK(signed_area({0, 0}, {1, 0}, {0, 1}) == Approx(0.5));
  Triangle t = fixtures::t1();
  CHECK(t.signed_area() == Approx(3.0 * std::sqrt(3.0) / 4.0).epsilon(1e-14));
  CHECK(signed_area({0, 0}, {1, 1}, {2, 2}) == 0.0);
}

TEST_CASE("subtriangle data at symmetric points", "[geom]") {
  Triangle t = fixtures::t1();
  SECTION("centroid") {
    auto sd = subtriangle_data({0, 0}, t);
    for (int i = 0; i < 3; ++i) {
      CHECK(sd.dist[i] == Approx(1.0).margin(1e-14));
      CHECK(sd.area[i] == Approx(t.area() / 3.0).margin(1e-12));
      CHECK(sd.angle[i] == Approx(2.0 * std::numbers::pi / 3.0).margin(1e-12));
    }
  }
  SECTION("midpoint of BC kills the opposite area") {
    auto sd = subtriangle_data({-0.5, 0.0}, t);
    CHECK(sd.area[0] == Approx(0.0).margin(1e-14));
  }
  SECTION("mirror point on the A axis") {
    auto sd = subtriangle_data({0.25, 0.0}, t);
    CHECK(sd.dist[0] == Approx(0.75).margin(1e-14));
    CHECK(sd.area[1] == Approx(sd.area[2]).margin(1e-14));
  }
  SECTION("foot coincidence is rejected") {
    CHECK_THROWS_AS(subtriangle_data(t.a, t), Error);
  }
}

TEST_CASE("barycentric coordinates", "[geom]") {
  Triangle t = fixtures::t1();
  auto c = barycentric({0, 0}, t);
  for (double w : c) CHECK(w == Approx(1.0 / 3.0).margin(1e-14));
  auto va = barycentric(t.a, t);
  CHECK(va[0] == Approx(1.0).margin(1e-14));
  CHECK(va[1] == Approx(0.0).margin(1e-14));
  CHECK(va[2] == Approx(0.0).margin(1e-14));
  auto m = barycentric({0.25, 0.0}, t);
  CHECK(m[0] == Approx(0.5).margin(1e-14));
  CHECK(m[1] == Approx(0.25).margin(1e-14));
  CHECK(m[2] == Approx(0.25).margin(1e-14));
}

TEST_CASE("barycentric weights reconstruct random points", "[geom]") {
  std::mt19937 rng(2024);
  for (int k = 0; k < 10000; ++k) {
    Triangle t = random_triangle(rng);
    Point p = random_interior_point(rng, t, 0.0);
    auto w = barycentric(p, t);
    CHECK(w[0] + w[1] + w[2] == Approx(1.0).margin(1e-12));
    Point back = w[0] * t.a + w[1] * t.b + w[2] * t.c;
    CHECK(distance(back, p) <= 1e-12 * (1.0 + norm(p)));
  }
}

TEST_CASE("subtriangle angle and area sums for interior points", "[geom]") {
  std::mt19937 rng(99);
  for (int k = 0; k < 2000; ++k) {
    Triangle t = random_triangle(rng);
    Point p = random_interior_point(rng, t);
    auto sd = subtriangle_data(p, t);
    CHECK(sd.angle[0] + sd.angle[1] + sd.angle[2] ==
          Approx(2.0 * std::numbers::pi).margin(1e-10));
    CHECK(sd.area[0] + sd.area[1] + sd.area[2] == Approx(t.area()).margin(1e-10));
  }
}

TEST_CASE("circle-circle intersections", "[geom]") {
  SECTION("external tangency") {
    auto pts = circle_circle_intersections({0, 0}, 1.0, {2, 0}, 1.0);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == Approx(1.0).margin(1e-12));
    CHECK(pts[0].y == Approx(0.0).margin(1e-12));
  }
  SECTION("classic lens") {
    auto pts = circle_circle_intersections({0, 0}, 1.0, {1, 0}, 1.0);
    REQUIRE(pts.size() == 2);
    for (const Point& p : pts) {
      CHECK(p.x == Approx(0.5).margin(1e-12));
      CHECK(std::abs(p.y) == Approx(std::sqrt(3.0) / 2.0).margin(1e-12));
    }
    CHECK(pts[0].y * pts[1].y < 0.0);
  }
  SECTION("disjoint") {
    CHECK(circle_circle_intersections({0, 0}, 1.0, {3, 0}, 1.0).empty());
  }
  SECTION("nested") {
    CHECK(circle_circle_intersections({0, 0}, 2.0, {0.1, 0}, 0.5).empty());
  }
  SECTION("coincident circles are rejected") {
    CHECK_THROWS_AS(circle_circle_intersections({0, 0}, 1.0, {0, 0}, 1.0), Error);
  }
}

TEST_CASE("circle-circle results satisfy both circle equations", "[geom]") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ur(0.1, 2.0);
  int found = 0;
  for (int k = 0; k < 5000; ++k) {
    Point c1 = random_point(rng, {{-1, -1}, {1, 1}});
    Point c2 = random_point(rng, {{-1, -1}, {1, 1}});
    double r1 = ur(rng), r2 = ur(rng);
    if (distance(c1, c2) < 1e-3) continue;
    double tol = 1e-10 * std::max(r1, r2);
    for (Point p : circle_circle_intersections(c1, r1, c2, r2)) {
      ++found;
      CHECK(std::abs(distance(p, c1) - r1) <= tol);
      CHECK(std::abs(distance(p, c2) - r2) <= tol);
    }
  }
  CHECK(found > 1000);
}

TEST_CASE("line-circle intersections", "[geom]") {
  SECTION("small circle on the axis") {
    auto pts = line_circle_intersections({0, 0}, {1, 0}, {1, 0}, 0.2);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].x == Approx(0.8).margin(1e-12));
    CHECK(pts[1].x == Approx(1.2).margin(1e-12));
    CHECK(pts[0].y == Approx(0.0).margin(1e-12));
  }
  SECTION("miss") {
    CHECK(line_circle_intersections({0, 0}, {1, 0}, {0, 3}, 1.0).empty());
  }
  SECTION("outer-arc radii") {
    auto pts = line_circle_intersections({0, 0}, {1, 0}, {1, 0}, 2.0);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].x == Approx(-1.0).margin(1e-12));
    CHECK(pts[1].x == Approx(3.0).margin(1e-12));
  }
}
