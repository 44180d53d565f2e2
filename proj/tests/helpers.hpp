#pragma once

#include <random>

#include "spiderlab/spiderlab.hpp"

namespace testutil {

using namespace spider;

inline Point random_point(std::mt19937& rng, Rect box) {
  std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x);
  std::uniform_real_distribution<double> uy(box.lo.y, box.hi.y);
  return {ux(rng), uy(rng)};
}

inline Triangle random_triangle(std::mt19937& rng, double min_area = 0.3) {
  Rect box{{-1.5, -1.5}, {1.5, 1.5}};
  for (;;) {
    Triangle t{random_point(rng, box), random_point(rng, box), random_point(rng, box)};
    if (t.area() >= min_area) return t;
  }
}

// Uniform over the triangle; rejects points with any barycentric weight
// below the margin.
inline Point random_interior_point(std::mt19937& rng, const Triangle& t, double margin = 0.02) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (;;) {
    double s = std::sqrt(u01(rng));
    double v = u01(rng);
    Point p = (1.0 - s) * t.a + (s * (1.0 - v)) * t.b + (s * v) * t.c;
    auto w = barycentric(p, t);
    if (w[0] > margin && w[1] > margin && w[2] > margin) return p;
  }
}

// Spider spec with a non-degenerate, non-empty workspace; leg proportions
// scale with the feet circumdistance and get a mild per-leg jitter.
inline SpiderSpec random_spec(std::mt19937& rng) {
  for (;;) {
    Triangle feet = random_triangle(rng, 0.5);
    Point g = feet.centroid();
    double scale = std::max({distance(g, feet.a), distance(g, feet.b), distance(g, feet.c)});
    std::uniform_real_distribution<double> ut(1.0, 1.4);
    std::uniform_real_distribution<double> us(0.45, 0.85);
    std::uniform_real_distribution<double> jitter(0.95, 1.05);
    SpiderSpec spec;
    spec.feet = feet;
    double thigh = ut(rng) * scale;
    double shin = us(rng) * thigh;
    for (int i = 0; i < 3; ++i)
      spec.legs[i] = {thigh * jitter(rng), shin * jitter(rng)};
    try {
      Workspace w = build_workspace(spec);
      if (w.empty()) continue;
      return spec;
    } catch (const Error&) {
      continue;
    }
  }
}

// Spec for the census-vs-oracle agreement runs: random draws are additionally
// required to have features the grid can resolve at `resolution`:
// topological critical levels separated by at least `level_gap`, corners that
// are not razor slivers, and constraint circles several cells clear of
// tangency. Near-degenerate geometry (a corner pair 0.03 deep under a
// boundary noise scale of 0.2, or a sliver a cell wide) is not a fair oracle
// target.
inline SpiderSpec random_census_spec(std::mt19937& rng, int resolution = 256,
                                     double level_gap = 0.25) {
  for (;;) {
    SpiderSpec spec = random_spec(rng);
    Workspace w;
    MorseCensus mc;
    try {
      w = build_workspace(spec);
      mc = census(Hooke{spec.feet}, w);
    } catch (const Error&) {
      continue;
    }
    std::vector<double> levels;
    for (const CriticalPoint& cp : mc.points) levels.push_back(cp.value);
    std::sort(levels.begin(), levels.end());
    bool separated = true;
    for (size_t i = 1; i < levels.size(); ++i)
      if (levels[i] - levels[i - 1] < level_gap) separated = false;
    if (!separated) continue;

    // Any two constraint circles either cross at a healthy angle (no thin
    // crescents near the crossing, feasible or not) or keep a multi-cell gap.
    Rect box = w.bounds();
    double cell = std::max(box.width(), box.height()) / resolution;
    bool fat_features = true;
    for (size_t i = 0; i < w.circles.size() && fat_features; ++i)
      for (size_t j = i + 1; j < w.circles.size() && fat_features; ++j) {
        const ConstraintCircle& ci = w.circles[i];
        const ConstraintCircle& cj = w.circles[j];
        double d = distance(ci.center, cj.center);
        if (d < eps_geo) continue;
        std::vector<Point> xs;
        try {
          xs = circle_circle_intersections(ci.center, ci.radius, cj.center, cj.radius);
        } catch (const Error&) {
          fat_features = false;
          break;
        }
        // Small tangency margins mean a thin lens or crescent whether or not
        // the circles cross.
        double ext = std::abs(d - (ci.radius + cj.radius));
        double in = std::abs(d - std::abs(ci.radius - cj.radius));
        if (std::min(ext, in) < 8.0 * cell) fat_features = false;
        {
          for (Point p : xs) {
            if (std::abs(dot(normalized(p - ci.center), normalized(p - cj.center))) >
                std::cos(0.35))
              fat_features = false;
            // Near-concurrency with a third circle pinches off tiny
            // curvilinear triangles.
            for (size_t k = 0; k < w.circles.size(); ++k) {
              if (k == i || k == j) continue;
              double gap = std::abs(distance(p, w.circles[k].center) - w.circles[k].radius);
              if (gap < 8.0 * cell) fat_features = false;
            }
          }
        }
      }
    if (!fat_features) continue;
    return spec;
  }
}

inline double rel_gradient_residual(Point x, const Triangle& tri, const ChargeTriple& q) {
  double g = norm(coulomb_gradient(x, tri, q));
  double scale = 0.0;
  for (int i = 0; i < 3; ++i) {
    double d = distance(x, tri.vertex(i));
    scale += std::abs(q[i]) / (d * d);
  }
  return g / scale;
}

}  // namespace testutil
