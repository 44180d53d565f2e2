#pragma once

#include "spiderlab/morse.hpp"
#include "spiderlab/workspace.hpp"

namespace spider {

// Census of a potential lifted through the branched 8-fold covering to the
// configuration space. Genus is meaningful for the closed orientable surface
// obtained here (euler is always even for the supported topology).
struct CspaceCensus {
  int minima = 0;
  int saddles = 0;
  int maxima = 0;
  int euler = 0;
  int genus = 0;
};

// Knee placements of one two-link leg: intersections of the circle of radius
// thigh about the foot with the circle of radius shin about the center.
// Exactly one placement at a straight or folded arm.
inline std::vector<Point> knee_positions(Point foot, Point center, double thigh, double shin) {
  if (!(thigh > 0.0) || !(shin > 0.0))
    throw Error("Unreachable", "link lengths must be positive");
  double d = distance(foot, center);
  if (d > thigh + shin + eps_geo || d < std::abs(thigh - shin) - eps_geo)
    throw Error("Unreachable", "center distance outside the leg's annulus");
  return circle_circle_intersections(foot, thigh, center, shin);
}

// Branched covering degree above a workspace point: 8 over the interior
// (two knee choices per leg), 4 on a smooth boundary arc (one leg aligned),
// 2 at corners (two legs aligned).
inline int covering_degree(Point x, const Workspace& w) {
  if (!w.contains(x)) throw Error("NotInWorkspace", "point violates an annulus constraint");
  size_t active = w.active_constraints(x).size();
  if (active == 0) return 8;
  if (active == 1) return 4;
  return 2;
}

// Downstairs data the lift consumes: the workspace census, the count of all
// boundary restriction-critical points (every one of them lifts to genuine
// saddles upstairs, including those classified no-change downstairs), and the
// corner count.
struct WorkspaceMorseData {
  int interior_minima = 0;
  int interior_other = 0;
  int boundary_special_points = 0;
  std::vector<int> per_hole_circle;  // restriction criticals per full hole circle
  std::vector<int> per_outer_arc;    // restriction criticals per non-full arc
  int corners = 0;
};

template <PotentialField P>
WorkspaceMorseData workspace_morse_data(const P& pot, const Workspace& w,
                                        const MorseOptions& opt = {}) {
  WorkspaceMorseData data;
  for (const CriticalPoint& cp : interior_critical_points(pot, w, opt))
    (cp.index == 0 ? data.interior_minima : data.interior_other)++;
  std::vector<int> per_arc(w.arcs.size(), 0);
  for (const BoundaryCritical& bc : boundary_restriction_criticals(pot, w, opt)) {
    per_arc[bc.arc]++;
    data.boundary_special_points++;
  }
  for (size_t i = 0; i < w.arcs.size(); ++i)
    (w.arcs[i].full ? data.per_hole_circle : data.per_outer_arc).push_back(per_arc[i]);
  data.corners = static_cast<int>(w.corners.size());
  return data;
}

// Combinatorial lift of the workspace census through the branched covering:
// minima multiply by the interior degree 8, boundary special points by 4,
// corners by 2 (each corner joins four sheets into one maximum pair).
// Only the disc-with-3-holes census structure is lifted; anything else is
// rejected rather than guessed.
inline CspaceCensus lift_census(const WorkspaceMorseData& data, const Workspace& w) {
  auto [b0, b1] = w.betti();
  if (b0 != 1 || b1 != 3)
    throw Error("UnsupportedTopology",
                "lift requires a disc-with-3-holes workspace, got betti (" +
                    std::to_string(b0) + ", " + std::to_string(b1) + ")");
  if (data.interior_minima != 1 || data.interior_other != 0)
    throw Error("UnsupportedTopology", "lift requires exactly one interior minimum");
  if (data.per_hole_circle.size() != 3 || data.per_outer_arc.size() != 3 || data.corners != 3)
    throw Error("UnsupportedTopology", "lift requires 3 hole circles, 3 outer arcs, 3 corners");
  for (int n : data.per_hole_circle)
    if (n != 2) throw Error("UnsupportedTopology", "expected 2 restriction criticals per hole");
  for (int n : data.per_outer_arc)
    if (n != 1) throw Error("UnsupportedTopology", "expected 1 restriction critical per outer arc");

  CspaceCensus out;
  out.minima = 8 * data.interior_minima;
  out.saddles = 4 * data.boundary_special_points;
  out.maxima = 2 * data.corners;
  out.euler = out.minima - out.saddles + out.maxima;
  out.genus = (2 - out.euler) / 2;
  return out;
}

template <PotentialField P>
CspaceCensus lift_census(const P& pot, const Workspace& w, const MorseOptions& opt = {}) {
  return lift_census(workspace_morse_data(pot, w, opt), w);
}

}  // namespace spider
