#pragma once

#include <array>
#include <optional>

#include "spiderlab/charges.hpp"
#include "spiderlab/morse.hpp"
#include "spiderlab/workspace.hpp"

namespace spider {

enum class ControlMode { hooke, coulomb };
enum class Certificate { target_is_unique_minimum, target_is_trapped_minimum };

struct ControlSolution {
  ControlMode mode = ControlMode::hooke;
  std::array<double, 3> parameters{};  // weights or charges
  Point target;
  Certificate certificate = Certificate::target_is_unique_minimum;
  double residual = 0.0;
};

// Inverse Hooke control: the weights are the barycentric coordinates of the
// target, which is then the unique minimum of the weighted energy.
inline ControlSolution hooke_weights_for(Point target, const Triangle& tri) {
  auto wts = barycentric(target, tri);
  for (double w : wts)
    if (!(w > 0.0))
      throw Error("TargetOutsideTriangle", "target needs strictly positive barycentric weights");
  Weights w{wts[0], wts[1], wts[2]};
  ControlSolution sol;
  sol.mode = ControlMode::hooke;
  sol.parameters = wts;
  sol.target = target;
  sol.certificate = Certificate::target_is_unique_minimum;
  sol.residual = norm(weighted_hooke_gradient(target, tri, w));
  return sol;
}

// Inverse Coulomb control: stationary charges of the target, certified when
// the target is reachable (in the workspace) and trapped (Hessian of the
// induced potential positive definite).
inline ControlSolution coulomb_charges_for(Point target, const SpiderSpec& spec) {
  spec.validate();
  Workspace w;
  try {
    w = build_workspace(spec);
  } catch (const Error& e) {
    if (std::string(e.name()) == "EmptyWorkspace")
      throw Error("Unreachable", "workspace is empty");
    throw;
  }
  if (!w.contains(target)) throw Error("Unreachable", "target outside the workspace");
  ChargeTriple q = stationary_charges(target, spec.feet);
  if (!trapping_test(target, spec.feet))
    throw Error("NotTrappable", "stationary charges do not trap the target");
  ControlSolution sol;
  sol.mode = ControlMode::coulomb;
  sol.parameters = {q.q1, q.q2, q.q3};
  sol.target = target;
  sol.certificate = Certificate::target_is_trapped_minimum;
  sol.residual = norm(coulomb_gradient(target, spec.feet, q));
  return sol;
}

// --- Gradient flow with boundary sliding -------------------------------------

enum class FlowStatus { converged, stalled_at_saddle, max_steps_reached };
enum class SegmentKind { free_step, sliding };

struct Segment {
  SegmentKind kind = SegmentKind::free_step;
  int circle = -1;  // constraint circle slid along
};

struct Trajectory {
  std::vector<Point> points;      // polyline, points.size() == segments.size() + 1
  std::vector<Segment> segments;  // segment i connects points[i] -> points[i+1]
  Point terminal;
  FlowStatus status = FlowStatus::converged;
};

// Consecutive equal tags compressed into phases.
inline std::vector<Segment> phases(const Trajectory& t) {
  std::vector<Segment> out;
  for (const Segment& s : t.segments)
    if (out.empty() || out.back().kind != s.kind || out.back().circle != s.circle)
      out.push_back(s);
  return out;
}

struct FlowOptions {
  double step = 1e-3;
  long max_steps = 200000;
  double grad_tol = 1e-8;
  int max_halvings = 45;
};

namespace detail {

inline constexpr double flow_active_tol = 1e-9;
inline constexpr double flow_bias = 1e-12;  // feasible-side offset after projection

inline int circle_index(const Workspace& w, int foot, CircleKind kind) {
  for (int i = 0; i < static_cast<int>(w.circles.size()); ++i)
    if (w.circles[i].foot == foot && w.circles[i].kind == kind) return i;
  return -1;
}

inline Point project_to_circle(const ConstraintCircle& c, Point p) {
  Vec2 u = p - c.center;
  if (norm(u) < eps_geo) u = {1.0, 0.0};
  u = normalized(u);
  double r = c.radius + (c.kind == CircleKind::inner ? flow_bias : -flow_bias);
  return c.center + r * u;
}

// Push a candidate back across any constraint the step from `from` would
// cross. Constraints already violated at `from` are one-sided obstacles and
// are left alone, so an exterior start descends freely until it enters the
// workspace. Reports the last circle projected onto.
inline Point clamp_to_workspace(const Workspace& w, Point from, Point p, int& touched) {
  touched = -1;
  for (int pass = 0; pass < 4; ++pass) {
    int worst = -1;
    double worst_violation = flow_active_tol;
    for (int i = 0; i < 3; ++i) {
      double dfrom = distance(from, w.constraints[i].center);
      double d = distance(p, w.constraints[i].center);
      double inner_violation = w.constraints[i].r_minus - d;
      double outer_violation = d - w.constraints[i].r_plus;
      bool from_ok_inner = dfrom >= w.constraints[i].r_minus - flow_active_tol;
      bool from_ok_outer = dfrom <= w.constraints[i].r_plus + flow_active_tol;
      if (inner_violation > worst_violation && from_ok_inner) {
        worst_violation = inner_violation;
        worst = circle_index(w, i, CircleKind::inner);
      }
      if (outer_violation > worst_violation && from_ok_outer) {
        worst_violation = outer_violation;
        worst = circle_index(w, i, CircleKind::outer);
      }
    }
    if (worst < 0) return p;
    p = project_to_circle(w.circles[worst], p);
    touched = worst;
  }
  return p;
}

struct EffectiveDirection {
  Vec2 dir{0.0, 0.0};
  int slide_circle = -1;  // circle the direction is tangent to
};

// Descent direction projected onto the feasible cone of the active set.
inline EffectiveDirection effective_direction(const Workspace& w, Point x, Vec2 gradient) {
  Vec2 d = -1.0 * gradient;
  struct Blocker {
    int circle;
    Vec2 n_out;
  };
  std::vector<Blocker> blockers;
  for (const ActiveConstraint& ac : w.active_constraints(x, flow_active_tol)) {
    int ci = circle_index(w, ac.foot, ac.kind);
    Vec2 n = w.circles[ci].outward_normal(x);
    if (dot(d, n) > 0.0) blockers.push_back({ci, n});
  }
  if (blockers.empty()) return {d, -1};
  if (blockers.size() == 1) {
    Vec2 n = blockers[0].n_out;
    return {d - dot(d, n) * n, blockers[0].circle};
  }
  EffectiveDirection best;
  for (size_t i = 0; i < blockers.size(); ++i) {
    Vec2 n = blockers[i].n_out;
    Vec2 dt = d - dot(d, n) * n;
    bool feasible = true;
    for (size_t j = 0; j < blockers.size(); ++j)
      if (j != i && dot(dt, blockers[j].n_out) > flow_active_tol * norm(dt)) feasible = false;
    if (feasible && norm(dt) > norm(best.dir)) best = {dt, blockers[i].circle};
  }
  return best;
}

template <PotentialField P>
FlowStatus classify_terminal(const P& pot, const Workspace& w, Point x) {
  Vec2 g = pot.gradient(x);
  auto active = w.active_constraints(x, flow_active_tol);
  std::vector<int> exiting;
  for (const ActiveConstraint& ac : active) {
    int ci = circle_index(w, ac.foot, ac.kind);
    if (dot(-1.0 * g, w.circles[ci].outward_normal(x)) > 0.0) exiting.push_back(ci);
  }
  if (exiting.empty()) {
    Mat2 h = pot.hessian(x);
    return h.positive_definite() ? FlowStatus::converged : FlowStatus::stalled_at_saddle;
  }
  if (exiting.size() == 1) {
    const ConstraintCircle& c = w.circles[exiting[0]];
    double s2 = tangential_second(pot, c, c.angle_of(x));
    return s2 < 0.0 ? FlowStatus::stalled_at_saddle : FlowStatus::converged;
  }
  // Corner: a genuine stop is a local minimum only if no feasible ray descends.
  const ConstraintCircle& ca = w.circles[exiting[0]];
  const ConstraintCircle& cb = w.circles[exiting[1]];
  Vec2 ra = normalized(perp(x - ca.center));
  if (dot(ra, cb.outward_normal(x)) > 0.0) ra = -ra;
  Vec2 rb = normalized(perp(x - cb.center));
  if (dot(rb, ca.outward_normal(x)) > 0.0) rb = -rb;
  int descending = (dot(g, ra) < 0.0 ? 1 : 0) + (dot(g, rb) < 0.0 ? 1 : 0);
  return descending == 0 ? FlowStatus::converged : FlowStatus::stalled_at_saddle;
}

}  // namespace detail

// Explicit steepest descent with projection: free steps follow -grad; when a
// step exits the workspace the point is projected onto the violated circle
// and subsequent steps slide along it until the descent direction points
// inward again. Potential values decrease strictly step to step. Constraints
// are one-sided obstacles: a start outside the workspace descends freely
// until it enters.
template <PotentialField P>
Trajectory gradient_flow(const P& pot, Point start, const Workspace& w,
                         const FlowOptions& opt = {}) {
  Trajectory tr;
  tr.points.push_back(start);
  tr.status = FlowStatus::max_steps_reached;
  Point x = start;

  for (long it = 0; it < opt.max_steps; ++it) {
    Vec2 g = pot.gradient(x);
    detail::EffectiveDirection eff = detail::effective_direction(w, x, g);
    double mag = norm(eff.dir);
    if (mag <= opt.grad_tol) {
      tr.status = detail::classify_terminal(pot, w, x);
      break;
    }

    double fx = pot.value(x);
    double s = opt.step;
    bool moved = false;
    for (int h = 0; h < opt.max_halvings; ++h, s /= 2.0) {
      Point cand;
      if (eff.slide_circle >= 0) {
        const ConstraintCircle& c = w.circles[eff.slide_circle];
        double theta = c.angle_of(x);
        Vec2 et{-std::sin(theta), std::cos(theta)};
        double dtheta = (dot(eff.dir, et) > 0.0 ? 1.0 : -1.0) * s / c.radius;
        cand = detail::project_to_circle(c, c.at(theta + dtheta));
      } else {
        cand = x + (s / mag) * eff.dir;
      }
      int touched = -1;
      cand = detail::clamp_to_workspace(w, x, cand, touched);
      if (!(pot.value(cand) < fx)) continue;
      Segment seg;
      if (eff.slide_circle >= 0)
        seg = {SegmentKind::sliding, eff.slide_circle};
      else if (touched >= 0)
        seg = {SegmentKind::sliding, touched};
      x = cand;
      tr.points.push_back(x);
      tr.segments.push_back(seg);
      moved = true;
      break;
    }
    if (!moved) {
      tr.status = detail::classify_terminal(pot, w, x);
      break;
    }
  }
  tr.terminal = x;
  return tr;
}

}  // namespace spider
