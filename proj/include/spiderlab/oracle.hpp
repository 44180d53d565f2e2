#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "spiderlab/potentials.hpp"
#include "spiderlab/workspace.hpp"

namespace spider::oracle {

// --- Finite differences ------------------------------------------------------

namespace detail {
template <class F>
double probe(F&& f, Point x) {
  double v;
  try {
    v = f(x);
  } catch (const Error& e) {
    throw Error("StencilOutOfDomain", e.what());
  }
  if (!std::isfinite(v)) throw Error("StencilOutOfDomain", "non-finite sample on stencil");
  return v;
}
}  // namespace detail

// Central differences, O(h^2).
template <class F>
Vec2 fd_gradient(F&& f, Point x, double h = 1e-5) {
  double fe = detail::probe(f, {x.x + h, x.y});
  double fw = detail::probe(f, {x.x - h, x.y});
  double fn = detail::probe(f, {x.x, x.y + h});
  double fs = detail::probe(f, {x.x, x.y - h});
  return {(fe - fw) / (2.0 * h), (fn - fs) / (2.0 * h)};
}

template <class F>
Mat2 fd_hessian(F&& f, Point x, double h = 1e-5) {
  double f0 = detail::probe(f, x);
  double fe = detail::probe(f, {x.x + h, x.y});
  double fw = detail::probe(f, {x.x - h, x.y});
  double fn = detail::probe(f, {x.x, x.y + h});
  double fs = detail::probe(f, {x.x, x.y - h});
  double fne = detail::probe(f, {x.x + h, x.y + h});
  double fnw = detail::probe(f, {x.x - h, x.y + h});
  double fse = detail::probe(f, {x.x + h, x.y - h});
  double fsw = detail::probe(f, {x.x - h, x.y - h});
  Mat2 m;
  m.xx = (fe - 2.0 * f0 + fw) / (h * h);
  m.yy = (fn - 2.0 * f0 + fs) / (h * h);
  m.xy = (fne - fnw - fse + fsw) / (4.0 * h * h);
  return m;
}

// --- Sublevel-set grid filtration --------------------------------------------

struct FiltrationEvent {
  int index = 0;  // 0 component birth, 1 merge/cycle birth, 2 cycle fill
  Point at;
  double level = 0.0;
};

struct GridCensus {
  int mu0 = 0;
  int mu1 = 0;
  int mu2 = 0;
  int resolution = 0;
  long level_count = 0;
  std::vector<FiltrationEvent> events;

  int euler() const { return mu0 - mu1 + mu2; }
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  std::vector<int> size;
  explicit UnionFind(int n) : parent(n), size(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
};

// One filtration pass over an n x n rasterization. Pixels are vertices,
// 4-adjacencies edges, complete 2x2 blocks faces; inserting pixels in
// ascending value order tracks (b0, b1) incrementally: b0 via union-find,
// b1 via the running Euler characteristic.
//
// Rasterizing a smooth boundary produces transient staircase features whose
// births die at an adjacent pixel, so their persistence is bounded by the
// value jumps in the death pixel's own neighborhood. Births are paired with
// the events that kill them (elder rule for components, youngest-open for
// cycles) and pairs whose persistence stays within a small multiple of that
// local jump scale are pruned; genuine critical pairs survive because the
// function is flat at a true saddle (neighbor jumps are second order there).
template <class Value, class Member>
GridCensus filtration_pass(Value&& value, Member&& member, Rect box, int n,
                           double persistence_floor, int min_component_pixels = 8) {
  const double dx = box.width() / n;
  const double dy = box.height() / n;
  auto center = [&](int ix, int iy) -> Point {
    return {box.lo.x + (ix + 0.5) * dx, box.lo.y + (iy + 0.5) * dy};
  };

  std::vector<char> inside(static_cast<size_t>(n) * n, 0);
  std::vector<double> val(static_cast<size_t>(n) * n, 0.0);
  std::vector<int> order;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      Point p = center(ix, iy);
      if (!member(p)) continue;
      int id = iy * n + ix;
      inside[id] = 1;
      val[id] = value(p);
      order.push_back(id);
    }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return val[a] < val[b] || (val[a] == val[b] && a < b);
  });

  GridCensus out;
  out.resolution = n;
  out.level_count = static_cast<long>(order.size());
  if (order.empty()) return out;

  auto local_jump = [&](int id) {
    int ix = id % n, iy = id / n;
    double jump = 0.0;
    for (int sy = -1; sy <= 1; ++sy)
      for (int sx = -1; sx <= 1; ++sx) {
        int jx = ix + sx, jy = iy + sy;
        if (jx < 0 || jy < 0 || jx >= n || jy >= n) continue;
        int nb = jy * n + jx;
        if (!inside[nb]) continue;
        jump = std::max(jump, std::abs(val[id] - val[nb]));
      }
    return jump;
  };
  auto is_noise = [&](double birth_level, int death_id) {
    double pers = val[death_id] - birth_level;
    return pers <= persistence_floor || pers <= 2.0 * local_jump(death_id);
  };

  UnionFind uf(n * n);
  std::vector<char> added(static_cast<size_t>(n) * n, 0);
  std::vector<double> comp_birth(static_cast<size_t>(n) * n, 0.0);
  struct Birth {
    double level;
    Point at;
    bool cancelled = false;
  };
  std::vector<Birth> births0;                       // component births
  std::vector<int> comp_birth_id(static_cast<size_t>(n) * n, -1);
  std::vector<Birth> births1;                       // open 1-cycles (LIFO)
  std::vector<std::pair<int, Point>> late_events;   // surviving merges/fills: (index, at)
  std::vector<double> late_levels;

  auto is_added = [&](int ix, int iy) {
    return ix >= 0 && ix < n && iy >= 0 && iy < n && added[iy * n + ix];
  };

  for (int id : order) {
    int ix = id % n, iy = id / n;
    added[id] = 1;
    int neighbors[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
    int roots[4], nroots = 0, edges = 0;
    for (auto& nb : neighbors) {
      if (!is_added(nb[0], nb[1])) continue;
      ++edges;
      int r = uf.find(nb[1] * n + nb[0]);
      bool fresh = true;
      for (int k = 0; k < nroots; ++k)
        if (roots[k] == r) fresh = false;
      if (fresh) roots[nroots++] = r;
    }
    int squares = 0;
    for (int sy = iy - 1; sy <= iy; ++sy)
      for (int sx = ix - 1; sx <= ix; ++sx) {
        if (sx < 0 || sy < 0 || sx + 1 >= n || sy + 1 >= n) continue;
        if (added[sy * n + sx] && added[sy * n + sx + 1] && added[(sy + 1) * n + sx] &&
            added[(sy + 1) * n + sx + 1])
          ++squares;
      }

    int dchi = 1 - edges + squares;
    int db0;
    Point here = center(ix, iy);
    if (nroots == 0) {
      db0 = 1;
      comp_birth[id] = val[id];
      comp_birth_id[id] = static_cast<int>(births0.size());
      births0.push_back({val[id], here});
      uf.size[id] = 1;
    } else {
      db0 = -(nroots - 1);
      // Elder rule: each merge kills the younger component.
      int survivor = roots[0];
      for (int k = 1; k < nroots; ++k) {
        int other = roots[k];
        int young = comp_birth[other] > comp_birth[survivor] ? other : survivor;
        int old = young == other ? survivor : other;
        if (is_noise(comp_birth[young], id)) {
          births0[comp_birth_id[young]].cancelled = true;
        } else {
          late_events.push_back({1, here});
          late_levels.push_back(val[id]);
        }
        uf.size[old] += uf.size[young];
        uf.parent[young] = old;
        survivor = old;
      }
      uf.size[survivor] += 1;
      uf.parent[uf.find(id)] = survivor;
    }

    int db1 = db0 - dchi;
    for (int k = 0; k < db1; ++k) births1.push_back({val[id], here});
    for (int k = 0; k < -db1; ++k) {
      if (births1.empty()) {  // cannot happen homologically; count raw
        out.mu2++;
        late_events.push_back({2, here});
        late_levels.push_back(val[id]);
        continue;
      }
      Birth cyc = births1.back();
      births1.pop_back();
      if (!is_noise(cyc.level, id)) {
        out.mu1++;
        out.events.push_back({1, cyc.at, cyc.level});
        out.mu2++;
        late_events.push_back({2, here});
        late_levels.push_back(val[id]);
      }
    }
  }

  // Final components of only a few pixels that never merged are unresolved
  // raster fragments (corner-wedge tips), not countable claims. Never drop
  // the last component.
  {
    std::vector<std::pair<int, int>> roots;  // (root, size)
    for (int id : order) {
      int r = uf.find(id);
      bool seen = false;
      for (auto& [root, sz] : roots)
        if (root == r) seen = true;
      if (!seen) roots.push_back({r, uf.size[r]});
    }
    int surviving = 0;
    for (auto& [root, sz] : roots)
      if (!births0[comp_birth_id[root]].cancelled) ++surviving;
    for (auto& [root, sz] : roots) {
      if (surviving <= 1) break;
      Birth& b = births0[comp_birth_id[root]];
      if (!b.cancelled && sz < min_component_pixels) {
        b.cancelled = true;
        --surviving;
      }
    }
  }

  for (const Birth& b : births0)
    if (!b.cancelled) {
      out.mu0++;
      out.events.push_back({0, b.at, b.level});
    }
  for (const Birth& b : births1) {  // cycles open at the end are genuine
    out.mu1++;
    out.events.push_back({1, b.at, b.level});
  }
  // Count surviving merges as saddles.
  for (size_t k = 0; k < late_events.size(); ++k) {
    if (late_events[k].first == 1) out.mu1++;
    out.events.push_back({late_events[k].first, late_events[k].second, late_levels[k]});
  }
  std::sort(out.events.begin(), out.events.end(),
            [](const FiltrationEvent& a, const FiltrationEvent& b) {
              return a.level < b.level || (a.level == b.level && a.index < b.index);
            });
  return out;
}

}  // namespace detail

// Census over an arbitrary rasterized region. persistence_floor adds an
// absolute pruning floor on top of the local staircase rule (0 = local only).
template <class Value, class Member>
GridCensus grid_census_region(Value&& value, Member&& member, Rect box, int n,
                              bool verify_refinement = true, double persistence_floor = 0.0) {
  GridCensus coarse = detail::filtration_pass(value, member, box, n, persistence_floor);
  if (verify_refinement) {
    GridCensus fine = detail::filtration_pass(value, member, box, 2 * n, persistence_floor);
    if (fine.mu0 != coarse.mu0 || fine.mu1 != coarse.mu1 || fine.mu2 != coarse.mu2)
      throw Error("ResolutionTooCoarse",
                  "census changed under grid refinement " + std::to_string(n) + " -> " +
                      std::to_string(2 * n));
  }
  return coarse;
}

template <PotentialField P>
GridCensus grid_census(const P& pot, const Workspace& w, int n, bool verify_refinement = true) {
  if (w.empty()) throw Error("EmptyWorkspace", "cannot rasterize an empty workspace");
  Rect box = w.bounds().padded(1e-6);
  return grid_census_region([&](Point p) { return pot.value(p); },
                            [&](Point p) { return w.contains(p); }, box, n, verify_refinement);
}

}  // namespace spider::oracle
