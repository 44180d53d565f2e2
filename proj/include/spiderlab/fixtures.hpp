#pragma once

#include "spiderlab/workspace.hpp"

namespace spider::fixtures {

// Regular triangle with circumradius 1, centroid at the origin.
inline Triangle t1() {
  double s = std::sqrt(3.0) / 2.0;
  return {{1.0, 0.0}, {-0.5, s}, {-0.5, -s}};
}

// "Holed" spider: annuli [0.2, 2.0]; workspace is a disc with 3 holes.
inline SpiderSpec s1() { return SpiderSpec::uniform(t1(), 1.1, 0.9); }

// "Contractible" spider: annuli [0.5, 1.3]; inner constraints inactive.
inline SpiderSpec s2() { return SpiderSpec::uniform(t1(), 0.9, 0.4); }

}  // namespace spider::fixtures
