#pragma once

// Named example spaces used throughout the tests and the CLI demos: a
// two-point segment, a pair of four-point spaces with matching tree shapes,
// those same spaces enlarged with their two hull branch points, a stretched
// four-point family with a parameter, and the planar zig-zag sets.

#include <stdexcept>
#include <string>
#include <vector>

#include "tspan/gh.hpp"
#include "tspan/metric_space.hpp"

namespace tspan {

inline FiniteMetricSpace seg2() {
  return FiniteMetricSpace::from_matrix({"p", "q"}, {{0, 2}, {2, 0}});
}

// Four points whose hull is an H-shaped tree with legs 2,2,2,2 and bar 2.
inline FiniteMetricSpace intro_a() {
  return FiniteMetricSpace::from_matrix({"a1", "a2", "a3", "a4"},
                                        {{0, 4, 6, 6},
                                         {4, 0, 6, 6},
                                         {6, 6, 0, 4},
                                         {6, 6, 4, 0}});
}

// Four points whose hull is an H-shaped tree with legs 1,1,1,1 and bar 6.
inline FiniteMetricSpace intro_b() {
  return FiniteMetricSpace::from_matrix({"b1", "b2", "b3", "b4"},
                                        {{0, 2, 8, 8},
                                         {2, 0, 8, 8},
                                         {8, 8, 0, 2},
                                         {8, 8, 2, 0}});
}

// intro_a extended by its two hull branch points v1, v2.
inline FiniteMetricSpace intro_a_plus() {
  return FiniteMetricSpace::from_matrix({"a1", "a2", "a3", "a4", "v1", "v2"},
                                        {{0, 4, 6, 6, 2, 4},
                                         {4, 0, 6, 6, 2, 4},
                                         {6, 6, 0, 4, 4, 2},
                                         {6, 6, 4, 0, 4, 2},
                                         {2, 2, 4, 4, 0, 2},
                                         {4, 4, 2, 2, 2, 0}});
}

// intro_b extended by its two hull branch points w1, w2.
inline FiniteMetricSpace intro_b_plus() {
  return FiniteMetricSpace::from_matrix({"b1", "b2", "b3", "b4", "w1", "w2"},
                                        {{0, 2, 8, 8, 1, 7},
                                         {2, 0, 8, 8, 1, 7},
                                         {8, 8, 0, 2, 7, 1},
                                         {8, 8, 2, 0, 7, 1},
                                         {1, 1, 7, 7, 0, 6},
                                         {7, 7, 1, 1, 6, 0}});
}

// Stretched rectangle family: two close pairs at mutual distance about N.
// Its hull is a flat band (a genuine 2-cell) for every N > 4.
inline FiniteMetricSpace rect_a(double n) {
  if (!(n > 4)) throw std::invalid_argument("rect_a requires n > 4");
  return FiniteMetricSpace::from_matrix({"a1", "a2", "a3", "a4"},
                                        {{0, 4, n, n + 4},
                                         {4, 0, n + 4, n},
                                         {n, n + 4, 0, 4},
                                         {n + 4, n, 4, 0}});
}

// Four-point companion of rect_a with tight pairs: hull is an H-tree.
inline FiniteMetricSpace rect_b(double n) {
  if (!(n > 0)) throw std::invalid_argument("rect_b requires n > 0");
  return FiniteMetricSpace::from_matrix({"b1", "b2", "b3", "b4"},
                                        {{0, 2, n + 2, n + 2},
                                         {2, 0, n + 2, n + 2},
                                         {n + 2, n + 2, 0, 2},
                                         {n + 2, n + 2, 2, 0}});
}

// Planar zig-zag set with 2n+1 points (defined with the GH tooling).
inline FiniteMetricSpace zig_zag(int n) { return z_n_set(n); }

// Lookup by name, for the CLI and the demo driver.
inline FiniteMetricSpace fixture(const std::string& name) {
  if (name == "seg2") return seg2();
  if (name == "intro_a") return intro_a();
  if (name == "intro_b") return intro_b();
  if (name == "intro_a_plus") return intro_a_plus();
  if (name == "intro_b_plus") return intro_b_plus();
  if (name == "z1") return zig_zag(1);
  if (name == "z2") return zig_zag(2);
  if (name == "z3") return zig_zag(3);
  if (name.rfind("rect_a_", 0) == 0) return rect_a(std::stod(name.substr(7)));
  if (name.rfind("rect_b_", 0) == 0) return rect_b(std::stod(name.substr(7)));
  throw std::invalid_argument("unknown fixture: " + name);
}

inline std::vector<std::string> fixture_names() {
  return {"seg2",   "intro_a", "intro_b", "intro_a_plus", "intro_b_plus",
          "z1",     "z2",      "z3",      "rect_a_16",    "rect_b_16"};
}

}  // namespace tspan
