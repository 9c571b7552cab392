#pragma once

// The injective hull of a finite metric space, modeled as the set of extremal
// functions: f with f(x) = max_y (d(x,y) - f(y)). Provides the star operator,
// a retraction onto the extremal set, ball intersections (the hull is
// hyperconvex), and the polyhedral complex of the hull — vertices, segments
// and two-dimensional cells of the admissibility polyhedron
// P = { f : f(x) + f(y) >= d(x,y) } — together with net sampling over it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tspan/metric_space.hpp"

namespace tspan {

using FnVec = std::vector<double>;

inline double sup_dist(const FnVec& f, const FnVec& g) {
  if (f.size() != g.size()) throw std::invalid_argument("function vectors differ in size");
  double d = 0;
  for (std::size_t i = 0; i < f.size(); ++i) d = std::max(d, std::abs(f[i] - g[i]));
  return d;
}

// max_b (f(b) - g(b)) with its witness coordinate. For extremal f, g this
// one-sided value already equals the sup-norm distance.
struct GapWitness {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t argmax = kNoIndex;
};

inline GapWitness one_sided_gap(const FnVec& f, const FnVec& g) {
  if (f.size() != g.size()) throw std::invalid_argument("function vectors differ in size");
  GapWitness w;
  for (std::size_t b = 0; b < f.size(); ++b)
    if (f[b] - g[b] > w.value) w = {f[b] - g[b], b};
  return w;
}

// ------------------------------------------------------------ core operators

template <FiniteSpace S>
FnVec star(const S& x, const FnVec& f) {
  if (f.size() != x.size()) throw std::invalid_argument("function size mismatch");
  FnVec out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < f.size(); ++y) m = std::max(m, x.distance(i, y) - f[y]);
    out[i] = m;
  }
  return out;
}

struct AdmissibilityCheck {
  bool ok = true;
  std::size_t x = kNoIndex, y = kNoIndex;
  double deficit = 0.0;  // d(x,y) - f(x) - f(y) at the worst pair
};

template <FiniteSpace S>
AdmissibilityCheck check_admissible(const S& x, const FnVec& f, double tol = kDefaultTol) {
  if (f.size() != x.size()) throw std::invalid_argument("function size mismatch");
  AdmissibilityCheck worst;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i; j < f.size(); ++j) {
      double deficit = x.distance(i, j) - f[i] - f[j];
      if (deficit > tol && deficit > worst.deficit) worst = {false, i, j, deficit};
    }
  return worst;
}

template <FiniteSpace S>
bool is_admissible(const S& x, const FnVec& f, double tol = kDefaultTol) {
  return check_admissible(x, f, tol).ok;
}

template <FiniteSpace S>
bool is_extremal(const S& x, const FnVec& f, double tol = kDefaultTol) {
  if (f.size() != x.size()) return false;
  if (!is_admissible(x, f, tol)) return false;
  return sup_dist(f, star(x, f)) <= tol;
}

inline FnVec canonical_embed(const FiniteMetricSpace& x, std::size_t z) {
  if (z >= x.size()) throw std::invalid_argument("unknown point");
  FnVec f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = x.distance(z, i);
  return f;
}

// Retraction onto the extremal set: average f with star(f) until they agree.
// For admissible f, star(f) <= f pointwise and the average stays admissible,
// so the sequence descends monotonically to a fixed point; every step is
// nonexpansive in sup-norm.
template <FiniteSpace S>
FnVec retract(const S& x, FnVec f, double tol = kDefaultTol) {
  AdmissibilityCheck adm = check_admissible(x, f, tol);
  if (!adm.ok)
    throw std::invalid_argument("retract: input not admissible at pair (" +
                                std::to_string(adm.x) + ", " + std::to_string(adm.y) +
                                "), deficit " + detail::fmt_double(adm.deficit));
  constexpr double kStop = 1e-12;
  constexpr std::size_t kMaxIter = 1'000'000;
  for (std::size_t it = 0; it < kMaxIter; ++it) {
    FnVec s = star(x, f);
    if (sup_dist(f, s) <= kStop) return f;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = (f[i] + s[i]) / 2;
  }
  throw std::runtime_error("retract failed to converge");
}

// A point of the hull within distance radii[i] of centers[i] for every i.
// Computed as the retraction of the pointwise envelope min_i (f_i + r_i),
// which is admissible whenever the balls are pairwise compatible; the
// containment of the result in every ball is re-verified numerically.
template <FiniteSpace S>
FnVec ball_intersection(const S& x, std::span<const FnVec> centers,
                        std::span<const double> radii, double tol = kDefaultTol) {
  if (centers.empty() || centers.size() != radii.size())
    throw std::invalid_argument("ball intersection needs matching centers and radii");
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (radii[i] < -tol) throw std::invalid_argument("negative ball radius");
    if (centers[i].size() != x.size())
      throw std::invalid_argument("center size mismatch");
  }
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if (sup_dist(centers[i], centers[j]) > radii[i] + radii[j] + tol)
        throw ball_error("incompatible balls " + std::to_string(i) + ", " + std::to_string(j) +
                         ": center distance " +
                         detail::fmt_double(sup_dist(centers[i], centers[j])) +
                         " exceeds radius sum " + detail::fmt_double(radii[i] + radii[j]));

  FnVec g(x.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t k = 0; k < x.size(); ++k)
      g[k] = std::min(g[k], centers[i][k] + std::max(0.0, radii[i]));

  FnVec h = retract(x, std::move(g), tol);
  for (std::size_t i = 0; i < centers.size(); ++i)
    if (sup_dist(h, centers[i]) > std::max(0.0, radii[i]) + tol)
      throw ball_error("ball intersection result escapes ball " + std::to_string(i) +
                       ": dist " + detail::fmt_double(sup_dist(h, centers[i])) + " > radius " +
                       detail::fmt_double(radii[i]));
  return h;
}

// The hull of a base space viewed as a point space of function vectors with
// the sup-norm metric; usable wherever a point space with distance() is.
class HullSpace {
 public:
  using point_type = FnVec;

  explicit HullSpace(FiniteMetricSpace base) : base_(std::move(base)) {}

  const FiniteMetricSpace& base() const { return base_; }
  double distance(const FnVec& f, const FnVec& g) const { return sup_dist(f, g); }
  FnVec canonical(std::size_t z) const { return canonical_embed(base_, z); }

 private:
  FiniteMetricSpace base_;
};

inline FnVec ball_intersection(const HullSpace& hs, std::span<const FnVec> centers,
                               std::span<const double> radii, double tol = kDefaultTol) {
  return ball_intersection(hs.base(), centers, radii, tol);
}

// -------------------------------------------------------- polyhedral complex

struct TightSpanComplex {
  struct CEdge {
    std::size_t u = kNoIndex, v = kNoIndex;
    double length = 0.0;
  };

  FiniteMetricSpace base;
  std::vector<FnVec> vertices;              // sorted lexicographically
  std::vector<std::size_t> canonical_vertex;  // base point z -> vertex id of d_z
  std::vector<CEdge> edges;
  std::vector<std::vector<std::size_t>> cells2;  // cyclically ordered vertex ids
  bool higher_dim_present = false;
};

namespace detail {

constexpr std::size_t kMaxHullPoints = 8;

struct HullEnum {
  std::size_t n, m;
  std::vector<std::array<double, kMaxHullPoints + 1>> rows;  // coeffs + rhs
  std::vector<std::pair<std::size_t, std::size_t>> row_pair;  // (i, j) of each constraint
  double feas_tol, dedup_tol;
  std::uint64_t budget, attempts = 0;
  const FiniteMetricSpace* x = nullptr;
  std::vector<FnVec> found;

  struct Level {
    std::vector<std::array<double, kMaxHullPoints + 1>> ech;  // reduced rows, unit pivots
    std::vector<std::size_t> piv;
  };

  bool feasible(const FnVec& f) const {
    for (std::size_t c = 0; c < m; ++c) {
      double lhs = 0;
      for (std::size_t k = 0; k < n; ++k) lhs += rows[c][k] * f[k];
      if (lhs < rows[c][n] - feas_tol) return false;
    }
    return true;
  }

  void record(const FnVec& f) {
    for (const FnVec& v : found)
      if (sup_dist(v, f) <= dedup_tol) return;
    found.push_back(f);
  }

  void dfs(std::size_t start, const Level& lvl) {
    if (lvl.piv.size() == n) {
      FnVec f(n, 0.0);
      for (std::size_t r = 0; r < n; ++r) f[lvl.piv[r]] = lvl.ech[r][n];
      if (feasible(f)) record(f);
      return;
    }
    if (m - start < n - lvl.piv.size()) return;
    for (std::size_t c = start; c < m; ++c) {
      if (++attempts > budget)
        throw std::runtime_error("hull enumeration budget exceeded (" +
                                 std::to_string(budget) + " pivot attempts)");
      std::array<double, kMaxHullPoints + 1> r = rows[c];
      for (std::size_t e = 0; e < lvl.ech.size(); ++e) {
        double coef = r[lvl.piv[e]];
        if (coef == 0.0) continue;
        for (std::size_t k = 0; k <= n; ++k) r[k] -= coef * lvl.ech[e][k];
      }
      std::size_t piv = 0;
      double best = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (std::abs(r[k]) > best) {
          best = std::abs(r[k]);
          piv = k;
        }
      if (best <= 1e-9) continue;  // dependent on the chosen set
      const double div = r[piv];
      for (std::size_t k = 0; k <= n; ++k) r[k] /= div;
      r[piv] = 1.0;
      Level next = lvl;
      for (auto& er : next.ech) {
        double coef = er[piv];
        if (coef == 0.0) continue;
        for (std::size_t k = 0; k <= n; ++k) er[k] -= coef * r[k];
      }
      next.ech.push_back(r);
      next.piv.push_back(piv);
      dfs(c + 1, next);
    }
  }
};

inline std::size_t mask_rank(const std::vector<std::array<double, kMaxHullPoints + 1>>& rows,
                             std::uint64_t mask, std::size_t n) {
  std::vector<std::array<double, kMaxHullPoints + 1>> ech;
  std::vector<std::size_t> piv;
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (!(mask & (std::uint64_t{1} << c))) continue;
    std::array<double, kMaxHullPoints + 1> r = rows[c];
    for (std::size_t e = 0; e < ech.size(); ++e) {
      double coef = r[piv[e]];
      if (coef == 0.0) continue;
      for (std::size_t k = 0; k <= n; ++k) r[k] -= coef * ech[e][k];
    }
    std::size_t p = 0;
    double best = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (std::abs(r[k]) > best) {
        best = std::abs(r[k]);
        p = k;
      }
    if (best <= 1e-9) continue;
    const double div = r[p];
    for (std::size_t k = 0; k <= n; ++k) r[k] /= div;
    ech.push_back(r);
    piv.push_back(p);
    if (ech.size() == n) break;
  }
  return ech.size();
}

inline FnVec barycenter(const std::vector<FnVec>& vertices,
                        const std::vector<std::size_t>& ids) {
  FnVec b(vertices[ids[0]].size(), 0.0);
  for (std::size_t id : ids)
    for (std::size_t k = 0; k < b.size(); ++k) b[k] += vertices[id][k];
  for (double& v : b) v /= static_cast<double>(ids.size());
  return b;
}

// Euclidean helpers over function vectors.
inline double dot(const FnVec& a, const FnVec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline FnVec axpy(const FnVec& a, double c, const FnVec& b) {  // a + c*b
  FnVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += c * b[i];
  return r;
}

// Orthonormal planar chart of a 2-cell: origin at the first polygon vertex,
// first axis along the longest boundary edge (so rectangular cells come out
// axis-aligned), second axis the Gram-Schmidt completion.
struct CellChart {
  FnVec origin, u1, u2;
  double op_norm = 0;  // sup-norm of chart step (1,0)/(0,1) combinations
  std::vector<std::array<double, 2>> poly;  // chart coordinates, cyclic order

  FnVec lift(double a, double b) const {
    FnVec p = origin;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += a * u1[i] + b * u2[i];
    return p;
  }
};

inline CellChart make_chart(const std::vector<FnVec>& vertices,
                            const std::vector<std::size_t>& cell) {
  const std::size_t k = cell.size();
  std::size_t be = 0;
  double blen = -1;
  for (std::size_t i = 0; i < k; ++i) {
    const FnVec& a = vertices[cell[i]];
    const FnVec& b = vertices[cell[(i + 1) % k]];
    FnVec d = axpy(b, -1.0, a);
    double l = std::sqrt(dot(d, d));
    if (l > blen) {
      blen = l;
      be = i;
    }
  }
  CellChart ch;
  ch.origin = vertices[cell[be]];
  ch.u1 = axpy(vertices[cell[(be + 1) % k]], -1.0, ch.origin);
  double n1 = std::sqrt(dot(ch.u1, ch.u1));
  for (double& v : ch.u1) v /= n1;

  // Second axis: the vertex with the largest residual off the u1 line.
  FnVec best_res;
  double best = -1;
  for (std::size_t i = 0; i < k; ++i) {
    FnVec d = axpy(vertices[cell[i]], -1.0, ch.origin);
    FnVec res = axpy(d, -dot(d, ch.u1), ch.u1);
    double l = std::sqrt(dot(res, res));
    if (l > best) {
      best = l;
      best_res = res;
    }
  }
  if (best <= 1e-12) throw std::logic_error("degenerate 2-cell chart");
  ch.u2 = best_res;
  for (double& v : ch.u2) v /= best;

  for (std::size_t i = 0; i < ch.origin.size(); ++i)
    ch.op_norm = std::max(ch.op_norm, std::abs(ch.u1[i]) + std::abs(ch.u2[i]));

  for (std::size_t i = 0; i < k; ++i) {
    FnVec d = axpy(vertices[cell[i]], -1.0, ch.origin);
    ch.poly.push_back({dot(d, ch.u1), dot(d, ch.u2)});
  }
  return ch;
}

inline bool chart_is_rectangle(const CellChart& ch, double tol) {
  if (ch.poly.size() != 4) return false;
  auto two_values = [&](int axis, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto& p : ch.poly) {
      lo = std::min(lo, p[axis]);
      hi = std::max(hi, p[axis]);
    }
    for (const auto& p : ch.poly)
      if (std::abs(p[axis] - lo) > tol && std::abs(p[axis] - hi) > tol) return false;
    return true;
  };
  double x0, x1, y0, y1;
  if (!two_values(0, x0, x1) || !two_values(1, y0, y1)) return false;
  // All four corner combinations must be present.
  for (double cx : {x0, x1})
    for (double cy : {y0, y1}) {
      bool hit = false;
      for (const auto& p : ch.poly)
        hit = hit || (std::abs(p[0] - cx) <= tol && std::abs(p[1] - cy) <= tol);
      if (!hit) return false;
    }
  return true;
}

// Closest point of the convex polygon (cyclic, either orientation) to q.
inline std::array<double, 2> project_to_polygon(const std::vector<std::array<double, 2>>& poly,
                                                std::array<double, 2> q) {
  // Inside test: q is inside iff it is on the same side of every edge.
  int sign = 0;
  bool inside = true;
  const std::size_t k = poly.size();
  for (std::size_t i = 0; i < k && inside; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % k];
    double cross = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]);
    if (std::abs(cross) < 1e-12) continue;
    int s = cross > 0 ? 1 : -1;
    if (sign == 0)
      sign = s;
    else if (s != sign)
      inside = false;
  }
  if (inside) return q;

  std::array<double, 2> best = poly[0];
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % k];
    double vx = b[0] - a[0], vy = b[1] - a[1];
    double den = vx * vx + vy * vy;
    double t = den > 0 ? ((q[0] - a[0]) * vx + (q[1] - a[1]) * vy) / den : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    std::array<double, 2> p = {a[0] + t * vx, a[1] + t * vy};
    double d = (p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

}  // namespace detail

// Enumerates the hull complex of X: every vertex of the admissibility
// polyhedron, every bounded segment face, and every bounded two-dimensional
// face. A face is bounded exactly when its tight constraints touch every
// coordinate (all constraint coefficients are nonnegative, so the recession
// cone of the polyhedron is the nonnegative orthant). Midpoints, barycenters
// and canonical rows are re-verified extremal before returning.
inline TightSpanComplex tight_span_complex(const FiniteMetricSpace& x,
                                           std::uint64_t budget = 80'000'000) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("empty space has no hull complex");
  if (n > detail::kMaxHullPoints)
    throw std::invalid_argument("hull enumeration limited to " +
                                std::to_string(detail::kMaxHullPoints) + " points");

  const double scale = 1 + (n > 1 ? diameter(x) : 0.0);
  detail::HullEnum en;
  en.n = n;
  en.x = &x;
  en.feas_tol = 1e-8 * scale;
  en.dedup_tol = 1e-7 * scale;
  en.budget = budget;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      std::array<double, detail::kMaxHullPoints + 1> row{};
      row[i] += 1.0;
      row[j] += 1.0;
      row[n] = x.distance(i, j);
      en.rows.push_back(row);
      en.row_pair.emplace_back(i, j);
    }
  en.m = en.rows.size();
  if (en.m > 64) throw std::logic_error("constraint count exceeds mask width");

  en.dfs(0, {});

  TightSpanComplex c;
  c.base = x;
  c.vertices = std::move(en.found);
  std::sort(c.vertices.begin(), c.vertices.end());

  const double active_tol = 1e-7 * scale;
  for (const FnVec& v : c.vertices)
    if (!is_extremal(x, v, active_tol))
      throw std::logic_error("enumerated vertex fails the extremality check");

  // Canonical rows must appear among the vertices.
  c.canonical_vertex.assign(n, kNoIndex);
  for (std::size_t z = 0; z < n; ++z) {
    FnVec dz = canonical_embed(x, z);
    for (std::size_t v = 0; v < c.vertices.size(); ++v)
      if (sup_dist(c.vertices[v], dz) <= en.dedup_tol) {
        c.canonical_vertex[z] = v;
        break;
      }
    if (c.canonical_vertex[z] == kNoIndex)
      throw std::logic_error("canonical point missing from hull vertices");
  }

  // Active constraint masks per vertex, and coordinate coverage per constraint.
  std::vector<std::uint64_t> vmask(c.vertices.size(), 0);
  std::vector<std::uint64_t> touch(en.m, 0);
  for (std::size_t cc = 0; cc < en.m; ++cc)
    touch[cc] = (std::uint64_t{1} << en.row_pair[cc].first) |
                (std::uint64_t{1} << en.row_pair[cc].second);
  const std::uint64_t all_coords = (n == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  for (std::size_t v = 0; v < c.vertices.size(); ++v)
    for (std::size_t cc = 0; cc < en.m; ++cc) {
      double lhs = 0;
      for (std::size_t k = 0; k < n; ++k) lhs += en.rows[cc][k] * c.vertices[v][k];
      if (std::abs(lhs - en.rows[cc][n]) <= active_tol)
        vmask[v] |= std::uint64_t{1} << cc;
    }

  // Closure of the vertex masks under intersection = candidate faces.
  std::set<std::uint64_t> masks(vmask.begin(), vmask.end());
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<std::uint64_t> cur(masks.begin(), masks.end());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j)
        if (masks.insert(cur[i] & cur[j]).second) grew = true;
  }

  auto covers = [&](std::uint64_t s) {
    std::uint64_t got = 0;
    for (std::size_t cc = 0; cc < en.m; ++cc)
      if (s & (std::uint64_t{1} << cc)) got |= touch[cc];
    return got == all_coords;
  };

  std::map<std::vector<std::size_t>, std::uint64_t> faces;  // vertex set -> tight mask
  for (std::uint64_t s : masks) {
    if (!covers(s)) continue;  // unbounded face: not part of the hull
    std::vector<std::size_t> vs;
    for (std::size_t v = 0; v < c.vertices.size(); ++v)
      if ((vmask[v] & s) == s) vs.push_back(v);
    if (vs.empty()) continue;
    std::uint64_t tight = ~std::uint64_t{0};
    for (std::size_t v : vs) tight &= vmask[v];
    faces.emplace(std::move(vs), tight);
  }

  for (const auto& [vs, tight] : faces) {
    std::size_t dim = n - detail::mask_rank(en.rows, tight, n);
    if (dim == 0) continue;
    if (dim == 1) {
      if (vs.size() != 2) throw std::logic_error("segment face without two endpoints");
      c.edges.push_back({vs[0], vs[1], sup_dist(c.vertices[vs[0]], c.vertices[vs[1]])});
    } else if (dim == 2) {
      if (vs.size() < 3) throw std::logic_error("planar face with fewer than three vertices");
      // Cyclic order: sort by angle about the centroid in a chart of the face.
      detail::CellChart rough = detail::make_chart(c.vertices, vs);
      double cx = 0, cy = 0;
      for (const auto& p : rough.poly) {
        cx += p[0];
        cy += p[1];
      }
      cx /= static_cast<double>(vs.size());
      cy /= static_cast<double>(vs.size());
      std::vector<std::size_t> order(vs.size());
      for (std::size_t i = 0; i < vs.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::atan2(rough.poly[a][1] - cy, rough.poly[a][0] - cx) <
               std::atan2(rough.poly[b][1] - cy, rough.poly[b][0] - cx);
      });
      std::vector<std::size_t> cyc;
      for (std::size_t i : order) cyc.push_back(vs[i]);
      // Canonical start and direction for determinism.
      auto mn = std::min_element(cyc.begin(), cyc.end());
      std::rotate(cyc.begin(), mn, cyc.end());
      if (cyc.size() > 2 && cyc[1] > cyc.back()) {
        std::reverse(cyc.begin() + 1, cyc.end());
      }
      c.cells2.push_back(std::move(cyc));
    } else {
      c.higher_dim_present = true;
    }
  }

  std::sort(c.edges.begin(), c.edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  std::sort(c.cells2.begin(), c.cells2.end());

  for (const auto& e : c.edges) {
    FnVec mid = detail::barycenter(c.vertices, {e.u, e.v});
    if (!is_extremal(x, mid, active_tol))
      throw std::logic_error("segment midpoint fails the extremality check");
  }
  for (const auto& cell : c.cells2) {
    FnVec b = detail::barycenter(c.vertices, cell);
    if (!is_extremal(x, b, active_tol))
      throw std::logic_error("cell barycenter fails the extremality check");
  }
  return c;
}

// ---------------------------------------------------------------- net sample

struct NetSample {
  std::vector<FnVec> points;
  double mesh = 0.0;
};

// Points covering the complex within h: all vertices, segment subdivisions at
// spacing <= 2h, and per-cell grids at sup-norm spacing <= 2h (grid points
// outside a cell are projected back onto it; the grid is densified by sqrt(2)
// in that case so the Euclidean projection cannot stretch the covering bound).
inline NetSample sample_net(const TightSpanComplex& c, double h) {
  if (!(h > 0)) throw std::invalid_argument("net spacing must be positive");
  if (c.higher_dim_present)
    throw std::invalid_argument("complex has cells of dimension 3 or more; cannot sample");

  const double scale = 1 + (c.base.size() > 1 ? diameter(c.base) : 0.0);
  const double dedup = 1e-7 * scale;
  NetSample out;
  out.mesh = h;
  auto push = [&](const FnVec& f) {
    for (const FnVec& p : out.points)
      if (sup_dist(p, f) <= dedup) return;
    out.points.push_back(f);
  };

  for (const FnVec& v : c.vertices) push(v);
  for (const auto& e : c.edges) {
    auto k = static_cast<std::size_t>(std::ceil(e.length / (2 * h) - 1e-12));
    for (std::size_t i = 1; i < k; ++i) {
      double t = static_cast<double>(i) / static_cast<double>(k);
      FnVec p(c.base.size());
      for (std::size_t q = 0; q < p.size(); ++q)
        p[q] = (1 - t) * c.vertices[e.u][q] + t * c.vertices[e.v][q];
      push(p);
    }
  }
  for (const auto& cell : c.cells2) {
    detail::CellChart ch = detail::make_chart(c.vertices, cell);
    bool rect = detail::chart_is_rectangle(ch, 1e-7 * scale);
    double g = 2 * h / ch.op_norm / (rect ? 1.0 : std::sqrt(2.0));
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& p : ch.poly) {
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
    auto steps = [&](double lo, double hi) {
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / g - 1e-12)));
    };
    std::size_t kx = steps(x0, x1), ky = steps(y0, y1);
    for (std::size_t i = 0; i <= kx; ++i)
      for (std::size_t j = 0; j <= ky; ++j) {
        std::array<double, 2> q = {
            x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(kx),
            y0 + (y1 - y0) * static_cast<double>(j) / static_cast<double>(ky)};
        if (!rect) q = detail::project_to_polygon(ch.poly, q);
        push(ch.lift(q[0], q[1]));
      }
  }
  return out;
}

}  // namespace tspan
