#pragma once

// Gromov-Hausdorff machinery: relations and their distortion, an exact
// branch-and-bound search for a minimum-distortion correspondence, and the
// elementary lower-bound devices (diameter gap, line-embedding bounds).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tspan/metric_space.hpp"

namespace tspan {

// ------------------------------------------------------------------ Relation

// A relation between two point spaces, stored as explicit point pairs with a
// cached distortion value that is updated incrementally on insertion.
// SX / SY expose `point_type` and `distance(point, point)`.
template <class SX, class SY>
class Relation {
 public:
  using PX = typename SX::point_type;
  using PY = typename SY::point_type;

  Relation(const SX& xs, const SY& ys) : xs_(&xs), ys_(&ys) {}

  const SX& left_space() const { return *xs_; }
  const SY& right_space() const { return *ys_; }
  std::size_t size() const { return pairs_.size(); }
  const std::vector<std::pair<PX, PY>>& pairs() const { return pairs_; }
  double distortion() const { return dis_; }
  double alpha() const { return dis_ / 2; }

  // Inserts a pair, keeping pairs distinct; returns false on a duplicate.
  bool add(const PX& x, const PY& y) {
    for (const auto& [px, py] : pairs_)
      if (xs_->distance(x, px) < 1e-12 && ys_->distance(y, py) < 1e-12) return false;
    for (const auto& [px, py] : pairs_) {
      double dx = xs_->distance(x, px);
      double dy = ys_->distance(y, py);
      dis_ = std::max(dis_, std::abs(dx - dy));
    }
    pairs_.emplace_back(x, y);
    return true;
  }

  // Full recomputation of the cached distortion (used as an exactness guard).
  double recompute() {
    dis_ = 0;
    for (std::size_t i = 0; i < pairs_.size(); ++i)
      for (std::size_t j = i + 1; j < pairs_.size(); ++j) {
        double dx = xs_->distance(pairs_[i].first, pairs_[j].first);
        double dy = ys_->distance(pairs_[i].second, pairs_[j].second);
        dis_ = std::max(dis_, std::abs(dx - dy));
      }
    return dis_;
  }

 private:
  const SX* xs_;
  const SY* ys_;
  std::vector<std::pair<PX, PY>> pairs_;
  double dis_ = 0;
};

template <class SX, class SY>
Relation<SY, SX> transpose(const Relation<SX, SY>& r) {
  Relation<SY, SX> t(r.right_space(), r.left_space());
  for (const auto& [x, y] : r.pairs()) t.add(y, x);
  return t;
}

template <class SX, class SY>
double distortion(const Relation<SX, SY>& r) {
  return r.distortion();
}

// ------------------------------------------------- correspondence search

struct GHResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double dis = 0;
  bool optimal = true;
  std::uint64_t nodes = 0;
  double gh() const { return dis / 2; }
};

template <FiniteSpace A, FiniteSpace B>
bool is_correspondence(const A& a, const B& b,
                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<char> la(a.size(), 0), rb(b.size(), 0);
  for (auto [i, j] : pairs) {
    if (i >= a.size() || j >= b.size()) return false;
    la[i] = 1;
    rb[j] = 1;
  }
  return std::all_of(la.begin(), la.end(), [](char c) { return c; }) &&
         std::all_of(rb.begin(), rb.end(), [](char c) { return c; });
}

template <FiniteSpace A, FiniteSpace B>
double pair_set_distortion(const A& a, const B& b,
                           const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  double dis = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      double dx = a.distance(pairs[i].first, pairs[j].first);
      double dy = b.distance(pairs[i].second, pairs[j].second);
      dis = std::max(dis, std::abs(dx - dy));
    }
  return dis;
}

namespace detail {

// Shared state of the exact correspondence search. Left points are assigned a
// right partner in decreasing-eccentricity order; afterwards every right point
// still uncovered is assigned a left partner. Both phases branch and bound on
// the partial distortion, with a forward-checking bound: for each undecided
// left point the best distortion any single assignment could still achieve is
// tracked incrementally, and its maximum is a valid lower bound.
template <FiniteSpace A, FiniteSpace B>
struct CorrSearch {
  const A& a;
  const B& b;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool exhausted = false;

  std::vector<std::size_t> order;        // left indices, by decreasing eccentricity
  std::vector<std::size_t> assign;       // left -> right (kNoIndex while unset)
  std::vector<std::size_t> cover_count;  // per right point
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::size_t, std::size_t>> best_pairs;
  std::vector<std::pair<std::size_t, std::size_t>> current;

  // fc[d][p*nB + r]: max over pairs decided in levels < d of the distortion
  // that assigning left point p to right point r would incur.
  std::vector<std::vector<double>> fc;

  CorrSearch(const A& a_, const B& b_, std::uint64_t budget_) : a(a_), b(b_), budget(budget_) {}

  void record_if_better() {
    double d = pair_set_distortion(a, b, current);
    if (d < best) {
      best = d;
      best_pairs = current;
    }
  }

  bool fc_prunes(const std::vector<double>& table, std::size_t depth) {
    const std::size_t nB = b.size();
    for (std::size_t t = depth + 1; t < order.size(); ++t) {
      std::size_t p = order[t];
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < nB; ++r) mn = std::min(mn, table[p * nB + r]);
      if (mn >= best) return true;
    }
    return false;
  }

  void search_left(std::size_t depth, double partial) {
    if (partial >= best) return;
    const std::size_t nB = b.size();
    if (depth == order.size()) {
      std::vector<std::size_t> uncovered;
      for (std::size_t r = 0; r < nB; ++r)
        if (cover_count[r] == 0) uncovered.push_back(r);
      search_right(uncovered, 0, partial);
      return;
    }
    std::size_t p = order[depth];
    const std::vector<double>& prev = fc[depth];

    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(nB);
    for (std::size_t r = 0; r < nB; ++r) cand.emplace_back(prev[p * nB + r], r);
    std::sort(cand.begin(), cand.end());

    for (auto [added, r] : cand) {
      if (nodes >= budget) {
        exhausted = true;
        return;
      }
      ++nodes;
      double next_partial = std::max(partial, added);
      if (next_partial >= best) continue;

      std::vector<double>& table = fc[depth + 1];
      table = prev;
      for (std::size_t q = 0; q < a.size(); ++q) {
        double dq = a.distance(q, p);
        for (std::size_t s = 0; s < nB; ++s) {
          double v = std::abs(dq - b.distance(s, r));
          if (v > table[q * nB + s]) table[q * nB + s] = v;
        }
      }
      if (fc_prunes(table, depth)) continue;

      assign[p] = r;
      ++cover_count[r];
      current.emplace_back(p, r);
      search_left(depth + 1, next_partial);
      current.pop_back();
      --cover_count[r];
      assign[p] = kNoIndex;
      if (exhausted) return;
    }
  }

  void search_right(const std::vector<std::size_t>& uncovered, std::size_t k, double partial) {
    if (partial >= best) return;
    if (k == uncovered.size()) {
      if (partial < best) {
        best = partial;
        best_pairs = current;
      }
      return;
    }
    std::size_t r = uncovered[k];
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(a.size());
    for (std::size_t p = 0; p < a.size(); ++p) {
      double added = 0;
      for (const auto& [pp, rr] : current)
        added = std::max(added, std::abs(a.distance(p, pp) - b.distance(r, rr)));
      cand.emplace_back(added, p);
    }
    std::sort(cand.begin(), cand.end());
    for (auto [added, p] : cand) {
      if (nodes >= budget) {
        exhausted = true;
        return;
      }
      ++nodes;
      double next_partial = std::max(partial, added);
      if (next_partial >= best) continue;
      current.emplace_back(p, r);
      search_right(uncovered, k + 1, next_partial);
      current.pop_back();
      if (exhausted) return;
    }
  }
};

}  // namespace detail

// Exact minimum-distortion correspondence between two nonempty finite spaces.
// Any correspondence contains, per left point, one partner and, per uncovered
// right point, one partner; distortion is monotone under taking subsets, so
// searching over that family is exhaustive. If the node budget runs out the
// best correspondence found so far is returned with optimal == false.
template <FiniteSpace A, FiniteSpace B>
GHResult min_distortion_correspondence(const A& a, const B& b,
                                       std::uint64_t budget = 50'000'000) {
  if (a.size() == 0 || b.size() == 0)
    throw std::invalid_argument("correspondence requires nonempty spaces");

  detail::CorrSearch<A, B> s(a, b, budget);
  const std::size_t nA = a.size(), nB = b.size();

  s.order.resize(nA);
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  std::vector<double> ecc(nA, 0);
  for (std::size_t i = 0; i < nA; ++i)
    for (std::size_t j = 0; j < nA; ++j) ecc[i] = std::max(ecc[i], a.distance(i, j));
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](std::size_t i, std::size_t j) { return ecc[i] > ecc[j]; });

  s.assign.assign(nA, kNoIndex);
  s.cover_count.assign(nB, 0);
  s.fc.assign(nA + 1, std::vector<double>());
  s.fc[0].assign(nA * nB, 0.0);

  // Greedy seed: match sorted distance profiles, then cover leftover rights.
  {
    auto profile = [](const auto& sp, std::size_t i) {
      std::vector<double> p;
      for (std::size_t j = 0; j < sp.size(); ++j)
        if (j != i) p.push_back(sp.distance(i, j));
      std::sort(p.begin(), p.end());
      return p;
    };
    std::vector<std::vector<double>> pa(nA), pb(nB);
    for (std::size_t i = 0; i < nA; ++i) pa[i] = profile(a, i);
    for (std::size_t j = 0; j < nB; ++j) pb[j] = profile(b, j);
    auto cost = [](const std::vector<double>& u, const std::vector<double>& v) {
      std::size_t m = std::max(u.size(), v.size());
      double c = 0;
      for (std::size_t k = 0; k < m; ++k) {
        double uu = u.empty() ? 0 : u[std::min(k, u.size() - 1)];
        double vv = v.empty() ? 0 : v[std::min(k, v.size() - 1)];
        c = std::max(c, std::abs(uu - vv));
      }
      return c;
    };
    std::vector<std::pair<std::size_t, std::size_t>> seed;
    std::vector<char> covered(nB, 0);
    for (std::size_t i = 0; i < nA; ++i) {
      std::size_t bestj = 0;
      double bestc = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < nB; ++j) {
        double c = cost(pa[i], pb[j]);
        if (c < bestc) {
          bestc = c;
          bestj = j;
        }
      }
      seed.emplace_back(i, bestj);
      covered[bestj] = 1;
    }
    for (std::size_t j = 0; j < nB; ++j) {
      if (covered[j]) continue;
      std::size_t besti = 0;
      double bestc = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < nA; ++i) {
        double c = cost(pa[i], pb[j]);
        if (c < bestc) {
          bestc = c;
          besti = i;
        }
      }
      seed.emplace_back(besti, j);
    }
    s.best = pair_set_distortion(a, b, seed);
    s.best_pairs = std::move(seed);
  }

  s.search_left(0, 0.0);

  GHResult res;
  res.pairs = std::move(s.best_pairs);
  res.dis = s.best;
  res.optimal = !s.exhausted;
  res.nodes = s.nodes;
  return res;
}

// |diam A - diam B| / 2 is a lower bound for the Gromov-Hausdorff distance.
template <FiniteSpace A, FiniteSpace B>
double gh_lower_bound_diam(const A& a, const B& b) {
  return std::abs(diameter(a) - diameter(b)) / 2;
}

// Graph of an index map f: A -> B, distortion at most eps (+tol)?
template <FiniteSpace A, FiniteSpace B>
bool is_rough_isometry(const A& a, const B& b, const std::vector<std::size_t>& f, double eps,
                       double tol = kDefaultTol) {
  if (f.size() != a.size()) throw std::invalid_argument("map must be defined on all of A");
  for (std::size_t j : f)
    if (j >= b.size()) throw std::invalid_argument("map image out of range");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < f.size(); ++i) pairs.emplace_back(i, f[i]);
  return pair_set_distortion(a, b, pairs) <= eps + tol;
}

// ------------------------------------------------- zig-zag point families

// 2n+1 points in the plane with the l1 metric: a bottom row at y = 0 spaced 8
// apart and a top row at y = 4 centered between them. All consecutive gaps are
// 8, the diameter is 8n; the family separates hull dimension from tree-likeness.
inline FiniteMetricSpace z_n_set(int n) {
  if (n < 1) throw std::invalid_argument("z_n_set requires n >= 1");
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= n; ++i) pts.emplace_back(8.0 * i, 0.0);
  for (int i = 0; i < n; ++i) pts.emplace_back(8.0 * i + 4.0, 4.0);
  std::sort(pts.begin(), pts.end());
  std::vector<std::string> labels;
  std::vector<std::vector<double>> m(pts.size(), std::vector<double>(pts.size(), 0.0));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    labels.push_back("z" + std::to_string(i + 1));
    for (std::size_t j = 0; j < pts.size(); ++j)
      m[i][j] = std::abs(pts[i].first - pts[j].first) + std::abs(pts[i].second - pts[j].second);
  }
  return FiniteMetricSpace::from_matrix(std::move(labels), m);
}

// ------------------------------------------------- maps to the real line

// Chain bound: any map f: Z -> R has distortion at least (m*delta - D)/(m+1)
// where m = |Z|-1, delta the minimum interpoint distance, D the diameter.
// (Sort the images; the m consecutive gaps each exceed delta - eps and their
// sum is at most D + eps.)
template <FiniteSpace Z>
double line_distortion_lower_bound(const Z& z) {
  if (z.size() < 2) return 0;
  double delta = std::numeric_limits<double>::infinity();
  double dmax = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      delta = std::min(delta, z.distance(i, j));
      dmax = std::max(dmax, z.distance(i, j));
    }
  double m = static_cast<double>(z.size() - 1);
  return std::max(0.0, (m * delta - dmax) / (m + 1));
}

struct LineMapResult {
  std::vector<double> images;  // image coordinate per point of Z
  double eps = 0;              // max | |f(i)-f(j)| - d(i,j) |
};

namespace detail {

// Feasibility of the difference-constraint system
//   |y_j - y_i - d(ord_i, ord_j)| <= eps  for i < j,   y monotone,
// via Bellman-Ford negative-cycle detection. On success fills `y`.
inline bool line_feasible(const std::vector<std::vector<double>>& d,
                          const std::vector<std::size_t>& ord, double eps,
                          std::vector<double>* y) {
  const std::size_t k = ord.size();
  struct E {
    std::size_t u, v;
    double w;
  };
  std::vector<E> edges;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      double dij = d[ord[i]][ord[j]];
      edges.push_back({i, j, dij + eps});   // y_j <= y_i + d + eps
      edges.push_back({j, i, -dij + eps});  // y_i <= y_j - d + eps
    }
  for (std::size_t i = 0; i + 1 < k; ++i) edges.push_back({i + 1, i, 0.0});  // y_i <= y_{i+1}

  std::vector<double> dist(k, 0.0);
  for (std::size_t it = 0; it < k; ++it) {
    bool changed = false;
    for (const E& e : edges)
      if (dist[e.u] + e.w < dist[e.v] - 1e-15) {
        dist[e.v] = dist[e.u] + e.w;
        changed = true;
        if (it + 1 == k) return false;  // relaxation on the k-th pass: negative cycle
      }
    if (!changed) break;
  }
  if (y) *y = dist;
  return true;
}

inline double exact_line_eps(const std::vector<std::vector<double>>& d,
                             const std::vector<std::size_t>& ord, double hi,
                             std::vector<double>* y) {
  double lo = 0.0;
  if (line_feasible(d, ord, 0.0, y)) return 0.0;
  for (int it = 0; it < 120 && hi - lo > 1e-15 * (1 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (line_feasible(d, ord, mid, nullptr))
      hi = mid;
    else
      lo = mid;
  }
  line_feasible(d, ord, hi * (1 + 1e-12) + 1e-13, y);
  return hi;
}

}  // namespace detail

// Minimum-distortion map of Z into the real line, by exhaustive search over
// image orderings; the per-ordering minimization is solved to full double
// precision by bisecting the feasibility of its difference-constraint system.
// Exponential in |Z|; intended for |Z| <= 8.
template <FiniteSpace Z>
LineMapResult min_distortion_map_to_line(const Z& z) {
  const std::size_t k = z.size();
  if (k == 0) throw std::invalid_argument("empty space");
  if (k > 8) throw std::invalid_argument("line search limited to 8 points");
  if (k == 1) return {{0.0}, 0.0};

  std::vector<std::vector<double>> d(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) d[i][j] = z.distance(i, j);

  double dmax = diameter(z);
  std::vector<std::size_t> ord(k);
  std::iota(ord.begin(), ord.end(), std::size_t{0});

  LineMapResult best;
  best.eps = std::numeric_limits<double>::infinity();
  do {
    if (ord.front() > ord.back()) continue;  // reversal reaches the same map
    // Quick reject: can this ordering beat the incumbent at all?
    if (std::isfinite(best.eps) &&
        !detail::line_feasible(d, ord, std::max(0.0, best.eps - 1e-12), nullptr))
      continue;
    std::vector<double> y;
    detail::exact_line_eps(d, ord, dmax, &y);
    if (y.empty()) continue;
    // Evaluate the recovered map exactly and keep the honest value.
    std::vector<double> images(k, 0.0);
    double base = *std::min_element(y.begin(), y.end());
    for (std::size_t i = 0; i < k; ++i) images[ord[i]] = y[i] - base;
    double eps = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        eps = std::max(eps, std::abs(std::abs(images[i] - images[j]) - d[i][j]));
    if (eps < best.eps) {
      best.eps = eps;
      best.images = std::move(images);
    }
  } while (std::next_permutation(ord.begin(), ord.end()));
  return best;
}

}  // namespace tspan
