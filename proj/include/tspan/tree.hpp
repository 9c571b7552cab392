#pragma once

// Finite metric trees: nodes and positively weighted edges, points on edges,
// geodesic distances and waypoints, reconstruction of the minimal tree
// realizing a four-point metric, spanned subtrees, nets along edges, and
// ball intersections (trees are hyperconvex, so compatible balls always meet).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tspan/metric_space.hpp"

namespace tspan {

// A point of a metric tree: either a node, or a location strictly inside an
// edge given as the distance from the edge's first endpoint.
struct TreePoint {
  std::size_t node = kNoIndex;
  std::size_t edge = kNoIndex;
  double offset = 0.0;
  bool at_node() const { return node != kNoIndex; }
};

class MetricTree {
 public:
  using point_type = TreePoint;

  struct Edge {
    std::size_t u = kNoIndex;
    std::size_t v = kNoIndex;
    double length = 0.0;
  };

  // ----------------------------------------------------------- construction

  std::size_t add_node(std::string label = "") {
    labels_.push_back(std::move(label));
    adj_.emplace_back();
    dirty_ = true;
    return labels_.size() - 1;
  }

  std::size_t add_edge(std::size_t u, std::size_t v, double length) {
    if (u >= labels_.size() || v >= labels_.size() || u == v)
      throw std::invalid_argument("edge endpoints invalid");
    if (!(length > 0)) throw std::invalid_argument("edge length must be positive");
    edges_.push_back({u, v, length});
    adj_[u].emplace_back(edges_.size() - 1, v);
    adj_[v].emplace_back(edges_.size() - 1, u);
    dirty_ = true;
    return edges_.size() - 1;
  }

  // Splits edge e at `offset` from its first endpoint. The id e is reused for
  // the segment (u, new node); a fresh edge id is appended for (new node, v).
  std::size_t split_edge(std::size_t e, double offset) {
    const Edge old = edge(e);
    if (!(offset > 0) || !(offset < old.length))
      throw std::invalid_argument("split offset must be interior");
    std::size_t mid = add_node();
    edges_[e] = {old.u, mid, offset};
    replace_adj(old.u, e, e, mid);
    drop_adj(old.v, e);
    adj_[mid].emplace_back(e, old.u);
    edges_.push_back({mid, old.v, old.length - offset});
    adj_[mid].emplace_back(edges_.size() - 1, old.v);
    adj_[old.v].emplace_back(edges_.size() - 1, mid);
    dirty_ = true;
    return mid;
  }

  void set_label(std::size_t node, std::string label) {
    labels_.at(node) = std::move(label);
  }

  // ---------------------------------------------------------------- queries

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& label(std::size_t node) const { return labels_.at(node); }
  bool labeled(std::size_t node) const { return !labels_.at(node).empty(); }
  std::size_t degree(std::size_t node) const { return adj_.at(node).size(); }

  // (edge id, neighbor) pairs around a node.
  const std::vector<std::pair<std::size_t, std::size_t>>& neighbors(std::size_t node) const {
    return adj_.at(node);
  }

  std::size_t find_label(const std::string& name) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == name) return i;
    return kNoIndex;
  }

  std::vector<std::size_t> leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (adj_[i].size() == 1) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> labeled_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (!labels_[i].empty()) out.push_back(i);
    return out;
  }

  double total_length() const {
    double s = 0;
    for (const Edge& e : edges_) s += e.length;
    return s;
  }

  std::vector<double> edge_length_multiset() const {
    std::vector<double> out;
    for (const Edge& e : edges_) out.push_back(e.length);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool is_valid() const {
    if (labels_.empty()) return false;
    if (edges_.size() + 1 != labels_.size()) return false;
    std::vector<char> seen(labels_.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (auto [e, w] : adj_[u])
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
    }
    return reached == labels_.size();
  }

  // ----------------------------------------------------------- tree points

  TreePoint at(std::size_t node) const {
    if (node >= labels_.size()) throw std::invalid_argument("node id out of range");
    return {node, kNoIndex, 0.0};
  }

  // Point on edge e at `offset` from its first endpoint; offsets within
  // `snap` of an endpoint normalize to the node form.
  TreePoint on_edge(std::size_t e, double offset, double snap = 1e-12) const {
    const Edge& ed = edge(e);
    if (offset < -snap || offset > ed.length + snap)
      throw std::invalid_argument("offset outside edge");
    if (offset <= snap) return at(ed.u);
    if (offset >= ed.length - snap) return at(ed.v);
    return {kNoIndex, e, offset};
  }

  TreePoint snap_point(const TreePoint& p, double snap) const {
    if (p.at_node()) return p;
    return on_edge(p.edge, p.offset, snap);
  }

  double node_distance(std::size_t u, std::size_t v) const {
    ensure_routes();
    return nd_[u * labels_.size() + v];
  }

  double distance(const TreePoint& p, const TreePoint& q) const {
    check_point(p);
    check_point(q);
    if (!p.at_node() && !q.at_node() && p.edge == q.edge)
      return std::abs(p.offset - q.offset);
    double best = std::numeric_limits<double>::infinity();
    for (auto [a, la] : ends(p))
      for (auto [b, lb] : ends(q)) best = std::min(best, la + node_distance(a, b) + lb);
    return best;
  }

  // The point at distance s from p along the geodesic toward q (s clamped
  // into [0, d(p,q)]).
  TreePoint point_along(const TreePoint& p, const TreePoint& q, double s) const {
    check_point(p);
    check_point(q);
    const double total = distance(p, q);
    s = std::clamp(s, 0.0, total);
    if (s <= 1e-12) return p;
    if (s >= total - 1e-12) return q;

    if (!p.at_node() && !q.at_node() && p.edge == q.edge) {
      double t = p.offset + (q.offset >= p.offset ? s : -s);
      return on_edge(p.edge, t);
    }

    // Pick the exit node a of p and entry node b of q realizing d(p, q).
    std::size_t a = kNoIndex, b = kNoIndex;
    double la = 0, best = std::numeric_limits<double>::infinity();
    for (auto [x, lx] : ends(p))
      for (auto [y, ly] : ends(q)) {
        double c = lx + node_distance(x, y) + ly;
        if (c < best) {
          best = c;
          a = x;
          la = lx;
          b = y;
        }
      }

    if (!p.at_node()) {
      if (s <= la) {
        const Edge& ed = edge(p.edge);
        double t = (a == ed.u) ? p.offset - s : p.offset + s;
        return on_edge(p.edge, t);
      }
      s -= la;
    }
    std::size_t cur = a;
    while (cur != b) {
      ensure_routes();
      std::size_t e = next_edge_[cur * labels_.size() + b];
      const Edge& ed = edge(e);
      std::size_t other = (ed.u == cur) ? ed.v : ed.u;
      if (s <= ed.length) {
        double t = (cur == ed.u) ? s : ed.length - s;
        return on_edge(e, t);
      }
      s -= ed.length;
      cur = other;
    }
    if (q.at_node()) return at(b);
    const Edge& eq = edge(q.edge);
    double t = (b == eq.u) ? s : eq.length - s;
    return on_edge(q.edge, t);
  }

  std::string describe(const TreePoint& p) const {
    auto name = [&](std::size_t n) {
      return labels_[n].empty() ? "#" + std::to_string(n) : labels_[n];
    };
    if (p.at_node()) return name(p.node);
    const Edge& e = edge(p.edge);
    return name(e.u) + "--" + name(e.v) + "@" + detail::fmt_double(p.offset);
  }

 private:
  void check_point(const TreePoint& p) const {
    if (p.at_node()) {
      if (p.node >= labels_.size()) throw std::invalid_argument("tree point: bad node id");
      return;
    }
    if (p.edge >= edges_.size()) throw std::invalid_argument("tree point: bad edge id");
    if (p.offset < 0 || p.offset > edges_[p.edge].length)
      throw std::invalid_argument("tree point: offset outside edge");
  }

  // Candidate (node, cost-to-reach-it) pairs through which a geodesic can
  // leave the location of p.
  std::vector<std::pair<std::size_t, double>> ends(const TreePoint& p) const {
    if (p.at_node()) return {{p.node, 0.0}};
    const Edge& e = edges_[p.edge];
    return {{e.u, p.offset}, {e.v, e.length - p.offset}};
  }

  void replace_adj(std::size_t node, std::size_t e, std::size_t new_e, std::size_t new_nb) {
    for (auto& [ee, nb] : adj_[node])
      if (ee == e) {
        ee = new_e;
        nb = new_nb;
        return;
      }
    throw std::logic_error("adjacency entry missing");
  }

  void drop_adj(std::size_t node, std::size_t e) {
    auto& v = adj_[node];
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i].first == e) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        return;
      }
    throw std::logic_error("adjacency entry missing");
  }

  void ensure_routes() const {
    if (!dirty_) return;
    if (!is_valid()) throw std::logic_error("tree is not connected/acyclic");
    const std::size_t n = labels_.size();
    nd_.assign(n * n, 0.0);
    next_edge_.assign(n * n, kNoIndex);
    next_node_.assign(n * n, kNoIndex);
    for (std::size_t root = 0; root < n; ++root) {
      // Depth-first from root; record distance and first step toward each node.
      std::vector<std::pair<std::size_t, std::size_t>> stack;  // (node, via-parent)
      std::vector<char> seen(n, 0);
      seen[root] = 1;
      stack.emplace_back(root, kNoIndex);
      while (!stack.empty()) {
        auto [u, via] = stack.back();
        stack.pop_back();
        for (auto [e, w] : adj_[u]) {
          if (seen[w]) continue;
          seen[w] = 1;
          nd_[root * n + w] = nd_[root * n + u] + edges_[e].length;
          if (u == root) {
            next_edge_[root * n + w] = e;
            next_node_[root * n + w] = w;
          } else {
            next_edge_[root * n + w] = next_edge_[root * n + u];
            next_node_[root * n + w] = next_node_[root * n + u];
          }
          stack.emplace_back(w, u);
        }
      }
    }
    dirty_ = false;
  }

  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj_;
  mutable bool dirty_ = true;
  mutable std::vector<double> nd_;
  mutable std::vector<std::size_t> next_edge_;
  mutable std::vector<std::size_t> next_node_;
};

inline bool same_point(const MetricTree& t, const TreePoint& p, const TreePoint& q,
                       double tol = kDefaultTol) {
  return t.distance(p, q) <= tol;
}

// ------------------------------------------------------------ reconstruction

struct FourPointReport {
  bool ok = true;
  std::size_t i = kNoIndex, j = kNoIndex, k = kNoIndex, l = kNoIndex;
  double gap = 0.0;  // excess of the largest pairing sum over the second
};

template <FiniteSpace S>
FourPointReport four_point_check(const S& s, double tol = kDefaultTol) {
  const std::size_t n = s.size();
  FourPointReport worst;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          std::array<double, 3> sums = {s.distance(i, j) + s.distance(k, l),
                                        s.distance(i, k) + s.distance(j, l),
                                        s.distance(i, l) + s.distance(j, k)};
          std::sort(sums.begin(), sums.end());
          double gap = sums[2] - sums[1];
          if (gap > tol && gap > worst.gap) worst = {false, i, j, k, l, gap};
        }
  return worst;
}

// Reconstructs the minimal edge-weighted tree whose leaf/path metric realizes
// the given four-point metric. Points are inserted one at a time: the new
// point's attachment is located on the path between the anchor pair (x, y)
// maximizing (d(x,z) + d(x,y) - d(y,z)) / 2 — the distance from x to the
// meet point of z with that path — which is largest exactly when the true
// attachment lies on the path, and then equals its distance from x.
inline MetricTree tree_from_metric(const FiniteMetricSpace& m, double tol = kDefaultTol) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("cannot build a tree from an empty space");

  MetricTree t;
  if (n == 1) {
    t.add_node(m.label(0));
    return t;
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m.distance(i, j) <= tol)
        throw std::invalid_argument("points '" + m.label(i) + "' and '" + m.label(j) +
                                    "' coincide; tree reconstruction requires distinct points");

  FourPointReport fp = four_point_check(m, tol);
  if (!fp.ok)
    throw std::invalid_argument("four-point condition fails on {" + m.label(fp.i) + ", " +
                                m.label(fp.j) + ", " + m.label(fp.k) + ", " + m.label(fp.l) +
                                "} with gap " + detail::fmt_double(fp.gap));

  std::vector<std::size_t> loc(n, kNoIndex);
  loc[0] = t.add_node(m.label(0));
  loc[1] = t.add_node(m.label(1));
  t.add_edge(loc[0], loc[1], m.distance(0, 1));

  for (std::size_t z = 2; z < n; ++z) {
    std::size_t bx = kNoIndex, by = kNoIndex;
    double best_t = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < z; ++x)
      for (std::size_t y = 0; y < z; ++y) {
        if (x == y) continue;
        double tv = (m.distance(x, z) + m.distance(x, y) - m.distance(y, z)) / 2;
        bool better = tv > best_t + 1e-15;
        bool tie = std::abs(tv - best_t) <= 1e-15;
        if (better || (tie && std::make_pair(m.label(x), m.label(y)) <
                                  std::make_pair(m.label(bx), m.label(by)))) {
          best_t = tv;
          bx = x;
          by = y;
        }
      }
    double along = std::clamp(best_t, 0.0, m.distance(bx, by));
    double height = std::max(0.0, (m.distance(bx, z) + m.distance(by, z) - m.distance(bx, by)) / 2);

    TreePoint attach =
        t.snap_point(t.point_along(t.at(loc[bx]), t.at(loc[by]), along), tol);
    std::size_t an = attach.at_node() ? attach.node : t.split_edge(attach.edge, attach.offset);

    if (height <= tol) {
      if (t.labeled(an))
        throw std::logic_error("attachment collides with labeled node '" + t.label(an) + "'");
      t.set_label(an, m.label(z));
      loc[z] = an;
    } else {
      std::size_t leaf = t.add_node(m.label(z));
      t.add_edge(an, leaf, height);
      loc[z] = leaf;
    }
  }

  double scale = 1 + diameter(m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(t.node_distance(loc[i], loc[j]) - m.distance(i, j)) > tol * scale)
        throw std::runtime_error("reconstructed tree fails to realize the input metric at (" +
                                 m.label(i) + ", " + m.label(j) + ")");
  for (std::size_t v = 0; v < t.node_count(); ++v) {
    if (t.degree(v) == 1 && !t.labeled(v))
      throw std::logic_error("unlabeled leaf after reconstruction");
    if (t.degree(v) == 2 && !t.labeled(v))
      throw std::logic_error("unlabeled pass-through node after reconstruction");
  }
  return t;
}

// The metric on the labeled nodes of a tree (path distances).
inline FiniteMetricSpace labeled_space(const MetricTree& t) {
  std::vector<std::size_t> ids = t.labeled_nodes();
  if (ids.empty()) throw std::invalid_argument("tree has no labeled nodes");
  std::vector<std::string> labels;
  std::vector<std::vector<double>> m(ids.size(), std::vector<double>(ids.size(), 0.0));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    labels.push_back(t.label(ids[i]));
    for (std::size_t j = 0; j < ids.size(); ++j)
      m[i][j] = t.node_distance(ids[i], ids[j]);
  }
  return FiniteMetricSpace::from_matrix(std::move(labels), m);
}

// Merges away unlabeled degree-2 nodes, keeping total lengths; useful for
// shape comparisons after subtree extraction.
inline MetricTree suppress_degree2(const MetricTree& t) {
  const std::size_t n = t.node_count();
  // Union-find over "surviving" structure is overkill: walk maximal chains.
  std::vector<char> gone(n, 0);
  struct NewEdge {
    std::size_t u, v;
    double len;
  };
  std::vector<NewEdge> out_edges;
  auto passthrough = [&](std::size_t v) { return t.degree(v) == 2 && !t.labeled(v); };

  std::vector<char> edge_used(t.edge_count(), 0);
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    if (edge_used[e]) continue;
    const auto& ed = t.edge(e);
    // Extend the chain containing e in both directions.
    auto extend = [&](std::size_t node, std::size_t via_edge) {
      double len = 0;
      std::size_t cur = node, prev_edge = via_edge;
      while (passthrough(cur)) {
        gone[cur] = 1;
        const auto& nb = t.neighbors(cur);
        std::size_t next_e = (nb[0].first == prev_edge) ? nb[1].first : nb[0].first;
        edge_used[next_e] = 1;
        len += t.edge(next_e).length;
        cur = (t.edge(next_e).u == cur) ? t.edge(next_e).v : t.edge(next_e).u;
        prev_edge = next_e;
      }
      return std::make_pair(cur, len);
    };
    edge_used[e] = 1;
    auto [a, la] = extend(ed.u, e);
    auto [b, lb] = extend(ed.v, e);
    out_edges.push_back({a, b, la + ed.length + lb});
  }

  MetricTree out;
  std::vector<std::size_t> remap(n, kNoIndex);
  for (std::size_t v = 0; v < n; ++v)
    if (!gone[v]) remap[v] = out.add_node(t.label(v));
  for (const NewEdge& e : out_edges) out.add_edge(remap[e.u], remap[e.v], e.len);
  return out;
}

// --------------------------------------------------------- spanned subtrees

struct SpannedSubtree {
  MetricTree tree;
  std::vector<TreePoint> images;  // image of each requested point, node form
};

// The union of all geodesics between points of A, returned as a tree of its
// own together with the images of A. Every leaf of the result is an A-point,
// and A reproduces all distances of the result (verified on a node+midpoint
// sample before returning).
inline SpannedSubtree spanned_subtree(const MetricTree& t, std::vector<TreePoint> a,
                                      double tol = kDefaultTol) {
  if (a.empty()) throw std::invalid_argument("spanned subtree of an empty set");

  MetricTree w = t;  // working copy whose edges we may split
  for (TreePoint& p : a) p = w.snap_point(p, tol);

  // Turn every edge-interior request into a node, re-locating pending points
  // that sit on the tail segment of a split edge.
  std::vector<std::size_t> ids(a.size(), kNoIndex);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].at_node()) {
      ids[i] = a[i].node;
      continue;
    }
    std::size_t mid = w.split_edge(a[i].edge, a[i].offset);
    std::size_t tail = w.edge_count() - 1;
    double cut = a[i].offset;
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[j].at_node() || a[j].edge != a[i].edge) continue;
      const double orig = a[j].offset;  // offset along the edge before the split
      if (orig > cut)
        a[j] = w.snap_point({kNoIndex, tail, orig - cut}, tol);
      else
        a[j] = w.snap_point({kNoIndex, a[j].edge, orig}, tol);
      if (std::abs(orig - cut) <= tol && !a[j].at_node()) a[j] = w.at(mid);
    }
    ids[i] = mid;
    a[i] = w.at(mid);
  }

  // Mark everything on some geodesic from a fixed base point: in a tree the
  // union of pairwise geodesics of A equals the union of geodesics from any
  // one of its points to the others.
  const std::size_t n = w.node_count();
  std::vector<char> keep_node(n, 0), keep_edge(w.edge_count(), 0);
  keep_node[ids[0]] = 1;
  for (std::size_t id : ids) {
    // Walk from ids[0] to id marking edges via repeated first steps.
    std::size_t cur = ids[0];
    keep_node[id] = 1;
    while (cur != id) {
      // First edge on the path cur -> id.
      std::size_t step = kNoIndex, nxt = kNoIndex;
      for (auto [e, nb] : w.neighbors(cur)) {
        double via = w.edge(e).length + w.node_distance(nb, id);
        if (std::abs(via - w.node_distance(cur, id)) <= 1e-9 * (1 + via)) {
          step = e;
          nxt = nb;
          break;
        }
      }
      if (step == kNoIndex) throw std::logic_error("path walk failed");
      keep_edge[step] = 1;
      keep_node[nxt] = 1;
      cur = nxt;
    }
  }

  SpannedSubtree out;
  std::vector<std::size_t> remap(n, kNoIndex);
  for (std::size_t v = 0; v < n; ++v)
    if (keep_node[v]) remap[v] = out.tree.add_node(w.label(v));
  for (std::size_t e = 0; e < w.edge_count(); ++e)
    if (keep_edge[e])
      out.tree.add_edge(remap[w.edge(e).u], remap[w.edge(e).v], w.edge(e).length);
  for (std::size_t id : ids) out.images.push_back(out.tree.at(remap[id]));

  // Verify that the image of A reproduces all distances of the subtree.
  std::vector<TreePoint> sample;
  for (std::size_t v = 0; v < out.tree.node_count(); ++v) sample.push_back(out.tree.at(v));
  for (std::size_t e = 0; e < out.tree.edge_count(); ++e)
    sample.push_back(out.tree.on_edge(e, out.tree.edge(e).length / 2));
  PointSubset subset;
  std::vector<char> taken(out.tree.node_count(), 0);
  for (const TreePoint& p : out.images)
    if (!taken[p.node]) {
      taken[p.node] = 1;
      subset.push_back(p.node);
    }
  SampledSpace<MetricTree> sampled(out.tree, sample);
  SpanCheck chk = spans_check(sampled, subset, SpanMode::StrictlySpans, 1e-7);
  if (!chk.ok) throw std::logic_error("spanned subtree fails its spanning self-check");
  return out;
}

// ----------------------------------------------------------------- tree nets

// All nodes plus evenly spaced interior points so that consecutive samples
// along every edge are at most 2h apart; the result covers the tree within h.
inline std::vector<TreePoint> tree_net(const MetricTree& t, double h) {
  if (!(h > 0)) throw std::invalid_argument("net spacing must be positive");
  std::vector<TreePoint> out;
  for (std::size_t v = 0; v < t.node_count(); ++v) out.push_back(t.at(v));
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    const double len = t.edge(e).length;
    auto k = static_cast<std::size_t>(std::ceil(len / (2 * h) - 1e-12));
    for (std::size_t i = 1; i < k; ++i)
      out.push_back(t.on_edge(e, len * static_cast<double>(i) / static_cast<double>(k)));
  }
  return out;
}

// ------------------------------------------------------- ball intersections

// A point lying in every ball B(center_i, radius_i) of the tree. Walks into
// each ball in turn; on a tree, once inside a set of pairwise compatible
// balls, the minimal move into the next ball stays inside all previous ones.
inline TreePoint ball_intersection(const MetricTree& t, std::span<const TreePoint> centers,
                                   std::span<const double> radii, double tol = kDefaultTol) {
  if (centers.empty() || centers.size() != radii.size())
    throw std::invalid_argument("ball intersection needs matching centers and radii");
  for (double r : radii)
    if (r < -tol) throw std::invalid_argument("negative ball radius");

  TreePoint p = centers[0];
  for (std::size_t i = 0; i < centers.size(); ++i) {
    double d = t.distance(p, centers[i]);
    double r = std::max(0.0, radii[i]);
    if (d > r) p = t.point_along(p, centers[i], d - r);
  }
  for (std::size_t i = 0; i < centers.size(); ++i)
    if (t.distance(p, centers[i]) > std::max(0.0, radii[i]) + tol)
      throw ball_error("tree ball intersection failed at ball " + std::to_string(i) +
                       ": dist " + detail::fmt_double(t.distance(p, centers[i])) +
                       " > radius " + detail::fmt_double(radii[i]));
  return p;
}

}  // namespace tspan
