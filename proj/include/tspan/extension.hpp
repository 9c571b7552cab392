#pragma once

// Distortion-preserving extension of relations into injective targets, the
// tree-source variant that adds requested points exactly, completion of a
// relation to cover prescribed nets, and the end-to-end stability
// certificates comparing a pair of spaces with their hulls (or trees).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tspan/gh.hpp"
#include "tspan/metric_space.hpp"
#include "tspan/tight_span.hpp"
#include "tspan/tree.hpp"

namespace tspan {

// ------------------------------------------------------------ spanning pools

// A witness pool for the identity |xx'| = max_a (|xa| - |x'a|): the canonical
// rows span a hull, the leaves strictly span a tree. The extension steps
// require the pool to be contained in the left projection of the relation.
inline std::vector<FnVec> spanning_pool(const HullSpace& xs) {
  std::vector<FnVec> pool;
  for (std::size_t z = 0; z < xs.base().size(); ++z) pool.push_back(xs.canonical(z));
  return pool;
}

inline std::vector<TreePoint> spanning_pool(const MetricTree& xs) {
  std::vector<TreePoint> pool;
  for (std::size_t v : xs.leaves()) pool.push_back(xs.at(v));
  if (pool.empty()) pool.push_back(xs.at(0));  // single-node tree
  return pool;
}

// ------------------------------------------------------------ extension state

template <class XS, class YS>
class ExtensionState {
 public:
  using PX = typename XS::point_type;
  using PY = typename YS::point_type;

  // Verifies on construction that the relation is nonempty and that the left
  // projection contains the spanning pool of the left space.
  ExtensionState(const XS& xs, const YS& ys, Relation<XS, YS> rel, double tol = kDefaultTol)
      : xs_(&xs), ys_(&ys), rel_(std::move(rel)) {
    if (rel_.size() == 0) throw std::invalid_argument("extension needs a nonempty relation");
    for (const PX& p : spanning_pool(xs)) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [x, y] : rel_.pairs()) best = std::min(best, xs_->distance(p, x));
      if (best > tol)
        throw std::invalid_argument(
            "spanning precondition fails: a required left point is " +
            detail::fmt_double(best) + " away from the relation's left projection");
    }
  }

  const XS& xspace() const { return *xs_; }
  const YS& yspace() const { return *ys_; }
  Relation<XS, YS>& rel() { return rel_; }
  const Relation<XS, YS>& rel() const { return rel_; }
  double alpha() const { return rel_.alpha(); }

 private:
  const XS* xs_;
  const YS* ys_;
  Relation<XS, YS> rel_;
};

namespace detail {

template <class XS, class YS>
void check_distortion_preserved(const Relation<XS, YS>& rel, double before, double tol,
                                const char* what) {
  if (rel.distortion() > before + tol)
    throw std::logic_error(std::string(what) + " raised distortion from " +
                           fmt_double(before) + " to " + fmt_double(rel.distortion()));
}

}  // namespace detail

// ------------------------------------------------- injective-target step

// Given a relation R with dis R = 2a between injective spaces whose left
// projection spans its space, produce (x0, y0) with |xq x0| <= a such that
// R + (x0, y0) still has distortion 2a. First y0 is taken in the balls
// B(y_i, |x_i xq| + a); then x0 in the balls B(x_i, |y_i y0| + 2a) and
// B(xq, a) — all pairwise compatible, the latter thanks to the spanning
// lower bound |y_i y0| >= |x_i xq| - 3a.
template <class XS, class YS>
std::pair<typename XS::point_type, typename YS::point_type> extend_step_injective(
    ExtensionState<XS, YS>& st, const typename XS::point_type& xq, double tol = kDefaultTol) {
  const double a = st.alpha();
  const auto& pairs = st.rel().pairs();

  std::vector<typename YS::point_type> yc;
  std::vector<double> yr;
  for (const auto& [x, y] : pairs) {
    yc.push_back(y);
    yr.push_back(st.xspace().distance(x, xq) + a);
  }
  auto y0 = ball_intersection(st.yspace(), std::span(yc), std::span(yr), tol);

  std::vector<typename XS::point_type> xc;
  std::vector<double> xr;
  for (const auto& [x, y] : pairs) {
    xc.push_back(x);
    xr.push_back(st.yspace().distance(y, y0) + 2 * a);
  }
  xc.push_back(xq);
  xr.push_back(a);
  auto x0 = ball_intersection(st.xspace(), std::span(xc), std::span(xr), tol);

  if (st.xspace().distance(xq, x0) > a + tol)
    throw std::logic_error("extension step left the requested point " +
                           detail::fmt_double(st.xspace().distance(xq, x0)) +
                           " away (allowed " + detail::fmt_double(a) + ")");

  double before = st.rel().distortion();
  st.rel().add(x0, y0);
  detail::check_distortion_preserved(st.rel(), before, tol, "injective extension step");
  return {x0, y0};
}

// Applies the injective step to each point in order.
template <class XS, class YS>
void extend_over(ExtensionState<XS, YS>& st,
                 std::span<const typename XS::point_type> points, double tol = kDefaultTol) {
  for (const auto& p : points) extend_step_injective(st, p, tol);
}

// Extends a hull-to-hull relation over a net of the left complex: afterwards
// every net point has a partner within alpha and distortion is unchanged.
template <class YS>
Relation<HullSpace, YS> extend_to_net(const HullSpace& xs, const YS& ys,
                                      Relation<HullSpace, YS> rel,
                                      const TightSpanComplex& cx, double h,
                                      double tol = kDefaultTol) {
  ExtensionState<HullSpace, YS> st(xs, ys, std::move(rel), tol);
  NetSample net = sample_net(cx, h);
  std::sort(net.points.begin(), net.points.end());
  extend_over(st, std::span<const FnVec>(net.points), tol);
  return std::move(st.rel());
}

// ------------------------------------------------------- tree-source step

// Tree variant: the requested point joins the relation exactly. y0 is found
// as above; if some pair has |y y0| strictly below |x xq| - a, the geodesic
// through xq from the worst such x1 is prolonged to a witness x2 of the
// relation (|x1 xq| + |xq x2| = |x1 x2|), and the partner is re-centered
// toward y2 by t = min(a, |y0 y2|) along the segment from y0.
template <class YS>
typename YS::point_type extend_step_tree(ExtensionState<MetricTree, YS>& st,
                                         const TreePoint& xq, double tol = kDefaultTol) {
  const double a = st.alpha();
  const MetricTree& tx = st.xspace();
  const auto& pairs = st.rel().pairs();

  std::vector<typename YS::point_type> yc;
  std::vector<double> yr;
  for (const auto& [x, y] : pairs) {
    yc.push_back(y);
    yr.push_back(tx.distance(x, xq) + a);
  }
  auto y0 = ball_intersection(st.yspace(), std::span(yc), std::span(yr), tol);

  std::size_t worst = kNoIndex;
  double worst_violation = tol;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    double v = tx.distance(pairs[i].first, xq) - a - st.yspace().distance(pairs[i].second, y0);
    if (v > worst_violation) {
      worst_violation = v;
      worst = i;
    }
  }

  typename YS::point_type ybar = y0;
  if (worst != kNoIndex) {
    const auto& [x1, y1] = pairs[worst];
    double d1q = tx.distance(x1, xq);
    std::size_t wit = kNoIndex;
    double wit_len = -1;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      double d12 = tx.distance(x1, pairs[i].first);
      double dq2 = tx.distance(xq, pairs[i].first);
      if (std::abs(d1q + dq2 - d12) <= 1e-9 * (1 + d12) && dq2 > wit_len) {
        wit_len = dq2;
        wit = i;
      }
    }
    if (wit == kNoIndex)
      throw std::invalid_argument(
          "no geodesic witness through the requested point; left projection does not "
          "strictly span the tree");
    const auto& y2 = pairs[wit].second;
    double d02 = st.yspace().distance(y0, y2);
    double t = std::min(a, d02);
    std::vector<typename YS::point_type> bc = {y0, y2};
    std::vector<double> br = {t, d02 - t};
    ybar = ball_intersection(st.yspace(), std::span(bc), std::span(br), tol);
  }

  double before = st.rel().distortion();
  st.rel().add(xq, ybar);
  detail::check_distortion_preserved(st.rel(), before, tol, "tree extension step");
  return ybar;
}

// Two-pass net extension between trees: extend over a net of X, then (with
// roles swapped) over a net of Y. Distortion is unchanged and both
// projections contain their nets, certifying d_GH(X, Y) <= dis/2 + 2h.
inline Relation<MetricTree, MetricTree> extend_tree_relation(
    const MetricTree& x, const MetricTree& y, Relation<MetricTree, MetricTree> rel,
    double h, double tol = kDefaultTol) {
  {
    ExtensionState<MetricTree, MetricTree> st(x, y, std::move(rel), tol);
    for (const TreePoint& p : tree_net(x, h)) extend_step_tree(st, p, tol);
    rel = std::move(st.rel());
  }
  Relation<MetricTree, MetricTree> flipped = transpose(rel);
  ExtensionState<MetricTree, MetricTree> st(y, x, std::move(flipped), tol);
  for (const TreePoint& p : tree_net(y, h)) extend_step_tree(st, p, tol);
  return transpose(st.rel());
}

// --------------------------------------------------------------- completion

template <class XS, class YS>
struct CompletionResult {
  Relation<XS, YS> rel;
  double beta_left = 0;   // covering radius of the left net by the left projection
  double beta_right = 0;
};

// Pairs every yet-uncovered net point with the partner of its nearest covered
// point, on both sides; the distortion grows by at most twice the larger
// covering radius (verified by exact recomputation).
template <class XS, class YS>
CompletionResult<XS, YS> complete_to_correspondence(
    const XS& xs, const YS& ys, const Relation<XS, YS>& rel,
    std::span<const typename XS::point_type> left_net,
    std::span<const typename YS::point_type> right_net, double tol = kDefaultTol) {
  if (left_net.empty() || right_net.empty())
    throw std::invalid_argument("completion requires nonempty nets");
  if (rel.size() == 0) throw std::invalid_argument("completion requires a nonempty relation");

  const auto& pairs = rel.pairs();
  CompletionResult<XS, YS> out{rel, 0, 0};

  for (const auto& xq : left_net) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t near = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      double d = xs.distance(xq, pairs[i].first);
      if (d < best) {
        best = d;
        near = i;
      }
    }
    out.beta_left = std::max(out.beta_left, best);
    if (best > 1e-12) out.rel.add(xq, pairs[near].second);
  }
  for (const auto& yq : right_net) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t near = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      double d = ys.distance(yq, pairs[i].second);
      if (d < best) {
        best = d;
        near = i;
      }
    }
    out.beta_right = std::max(out.beta_right, best);
    if (best > 1e-12) out.rel.add(pairs[near].first, yq);
  }

  double bound = rel.distortion() + 2 * std::max(out.beta_left, out.beta_right) + tol;
  if (out.rel.recompute() > bound)
    throw std::logic_error("completion exceeded its distortion bound: " +
                           detail::fmt_double(out.rel.distortion()) + " > " +
                           detail::fmt_double(bound));
  return out;
}

// ---------------------------------------------------------------- certificate

struct StabilityCertificate {
  double dis0 = 0;       // optimal correspondence distortion between the inputs
  double dis_final = 0;  // distortion after extension over the nets
  double alpha = 0;      // dis0 / 2
  double mesh = 0;
  std::string theorem;   // "3.1" (hulls, factor 2) or "3.2" (trees, factor 1)
  bool pass = false;
  bool optimal = true;   // initial search proved optimal within budget
  double bound = 0;      // the inequality's right-hand side at mesh resolution
  std::vector<std::string> bound_chain;
};

// End-to-end stability run for a pair of finite spaces: compute the exact
// minimum correspondence distortion, lift it to the injective models (trees
// when both metrics satisfy the four-point condition, hull complexes
// otherwise), extend over h-nets, and check the inequality the construction
// certifies: dis_final = dis0 for trees, dis_final <= 2*dis0 for hulls.
inline StabilityCertificate stability_certificate(const FiniteMetricSpace& a,
                                                  const FiniteMetricSpace& b, double h,
                                                  double tol = kDefaultTol,
                                                  std::uint64_t gh_budget = 50'000'000,
                                                  std::uint64_t enum_budget = 80'000'000) {
  if (!(h > 0)) throw std::invalid_argument("mesh must be positive");
  StabilityCertificate cert;
  cert.mesh = h;

  GHResult base = min_distortion_correspondence(a, b, gh_budget);
  cert.dis0 = base.dis;
  cert.alpha = base.dis / 2;
  cert.optimal = base.optimal;
  cert.bound_chain.push_back("dis(R0) = " + detail::fmt_double(base.dis) +
                             " (optimal correspondence between the inputs" +
                             std::string(base.optimal ? "" : ", budget-limited") + ")");

  const bool tree_route = is_four_point(a, tol) && is_four_point(b, tol);
  if (tree_route) {
    cert.theorem = "3.2";
    MetricTree tx = tree_from_metric(a, tol);
    MetricTree ty = tree_from_metric(b, tol);
    Relation<MetricTree, MetricTree> rel(tx, ty);
    for (auto [i, j] : base.pairs)
      rel.add(tx.at(tx.find_label(a.label(i))), ty.at(ty.find_label(b.label(j))));
    cert.bound_chain.push_back("both metrics satisfy the four-point condition; "
                               "lifted to trees with dis = " +
                               detail::fmt_double(rel.distortion()));
    Relation<MetricTree, MetricTree> ext = extend_tree_relation(tx, ty, std::move(rel), h, tol);
    cert.dis_final = ext.recompute();
    cert.bound = cert.dis0 + tol;
    cert.pass = cert.dis_final <= cert.bound;
    cert.bound_chain.push_back("net extension kept dis = " + detail::fmt_double(cert.dis_final) +
                               " over both " + detail::fmt_double(h) + "-nets");
    cert.bound_chain.push_back(
        "d_GH(T_A, T_B) <= dis/2 + 2h = " + detail::fmt_double(cert.dis_final / 2 + 2 * h) +
        " vs d_GH(A, B) = " + detail::fmt_double(cert.dis0 / 2));
  } else {
    cert.theorem = "3.1";
    TightSpanComplex cx = tight_span_complex(a, enum_budget);
    TightSpanComplex cy = tight_span_complex(b, enum_budget);
    HullSpace hx(a), hy(b);
    Relation<HullSpace, HullSpace> rel(hx, hy);
    for (auto [i, j] : base.pairs) rel.add(hx.canonical(i), hy.canonical(j));
    cert.bound_chain.push_back("lifted to the hull complexes with dis = " +
                               detail::fmt_double(rel.distortion()));

    NetSample nx = sample_net(cx, h);
    NetSample ny = sample_net(cy, h);
    std::sort(nx.points.begin(), nx.points.end());
    std::sort(ny.points.begin(), ny.points.end());

    rel = extend_to_net(hx, hy, std::move(rel), cx, h, tol);
    {
      Relation<HullSpace, HullSpace> flipped = transpose(rel);
      flipped = extend_to_net(hy, hx, std::move(flipped), cy, h, tol);
      rel = transpose(flipped);
    }
    cert.bound_chain.push_back("net extension kept dis = " +
                               detail::fmt_double(rel.recompute()) + " (alpha-close covers of " +
                               std::to_string(nx.points.size()) + " + " +
                               std::to_string(ny.points.size()) + " net points)");

    CompletionResult<HullSpace, HullSpace> comp = complete_to_correspondence(
        hx, hy, rel, std::span<const FnVec>(nx.points), std::span<const FnVec>(ny.points), tol);
    cert.dis_final = comp.rel.recompute();
    cert.bound = 2 * cert.dis0 + 2 * h + tol;
    cert.pass = cert.dis_final <= cert.bound;
    cert.bound_chain.push_back("completion over the nets: dis_final = " +
                               detail::fmt_double(cert.dis_final) + " <= dis0 + 2*max(beta) = " +
                               detail::fmt_double(rel.distortion() +
                                                  2 * std::max(comp.beta_left, comp.beta_right)));
    cert.bound_chain.push_back(
        "d_GH(E A, E B) <= dis_final/2 + 2h = " +
        detail::fmt_double(cert.dis_final / 2 + 2 * h) + " vs 2*d_GH(A, B) = " +
        detail::fmt_double(cert.dis0));
  }
  return cert;
}

}  // namespace tspan
