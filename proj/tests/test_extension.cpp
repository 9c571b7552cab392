#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "tspan/extension.hpp"
#include "tspan/fixtures.hpp"
#include "tspan/random_gen.hpp"

using namespace tspan;

namespace {

Relation<HullSpace, HullSpace> canonical_relation(const HullSpace& hx, const HullSpace& hy,
                                                  const FiniteMetricSpace& a,
                                                  const FiniteMetricSpace& b) {
  GHResult base = min_distortion_correspondence(a, b);
  Relation<HullSpace, HullSpace> rel(hx, hy);
  for (auto [i, j] : base.pairs) rel.add(hx.canonical(i), hy.canonical(j));
  return rel;
}

// For trees sharing leaf labels (perturbed copies): match leaves by name.
Relation<MetricTree, MetricTree> leaf_relation(const MetricTree& tx, const MetricTree& ty) {
  Relation<MetricTree, MetricTree> rel(tx, ty);
  for (std::size_t v : tx.leaves()) {
    std::size_t w = ty.find_label(tx.label(v));
    REQUIRE(w != kNoIndex);
    rel.add(tx.at(v), ty.at(w));
  }
  return rel;
}

// For arbitrary pairs: lift the optimal base correspondence onto the trees.
Relation<MetricTree, MetricTree> lifted_tree_relation(const MetricTree& tx, const MetricTree& ty,
                                                      const FiniteMetricSpace& a,
                                                      const FiniteMetricSpace& b) {
  GHResult base = min_distortion_correspondence(a, b);
  Relation<MetricTree, MetricTree> rel(tx, ty);
  for (auto [i, j] : base.pairs)
    rel.add(tx.at(tx.find_label(a.label(i))), ty.at(ty.find_label(b.label(j))));
  return rel;
}

double cover_radius(const HullSpace& hs, const std::vector<FnVec>& net,
                    const std::vector<std::pair<FnVec, FnVec>>& pairs, bool left) {
  double worst = 0;
  for (const FnVec& p : net) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pr : pairs) best = std::min(best, hs.distance(p, left ? pr.first : pr.second));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("spanning pools are the canonical rows and the leaves") {
  FiniteMetricSpace a = intro_a();
  HullSpace hx(a);
  std::vector<FnVec> pool = spanning_pool(hx);
  REQUIRE(pool.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) REQUIRE(pool[i] == hx.canonical(i));

  MetricTree t = tree_from_metric(a);
  std::vector<TreePoint> tpool = spanning_pool(t);
  REQUIRE(tpool.size() == 4);
  for (const TreePoint& p : tpool) REQUIRE(p.at_node());

  MetricTree single;
  single.add_node("only");
  REQUIRE(spanning_pool(single).size() == 1);
}

TEST_CASE("extension state rejects relations that cannot support the identity") {
  FiniteMetricSpace a = intro_a(), b = intro_b();
  HullSpace hx(a), hy(b);

  Relation<HullSpace, HullSpace> empty(hx, hy);
  REQUIRE_THROWS_AS((ExtensionState<HullSpace, HullSpace>(hx, hy, empty)),
                    std::invalid_argument);

  Relation<HullSpace, HullSpace> partial(hx, hy);
  partial.add(hx.canonical(0), hy.canonical(0));
  REQUIRE_THROWS_WITH((ExtensionState<HullSpace, HullSpace>(hx, hy, partial)),
                      Catch::Matchers::ContainsSubstring("spanning precondition"));

  Relation<HullSpace, HullSpace> full = canonical_relation(hx, hy, a, b);
  REQUIRE_NOTHROW((ExtensionState<HullSpace, HullSpace>(hx, hy, full)));
}

TEST_CASE("the injective step stays near the request and preserves distortion") {
  FiniteMetricSpace a = intro_a(), b = intro_b();
  HullSpace hx(a), hy(b);
  ExtensionState<HullSpace, HullSpace> st(hx, hy, canonical_relation(hx, hy, a, b));
  const double dis0 = st.rel().distortion();
  REQUIRE(dis0 == 2.0);

  Rng rng(99);
  for (int k = 0; k < 12; ++k) {
    FnVec xq = random_extremal(rng, a);
    double alpha = st.alpha();
    auto [x0, y0] = extend_step_injective(st, xq);
    REQUIRE(hx.distance(xq, x0) <= alpha + 1e-9);
    REQUIRE(st.rel().distortion() <= dis0 + 1e-7);
  }
  REQUIRE(st.rel().recompute() <= dis0 + 1e-7);
}

TEST_CASE("extending the identity relation tracks every request exactly") {
  FiniteMetricSpace a = rect_a(8);
  HullSpace hx(a);
  Relation<HullSpace, HullSpace> rel(hx, hx);
  for (std::size_t i = 0; i < a.size(); ++i) rel.add(hx.canonical(i), hx.canonical(i));
  ExtensionState<HullSpace, HullSpace> st(hx, hx, rel);
  REQUIRE(st.alpha() == 0.0);

  Rng rng(7);
  for (int k = 0; k < 8; ++k) {
    FnVec xq = random_extremal(rng, a);
    auto [x0, y0] = extend_step_injective(st, xq);
    REQUIRE(hx.distance(xq, x0) <= 1e-8);
    REQUIRE(hx.distance(x0, y0) <= 1e-7);
  }
  REQUIRE(st.rel().recompute() <= 1e-7);
}

TEST_CASE("net extension covers the whole net within alpha") {
  FiniteMetricSpace a = intro_a(), b = intro_b();
  HullSpace hx(a), hy(b);
  TightSpanComplex cx = tight_span_complex(a);
  const double h = 0.5;

  Relation<HullSpace, HullSpace> rel =
      extend_to_net(hx, hy, canonical_relation(hx, hy, a, b), cx, h);
  REQUIRE(rel.recompute() <= 2.0 + 1e-7);

  NetSample net = sample_net(cx, h);
  std::sort(net.points.begin(), net.points.end());
  double alpha = rel.distortion() / 2;
  REQUIRE(cover_radius(hx, net.points, rel.pairs(), true) <= alpha + 1e-7);
}

TEST_CASE("the tree step adds the requested point itself") {
  MetricTree tx = tree_from_metric(intro_a());
  MetricTree ty = tree_from_metric(intro_b());
  ExtensionState<MetricTree, MetricTree> st(
      tx, ty, lifted_tree_relation(tx, ty, intro_a(), intro_b()));
  REQUIRE(st.rel().distortion() == 2.0);

  for (const TreePoint& p : tree_net(tx, 0.5)) {
    extend_step_tree(st, p);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : st.rel().pairs()) best = std::min(best, tx.distance(x, p));
    REQUIRE(best <= 1e-12);  // the request itself (or an exact duplicate) is present
    REQUIRE(st.rel().distortion() <= 2.0 + 1e-7);
  }
  REQUIRE(st.rel().recompute() <= 2.0 + 1e-7);
}

TEST_CASE("two-pass tree extension keeps distortion and covers both nets") {
  MetricTree tx = tree_from_metric(intro_a());
  MetricTree ty = tree_from_metric(intro_b());
  const double h = 0.25;
  Relation<MetricTree, MetricTree> ext = extend_tree_relation(
      tx, ty, lifted_tree_relation(tx, ty, intro_a(), intro_b()), h);

  double dis = ext.recompute();
  REQUIRE(dis == Catch::Approx(2.0).margin(1e-9));

  for (const TreePoint& p : tree_net(tx, h)) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : ext.pairs()) best = std::min(best, tx.distance(p, x));
    REQUIRE(best <= 1e-9);
  }
  for (const TreePoint& q : tree_net(ty, h)) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : ext.pairs()) best = std::min(best, ty.distance(q, y));
    REQUIRE(best <= 1e-9);
  }
}

TEST_CASE("tree extension preserves distortion on perturbed instances") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Rng rng(seed);
    MetricTree tx = random_tree(rng, 4 + rng.index(3));
    MetricTree ty = perturb_edge_lengths(tx, rng, 0.5);
    Relation<MetricTree, MetricTree> rel = leaf_relation(tx, ty);
    const double dis0 = rel.distortion();

    Relation<MetricTree, MetricTree> ext = extend_tree_relation(tx, ty, std::move(rel), 0.5);
    double dis = ext.recompute();
    REQUIRE(dis >= dis0 - 1e-12);  // extension only adds pairs
    REQUIRE(dis <= dis0 + 1e-7);
  }
}

TEST_CASE("completion pairs stray net points with their nearest partners") {
  FiniteMetricSpace a = intro_a(), b = intro_b();
  HullSpace hx(a), hy(b);
  Relation<HullSpace, HullSpace> rel = canonical_relation(hx, hy, a, b);

  std::vector<FnVec> left_net, right_net;
  for (std::size_t i = 0; i < a.size(); ++i) left_net.push_back(hx.canonical(i));
  for (std::size_t j = 0; j < b.size(); ++j) right_net.push_back(hy.canonical(j));

  auto covered = complete_to_correspondence(hx, hy, rel, std::span<const FnVec>(left_net),
                                            std::span<const FnVec>(right_net));
  REQUIRE(covered.beta_left == 0.0);
  REQUIRE(covered.beta_right == 0.0);
  REQUIRE(covered.rel.size() == rel.size());

  Rng rng(3);
  FnVec stray = random_extremal(rng, a);
  left_net.push_back(stray);
  auto stretched = complete_to_correspondence(hx, hy, rel, std::span<const FnVec>(left_net),
                                              std::span<const FnVec>(right_net));
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : rel.pairs()) nearest = std::min(nearest, hx.distance(stray, x));
  REQUIRE(stretched.beta_left == Catch::Approx(nearest).margin(1e-12));
  REQUIRE(stretched.rel.recompute() <=
          rel.distortion() + 2 * std::max(stretched.beta_left, stretched.beta_right) + 1e-9);

  REQUIRE_THROWS_AS(complete_to_correspondence(hx, hy, rel, std::span<const FnVec>(),
                                               std::span<const FnVec>(right_net)),
                    std::invalid_argument);
  Relation<HullSpace, HullSpace> empty(hx, hy);
  REQUIRE_THROWS_AS(complete_to_correspondence(hx, hy, empty, std::span<const FnVec>(left_net),
                                               std::span<const FnVec>(right_net)),
                    std::invalid_argument);
}

TEST_CASE("the tree-route certificate reproduces the worked pair") {
  StabilityCertificate cert = stability_certificate(intro_a(), intro_b(), 0.25);
  REQUIRE(cert.theorem == "3.2");
  REQUIRE(cert.dis0 == 2.0);
  REQUIRE(cert.alpha == 1.0);
  REQUIRE(cert.mesh == 0.25);
  REQUIRE(cert.dis_final == Catch::Approx(2.0).margin(1e-9));
  REQUIRE(cert.pass);
  REQUIRE(cert.optimal);
  REQUIRE(cert.bound == Catch::Approx(cert.dis0 + kDefaultTol).margin(1e-15));
  REQUIRE(cert.bound_chain.size() == 4);
  REQUIRE(cert.bound_chain.front().find("dis(R0) = 2") != std::string::npos);
}

TEST_CASE("the hull-route certificate honors the doubled bound") {
  StabilityCertificate cert = stability_certificate(rect_a(8), rect_b(8), 0.5);
  REQUIRE(cert.theorem == "3.1");
  double exact = min_distortion_correspondence(rect_a(8), rect_b(8)).dis;
  REQUIRE(cert.dis0 == exact);
  REQUIRE(cert.dis_final <= 2 * cert.dis0 + 2 * 0.5 + 1e-9);
  REQUIRE(cert.pass);
  REQUIRE(cert.bound == Catch::Approx(2 * cert.dis0 + 1.0 + kDefaultTol).margin(1e-15));

  StabilityCertificate self = stability_certificate(rect_a(8), rect_a(8), 0.5);
  REQUIRE(self.theorem == "3.1");
  REQUIRE(self.dis0 == 0.0);
  REQUIRE(self.dis_final <= 2 * 0.5 + 1e-7);
  REQUIRE(self.pass);
}

TEST_CASE("mixed pairs fall back to the hull route") {
  StabilityCertificate cert = stability_certificate(intro_a(), rect_a(8), 1.0);
  REQUIRE(cert.theorem == "3.1");
  REQUIRE(cert.pass);
}

TEST_CASE("certificate input guards and budget accounting") {
  REQUIRE_THROWS_AS(stability_certificate(intro_a(), intro_b(), 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(stability_certificate(intro_a(), intro_b(), -1.0), std::invalid_argument);

  StabilityCertificate limited = stability_certificate(intro_a_plus(), intro_b_plus(), 0.5,
                                                       kDefaultTol, 1);
  REQUIRE_FALSE(limited.optimal);
  REQUIRE(limited.dis0 >= 4.0 - 1e-12);
  REQUIRE(limited.bound_chain.front().find("budget-limited") != std::string::npos);
}

TEST_CASE("five hundred randomized extension steps never raise distortion") {
  std::size_t steps = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Rng rng(seed);
    FiniteMetricSpace a = random_metric(rng, 3 + rng.index(3), 3.0, "a");
    FiniteMetricSpace b = random_metric(rng, 3 + rng.index(3), 3.0, "b");
    HullSpace hx(a), hy(b);
    ExtensionState<HullSpace, HullSpace> st(hx, hy, canonical_relation(hx, hy, a, b));
    const double dis0 = st.rel().distortion();
    for (int k = 0; k < 20; ++k, ++steps) {
      FnVec xq = random_extremal(rng, a);
      double alpha = st.alpha();
      auto [x0, y0] = extend_step_injective(st, xq);
      REQUIRE(hx.distance(xq, x0) <= alpha + 1e-9);
      REQUIRE(st.rel().distortion() <= dis0 + 1e-7);
    }
  }
  REQUIRE(steps == 500);
}
