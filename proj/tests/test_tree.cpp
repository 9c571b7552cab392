#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "tspan/fixtures.hpp"
#include "tspan/random_gen.hpp"
#include "tspan/tree.hpp"

using namespace tspan;

namespace {

// The running example tree: four leaves joined through two interior nodes,
// every edge of length 2.
struct HTree {
  MetricTree t;
  std::size_t a1, a2, a3, a4, v1, v2;
  std::size_t e_a1, e_a3;  // edges a1-v1 and v2-a3

  HTree() {
    a1 = t.add_node("a1");
    a2 = t.add_node("a2");
    a3 = t.add_node("a3");
    a4 = t.add_node("a4");
    v1 = t.add_node("v1");
    v2 = t.add_node("v2");
    e_a1 = t.add_edge(a1, v1, 2);
    t.add_edge(a2, v1, 2);
    t.add_edge(v1, v2, 2);
    e_a3 = t.add_edge(v2, a3, 2);
    t.add_edge(v2, a4, 2);
  }
};

bool multiset_close(std::vector<double> a, std::vector<double> b, double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("tree construction guards") {
  MetricTree t;
  std::size_t a = t.add_node("a");
  std::size_t b = t.add_node("b");
  REQUIRE_THROWS_AS(t.add_edge(a, a, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(t.add_edge(a, b, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(t.add_edge(a, b, -1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(t.add_edge(a, 7, 1.0), std::invalid_argument);
  REQUIRE_FALSE(t.is_valid());  // two components
  t.add_edge(a, b, 2.0);
  REQUIRE(t.is_valid());
  REQUIRE(t.total_length() == 2.0);
  REQUIRE(t.find_label("a") == a);
  REQUIRE(t.find_label("zz") == kNoIndex);
}

TEST_CASE("split_edge reuses the id for the first half and preserves distances") {
  MetricTree t;
  std::size_t p = t.add_node("p");
  std::size_t q = t.add_node("q");
  std::size_t e = t.add_edge(p, q, 2.0);
  REQUIRE(t.node_distance(p, q) == 2.0);

  std::size_t mid = t.split_edge(e, 0.5);
  REQUIRE(t.node_count() == 3);
  REQUIRE(t.edge_count() == 2);
  REQUIRE(t.edge(e).u == p);
  REQUIRE(t.edge(e).v == mid);
  REQUIRE(t.edge(e).length == 0.5);
  REQUIRE(t.edge(1).length == 1.5);
  REQUIRE(t.node_distance(p, q) == 2.0);
  REQUIRE(t.node_distance(p, mid) == 0.5);
  REQUIRE(t.degree(mid) == 2);
}

TEST_CASE("point distances cover node, edge, and same-edge cases") {
  HTree h;
  const MetricTree& t = h.t;
  REQUIRE(t.node_distance(h.a1, h.a3) == 6.0);
  REQUIRE(t.node_distance(h.a1, h.a2) == 4.0);
  REQUIRE(t.node_distance(h.v1, h.v2) == 2.0);

  TreePoint p = t.on_edge(h.e_a1, 0.5);   // 0.5 from a1, 1.5 from v1
  TreePoint q = t.on_edge(h.e_a3, 1.5);   // 1.5 from v2, 0.5 from a3
  REQUIRE(t.distance(p, q) == Catch::Approx(1.5 + 2.0 + 1.5));
  REQUIRE(t.distance(p, t.at(h.a1)) == Catch::Approx(0.5));
  REQUIRE(t.distance(t.at(h.a1), q) == Catch::Approx(5.5));
  REQUIRE(t.distance(p, p) == 0.0);

  TreePoint p2 = t.on_edge(h.e_a1, 1.7);
  REQUIRE(t.distance(p, p2) == Catch::Approx(1.2));  // same edge

  // Endpoint offsets normalize to nodes.
  REQUIRE(t.on_edge(h.e_a1, 0.0).at_node());
  REQUIRE(t.on_edge(h.e_a1, 2.0).node == h.v1);
  REQUIRE_THROWS_AS(t.on_edge(h.e_a1, 2.5), std::invalid_argument);
  REQUIRE(same_point(t, t.on_edge(h.e_a1, 2.0), t.at(h.v1)));
}

TEST_CASE("point_along walks geodesics across interior nodes") {
  HTree h;
  const MetricTree& t = h.t;
  TreePoint from = t.at(h.a1);
  TreePoint to = t.at(h.a3);

  TreePoint m = t.point_along(from, to, 3.0);
  REQUIRE(t.distance(from, m) == Catch::Approx(3.0));
  REQUIRE(t.distance(m, to) == Catch::Approx(3.0));
  REQUIRE_FALSE(m.at_node());

  REQUIRE(same_point(t, t.point_along(from, to, 0.0), from));
  REQUIRE(same_point(t, t.point_along(from, to, 99.0), to));  // clamped
  REQUIRE(same_point(t, t.point_along(from, to, 2.0), t.at(h.v1)));

  // Starting from an edge-interior point.
  TreePoint p = t.on_edge(h.e_a1, 0.5);
  TreePoint r = t.point_along(p, to, 4.0);
  REQUIRE(t.distance(p, r) == Catch::Approx(4.0));
  REQUIRE(t.distance(p, to) == Catch::Approx(t.distance(p, r) + t.distance(r, to)));
}

TEST_CASE("route tables refresh after mutation") {
  MetricTree t;
  std::size_t p = t.add_node("p");
  std::size_t q = t.add_node("q");
  std::size_t e = t.add_edge(p, q, 2.0);
  REQUIRE(t.node_distance(p, q) == 2.0);
  std::size_t mid = t.split_edge(e, 1.2);
  REQUIRE(t.node_distance(p, mid) == Catch::Approx(1.2));
  REQUIRE(t.node_distance(mid, q) == Catch::Approx(0.8));
  std::size_t r = t.add_node("r");
  t.add_edge(mid, r, 5.0);
  REQUIRE(t.node_distance(p, r) == Catch::Approx(6.2));
}

TEST_CASE("leaves, labeled nodes, and degree bookkeeping") {
  HTree h;
  auto lv = h.t.leaves();
  std::sort(lv.begin(), lv.end());
  REQUIRE(lv == std::vector<std::size_t>{h.a1, h.a2, h.a3, h.a4});
  REQUIRE(h.t.degree(h.v1) == 3);
  REQUIRE(h.t.labeled_nodes().size() == 6);
  REQUIRE(multiset_close(h.t.edge_length_multiset(), {2, 2, 2, 2, 2}));
}

TEST_CASE("four-point check localizes the worst violating quadruple") {
  REQUIRE(four_point_check(intro_a()).ok);
  REQUIRE(four_point_check(intro_b()).ok);
  FourPointReport bad = four_point_check(rect_a(8));
  REQUIRE_FALSE(bad.ok);
  REQUIRE(bad.gap == Catch::Approx(8.0));
  REQUIRE(bad.i == 0);
  REQUIRE(bad.l == 3);
}

TEST_CASE("reconstruction reproduces the worked trees") {
  MetricTree ta = tree_from_metric(intro_a());
  REQUIRE(ta.node_count() == 6);
  REQUIRE(ta.edge_count() == 5);
  REQUIRE(multiset_close(ta.edge_length_multiset(), {2, 2, 2, 2, 2}));
  REQUIRE(labeled_space(ta) == intro_a());

  MetricTree tb = tree_from_metric(intro_b());
  REQUIRE(tb.node_count() == 6);
  REQUIRE(multiset_close(tb.edge_length_multiset(), {1, 1, 1, 1, 6}));
  REQUIRE(labeled_space(tb) == intro_b());

  MetricTree trb = tree_from_metric(rect_b(8));
  REQUIRE(multiset_close(trb.edge_length_multiset(), {1, 1, 1, 1, 8}));

  MetricTree t2 = tree_from_metric(seg2());
  REQUIRE(t2.node_count() == 2);
  REQUIRE(t2.edge_count() == 1);
  REQUIRE(labeled_space(t2) == seg2());
}

TEST_CASE("reconstruction labels interior points when they carry names") {
  MetricTree t = tree_from_metric(intro_a_plus());
  REQUIRE(t.node_count() == 6);
  REQUIRE(t.edge_count() == 5);
  std::size_t v1 = t.find_label("v1");
  std::size_t v2 = t.find_label("v2");
  REQUIRE(v1 != kNoIndex);
  REQUIRE(v2 != kNoIndex);
  REQUIRE(t.degree(v1) == 3);
  REQUIRE(t.degree(v2) == 3);
  REQUIRE(t.node_distance(v1, v2) == Catch::Approx(2.0));
  // Same labeled metric, independent of node insertion order.
  FiniteMetricSpace got = labeled_space(t), want = intro_a_plus();
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    for (std::size_t j = 0; j < want.size(); ++j)
      REQUIRE(got.distance(got.index_of(want.label(i)), got.index_of(want.label(j))) ==
              want.distance(i, j));
}

TEST_CASE("reconstruction rejects bad inputs") {
  REQUIRE_THROWS_AS(tree_from_metric(FiniteMetricSpace{}), std::invalid_argument);
  REQUIRE_THROWS_WITH(tree_from_metric(rect_a(8)),
                      Catch::Matchers::ContainsSubstring("four-point"));
  auto dup = FiniteMetricSpace::from_matrix({"p", "q", "r"},
                                            {{0, 0, 3}, {0, 0, 3}, {3, 3, 0}});
  REQUIRE_THROWS_WITH(tree_from_metric(dup), Catch::Matchers::ContainsSubstring("coincide"));

  MetricTree single = tree_from_metric(
      FiniteMetricSpace::from_matrix({"only"}, {{0}}));
  REQUIRE(single.node_count() == 1);
}

TEST_CASE("random trees round-trip through their leaf metric") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(seed);
    MetricTree t = random_tree(rng, 3 + rng.index(5));  // 3..7 leaves
    FiniteMetricSpace leaf_metric = labeled_space(t);
    REQUIRE(is_four_point(leaf_metric, 1e-7));

    MetricTree back = tree_from_metric(leaf_metric, 1e-7);
    FiniteMetricSpace again = labeled_space(back);
    REQUIRE(again.labels() == leaf_metric.labels());
    for (std::size_t i = 0; i < again.size(); ++i)
      for (std::size_t j = 0; j < again.size(); ++j)
        REQUIRE(again.distance(i, j) ==
                Catch::Approx(leaf_metric.distance(i, j)).margin(1e-9));

    MetricTree canon = suppress_degree2(t);
    REQUIRE(back.node_count() == canon.node_count());
    REQUIRE(back.edge_count() == canon.edge_count());
    REQUIRE(multiset_close(back.edge_length_multiset(), canon.edge_length_multiset(), 1e-9));
  }
}

TEST_CASE("degree-two suppression merges chains but keeps labeled nodes") {
  MetricTree t;
  std::size_t a = t.add_node("a");
  std::size_t m1 = t.add_node();     // unlabeled passthrough
  std::size_t m2 = t.add_node("m");  // labeled, must stay
  std::size_t b = t.add_node("b");
  t.add_edge(a, m1, 1.0);
  t.add_edge(m1, m2, 2.0);
  t.add_edge(m2, b, 3.0);

  MetricTree s = suppress_degree2(t);
  REQUIRE(s.node_count() == 3);
  REQUIRE(s.edge_count() == 2);
  REQUIRE(multiset_close(s.edge_length_multiset(), {3, 3}));
  REQUIRE(s.node_distance(s.find_label("a"), s.find_label("b")) == Catch::Approx(6.0));
  REQUIRE(s.find_label("m") != kNoIndex);
}

TEST_CASE("tree nets cover the tree at the requested scale") {
  MetricTree seg = tree_from_metric(seg2());
  REQUIRE(tree_net(seg, 0.5).size() == 3);
  REQUIRE(tree_net(seg, 2.0).size() == 2);

  MetricTree tb = tree_from_metric(intro_b());
  REQUIRE(tree_net(tb, 3.0).size() == 6);  // nodes only

  HTree h;
  for (double mesh : {0.25, 0.7, 2.0}) {
    auto net = tree_net(h.t, mesh);
    auto fine = tree_net(h.t, mesh / 8);
    for (const auto& q : fine) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : net) best = std::min(best, h.t.distance(p, q));
      REQUIRE(best <= mesh + 1e-9);
    }
  }
  REQUIRE_THROWS_AS(tree_net(h.t, 0.0), std::invalid_argument);
}

TEST_CASE("tree ball intersection walks into every ball") {
  HTree h;
  const MetricTree& t = h.t;
  std::vector<TreePoint> centers{t.at(h.a1), t.at(h.a3)};
  std::vector<double> radii{3, 3};
  TreePoint m = ball_intersection(t, centers, radii);
  REQUIRE(t.distance(m, centers[0]) == Catch::Approx(3.0));
  REQUIRE(t.distance(m, centers[1]) == Catch::Approx(3.0));

  std::vector<TreePoint> three{t.at(h.a1), t.at(h.a3), t.at(h.a4)};
  std::vector<double> r3{3, 3, 3};
  TreePoint c = ball_intersection(t, three, r3);
  for (std::size_t i = 0; i < three.size(); ++i)
    REQUIRE(t.distance(c, three[i]) <= 3.0 + 1e-9);

  std::vector<double> tight{1, 1};
  REQUIRE_THROWS_AS(ball_intersection(t, centers, tight), ball_error);
  std::vector<double> neg{-1, 9};
  REQUIRE_THROWS_AS(ball_intersection(t, centers, neg), std::invalid_argument);
}

TEST_CASE("random compatible tree balls always admit a common point") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Rng rng(seed);
    MetricTree t = random_tree(rng, 3 + rng.index(5));
    auto net = tree_net(t, 0.5);
    std::vector<TreePoint> centers;
    for (int i = 0; i < 4; ++i) centers.push_back(net[rng.index(net.size())]);
    std::vector<double> radii(centers.size(), 0.0);
    for (std::size_t i = 0; i < centers.size(); ++i) {
      for (std::size_t j = 0; j < centers.size(); ++j)
        radii[i] = std::max(radii[i], t.distance(centers[i], centers[j]) / 2);
      radii[i] += 0.05;
    }
    TreePoint p = ball_intersection(t, centers, radii);
    for (std::size_t i = 0; i < centers.size(); ++i)
      REQUIRE(t.distance(p, centers[i]) <= radii[i] + 1e-9);
  }
}

TEST_CASE("spanned subtrees are geodesic unions with matching distances") {
  HTree h;
  const MetricTree& t = h.t;

  SpannedSubtree path = spanned_subtree(t, {t.at(h.a1), t.at(h.a3)});
  REQUIRE(path.tree.node_count() == 4);
  REQUIRE(path.tree.edge_count() == 3);
  REQUIRE(path.tree.total_length() == Catch::Approx(6.0));
  REQUIRE(path.tree.distance(path.images[0], path.images[1]) == Catch::Approx(6.0));

  SpannedSubtree full = spanned_subtree(
      t, {t.at(h.a1), t.at(h.a2), t.at(h.a3), t.at(h.a4)});
  REQUIRE(full.tree.node_count() == 6);
  REQUIRE(full.tree.edge_count() == 5);
  REQUIRE(full.tree.total_length() == Catch::Approx(10.0));

  SpannedSubtree partial = spanned_subtree(t, {t.on_edge(h.e_a1, 1.0), t.at(h.a2)});
  REQUIRE(partial.tree.total_length() == Catch::Approx(3.0));
  REQUIRE(partial.tree.node_count() == 3);

  REQUIRE_THROWS_AS(spanned_subtree(t, {}), std::invalid_argument);
}

TEST_CASE("spanned subtrees of random trees preserve pairwise distances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    MetricTree t = random_tree(rng, 4 + rng.index(4));
    auto net = tree_net(t, 0.4);
    std::vector<TreePoint> a;
    for (int i = 0; i < 5; ++i) a.push_back(net[rng.index(net.size())]);

    SpannedSubtree s = spanned_subtree(t, a);
    REQUIRE(s.tree.total_length() <= t.total_length() + 1e-9);
    REQUIRE(s.images.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j)
        REQUIRE(s.tree.distance(s.images[i], s.images[j]) ==
                Catch::Approx(t.distance(a[i], a[j])).margin(1e-9));

    // Every leaf of the result must be (the image of) a requested point.
    for (std::size_t leaf : s.tree.leaves()) {
      bool hit = false;
      for (const auto& img : s.images)
        hit = hit || (img.at_node() && img.node == leaf);
      REQUIRE(hit);
    }
  }
}

TEST_CASE("describe names nodes and edge offsets") {
  HTree h;
  REQUIRE(h.t.describe(h.t.at(h.a1)) == "a1");
  REQUIRE(h.t.describe(h.t.on_edge(h.e_a1, 0.5)) == "a1--v1@0.5");
}
