#include <catch2/catch_amalgamated.hpp>

#include "tspan/fixtures.hpp"
#include "tspan/metric_space.hpp"
#include "tspan/random_gen.hpp"

using namespace tspan;

TEST_CASE("validate_metric reports each axiom violation with a witness") {
  SECTION("valid") {
    auto r = validate_metric({{0, 1, 2}, {1, 0, 1.5}, {2, 1.5, 0}});
    REQUIRE(r.pass());
    REQUIRE(r.summary() == "ok: metric axioms hold");
  }
  SECTION("non-square") {
    auto r = validate_metric({{0, 1}, {1, 0, 2}});
    REQUIRE_FALSE(r.pass());
    REQUIRE_FALSE(r.square);
    REQUIRE(r.bad_row == 1);
  }
  SECTION("nonzero diagonal") {
    auto r = validate_metric({{0, 1}, {1, 0.5}});
    REQUIRE_FALSE(r.diagonal_zero);
    REQUIRE(r.diagonal_at == 1);
  }
  SECTION("asymmetry") {
    auto r = validate_metric({{0, 3}, {5, 0}});
    REQUIRE_FALSE(r.symmetric);
    REQUIRE(r.asymmetry_at == std::array<std::size_t, 2>{0, 1});
  }
  SECTION("negative entry") {
    auto r = validate_metric({{0, -1}, {-1, 0}});
    REQUIRE_FALSE(r.nonnegative);
  }
  SECTION("triangle violation") {
    auto r = validate_metric({{0, 1, 9}, {1, 0, 1}, {9, 1, 0}});
    REQUIRE_FALSE(r.triangle);
    REQUIRE(r.triangle_excess == Catch::Approx(7.0));
  }
  SECTION("tolerance absorbs tiny asymmetry") {
    auto r = validate_metric({{0, 1.0}, {1.0 + 1e-12, 0}});
    REQUIRE(r.pass());
  }
}

TEST_CASE("from_matrix validates labels and symmetrizes within tolerance") {
  REQUIRE_THROWS_AS(FiniteMetricSpace::from_matrix({"p", "p"}, {{0, 1}, {1, 0}}),
                    validation_error);
  REQUIRE_THROWS_AS(FiniteMetricSpace::from_matrix({"p", ""}, {{0, 1}, {1, 0}}),
                    validation_error);
  REQUIRE_THROWS_AS(FiniteMetricSpace::from_matrix({"p"}, {{0, 1}, {1, 0}}), validation_error);
  REQUIRE_THROWS_AS(FiniteMetricSpace::from_matrix({"p", "q"}, {{0, 1, 2}, {1, 0, 1}}),
                    validation_error);

  auto m = FiniteMetricSpace::from_matrix({"p", "q"}, {{0, 1.0}, {1.0 + 4e-10, 0}});
  REQUIRE(m.distance(0, 1) == Catch::Approx(1.0 + 2e-10).margin(1e-15));
  REQUIRE(m.distance(0, 1) == m.distance(1, 0));
  REQUIRE(m.distance(1, 1) == 0.0);
}

TEST_CASE("accessors expose labels, rows, and the full matrix") {
  FiniteMetricSpace a = intro_a();
  REQUIRE(a.size() == 4);
  REQUIRE(a.labels() == std::vector<std::string>{"a1", "a2", "a3", "a4"});
  REQUIRE(a.index_of("a3") == 2);
  REQUIRE_THROWS_AS(a.index_of("nope"), std::invalid_argument);
  REQUIRE(a.row(0) == std::vector<double>{0, 4, 6, 6});
  REQUIRE(a.matrix()[1] == std::vector<double>{4, 0, 6, 6});
  REQUIRE(a == intro_a());
  REQUIRE_FALSE(a == intro_b());
}

TEST_CASE("four-point spaces and their distances match the frozen tables") {
  FiniteMetricSpace a = intro_a();
  FiniteMetricSpace b = intro_b();
  REQUIRE(a.distance(0, 1) == 4.0);
  REQUIRE(a.distance(0, 2) == 6.0);
  REQUIRE(a.distance(2, 3) == 4.0);
  REQUIRE(b.distance(0, 1) == 2.0);
  REQUIRE(b.distance(0, 2) == 8.0);
  REQUIRE(b.distance(2, 3) == 2.0);
  REQUIRE(diameter(a) == 6.0);
  REQUIRE(diameter(b) == 8.0);
  REQUIRE(is_four_point(a));
  REQUIRE(is_four_point(b));

  // Extended six-point versions restrict to the originals.
  FiniteMetricSpace ap = intro_a_plus();
  FiniteMetricSpace bp = intro_b_plus();
  REQUIRE(ap.size() == 6);
  REQUIRE(bp.size() == 6);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      REQUIRE(ap.distance(i, j) == a.distance(i, j));
      REQUIRE(bp.distance(i, j) == b.distance(i, j));
    }
  REQUIRE(is_four_point(ap));
  REQUIRE(is_four_point(bp));
}

TEST_CASE("rectangle families: one violates the four-point condition, one does not") {
  FiniteMetricSpace ra = rect_a(16);
  REQUIRE(ra.distance(0, 1) == 4.0);
  REQUIRE(ra.distance(0, 2) == 16.0);
  REQUIRE(ra.distance(0, 3) == 20.0);
  REQUIRE_FALSE(is_four_point(ra));

  FiniteMetricSpace rb = rect_b(16);
  REQUIRE(rb.distance(0, 1) == 2.0);
  REQUIRE(rb.distance(0, 2) == 18.0);
  REQUIRE(is_four_point(rb));

  REQUIRE_THROWS_AS(rect_a(4), std::invalid_argument);
  REQUIRE_THROWS_AS(rect_b(0), std::invalid_argument);
}

TEST_CASE("zig-zag spaces have 2n+1 points under the l1 metric") {
  REQUIRE(zig_zag(1).size() == 3);
  REQUIRE(zig_zag(2).size() == 5);
  REQUIRE(zig_zag(3).size() == 7);
  FiniteMetricSpace z1 = zig_zag(1);
  // Two bottom corners 8 apart with the peak at (4,4): every pair is 8 apart.
  REQUIRE(diameter(z1) == 8.0);
  REQUIRE(z1.distance(0, 1) == 8.0);
  REQUIRE(z1.distance(1, 2) == 8.0);
  REQUIRE(z1.distance(0, 2) == 8.0);
  REQUIRE(diameter(zig_zag(2)) == 16.0);
  REQUIRE(diameter(zig_zag(3)) == 24.0);
}

TEST_CASE("spans_check certifies the distance-reproduction identity") {
  FiniteMetricSpace a = intro_a();
  PointSubset all{0, 1, 2, 3};
  REQUIRE(spans_check(a, all, SpanMode::Spans).ok);
  REQUIRE(spans_check(a, all, SpanMode::StrictlySpans).ok);

  SpanCheck bad = spans_check(a, {0, 1}, SpanMode::Spans);
  REQUIRE_FALSE(bad.ok);
  REQUIRE(bad.x == 0);
  REQUIRE(bad.x_prime == 2);
  REQUIRE(bad.gap == Catch::Approx(8.0));

  REQUIRE_THROWS_AS(spans_check(a, {}, SpanMode::Spans), std::invalid_argument);
  REQUIRE_THROWS_AS(spans_check(a, {0, 0}, SpanMode::Spans), std::invalid_argument);
  REQUIRE_THROWS_AS(spans_check(a, {9}, SpanMode::Spans), std::invalid_argument);
}

TEST_CASE("covering radius and net predicate") {
  FiniteMetricSpace a = intro_a();
  REQUIRE(covering_radius(a, {0}) == 6.0);
  REQUIRE(covering_radius(a, {0, 2}) == 4.0);
  REQUIRE(is_net(a, {0}, 6.0));
  REQUIRE_FALSE(is_net(a, {0}, 5.99));
  REQUIRE(is_net(a, {0, 1, 2, 3}, 0.0));
  REQUIRE_THROWS_AS(is_net(a, {0}, -1.0), std::invalid_argument);
}

TEST_CASE("sampled views materialize into equivalent labeled spaces") {
  FiniteMetricSpace a = intro_a();
  SampledSpace<FiniteMetricSpace> view(a, {2, 0});
  REQUIRE(view.size() == 2);
  REQUIRE(view.distance(0, 1) == 6.0);
  REQUIRE(view.point(1) == 0);

  FiniteMetricSpace mat = materialize(view, "s");
  REQUIRE(mat.size() == 2);
  REQUIRE(mat.label(0) == "s0");
  REQUIRE(mat.distance(0, 1) == 6.0);
}

TEST_CASE("random metrics satisfy the axioms across seeds and sizes") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    std::size_t n = 3 + rng.index(6);  // 3..8
    FiniteMetricSpace m = random_metric(rng, n);
    REQUIRE(m.size() == n);
    REQUIRE(validate_metric(m.matrix()).pass());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) REQUIRE(m.distance(i, j) >= 0.05);
  }
}

TEST_CASE("random number stream is reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    double u = a.uniform();
    REQUIRE(u == b.uniform());
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  Rng c(7);
  for (int i = 0; i < 100; ++i) {
    double v = c.log_uniform(0.1, 10.0);
    REQUIRE(v >= 0.1);
    REQUIRE(v <= 10.0);
  }
  REQUIRE_THROWS_AS(c.index(0), std::invalid_argument);
}
