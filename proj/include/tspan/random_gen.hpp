#pragma once

// Deterministic random instance generators: metric spaces, weighted trees,
// admissible/extremal functions.  All randomness flows through Rng, which
// derives doubles from raw mt19937_64 output so that streams are identical
// across standard-library implementations.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tspan/metric_space.hpp"
#include "tspan/tight_span.hpp"
#include "tspan/tree.hpp"

namespace tspan {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1); 53 random mantissa bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  // Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("index(0)");
    return static_cast<std::size_t>(eng_() % n);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Random metric on n points: l-infinity distances of random points in a cube
// of side `scale` (dimension 2-4), each pair then nudged inside its triangle
// slack.  Resamples until the result validates and all distances clear a
// minimum separation.
inline FiniteMetricSpace random_metric(Rng& rng, std::size_t n, double scale = 4.0,
                                       const std::string& prefix = "p") {
  if (n == 0) throw std::invalid_argument("random_metric: n must be positive");
  const double kMinSep = 0.05;
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::size_t dim = 2 + rng.index(3);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts)
      for (auto& c : p) c = rng.uniform(0.0, scale);

    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double m = 0;
        for (std::size_t k = 0; k < dim; ++k) m = std::max(m, std::abs(pts[i][k] - pts[j][k]));
        d[i][j] = d[j][i] = m;
      }

    // Perturb each distance within 45% of its tightest triangle slack.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double up = std::numeric_limits<double>::infinity();
        double down = d[i][j];
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          up = std::min(up, d[i][k] + d[k][j] - d[i][j]);
          down = std::min(down, d[i][j] - std::abs(d[i][k] - d[k][j]));
        }
        if (!std::isfinite(up)) up = d[i][j];
        double delta = rng.uniform(-0.45 * std::max(down, 0.0), 0.45 * std::max(up, 0.0));
        d[i][j] = d[j][i] = d[i][j] + delta;
      }

    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        if (d[i][j] < kMinSep) ok = false;
    if (!ok) continue;
    if (!validate_metric(d).pass()) continue;

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i + 1));
    return FiniteMetricSpace::from_matrix(std::move(labels), d);
  }
  throw std::runtime_error("random_metric: could not produce a valid metric");
}

// Random weighted tree with n labeled leaves: grow by splitting a random
// existing edge and hanging a fresh leaf off the split point.
inline MetricTree random_tree(Rng& rng, std::size_t n_leaves, double min_len = 0.1,
                              double max_len = 10.0, const std::string& prefix = "x") {
  if (n_leaves < 2) throw std::invalid_argument("random_tree: need at least 2 leaves");
  MetricTree t;
  std::size_t a = t.add_node();
  std::size_t b = t.add_node();
  t.set_label(a, prefix + "1");
  t.set_label(b, prefix + "2");
  t.add_edge(a, b, rng.log_uniform(min_len, max_len));
  for (std::size_t leaf = 3; leaf <= n_leaves; ++leaf) {
    std::size_t e = rng.index(t.edge_count());
    double frac = rng.uniform(0.15, 0.85);
    std::size_t mid = t.split_edge(e, frac * t.edge(e).length);
    std::size_t nn = t.add_node();
    t.set_label(nn, prefix + std::to_string(leaf));
    t.add_edge(mid, nn, rng.log_uniform(min_len, max_len));
  }
  return t;
}

// Additive noise on every edge length, clamped away from zero; the leaf
// metric of the result stays exactly tree-realizable.
inline MetricTree perturb_edge_lengths(const MetricTree& t, Rng& rng, double eta) {
  if (eta < 0) throw std::invalid_argument("perturb_edge_lengths: eta must be >= 0");
  MetricTree out;
  for (std::size_t v = 0; v < t.node_count(); ++v) {
    out.add_node();
    if (t.labeled(v)) out.set_label(v, t.label(v));
  }
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    const auto& ed = t.edge(e);
    double len = std::max(0.05, ed.length + rng.uniform(-eta, eta));
    out.add_edge(ed.u, ed.v, len);
  }
  return out;
}

// Random function satisfying f(x) + f(y) >= d(x, y): pointwise max of a
// random nonnegative function with its conjugate.
inline FnVec random_admissible(Rng& rng, const FiniteMetricSpace& x) {
  FnVec g(x.size());
  double diam_x = diameter(x);
  for (auto& v : g) v = rng.uniform(0.0, diam_x);
  FnVec gs = star(x, g);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::max(g[i], gs[i]);
  return g;
}

// Random extremal function; sometimes a canonical distance row.
inline FnVec random_extremal(Rng& rng, const FiniteMetricSpace& x) {
  if (rng.uniform() < 0.25) return canonical_embed(x, rng.index(x.size()));
  return retract(x, random_admissible(rng, x));
}

// Random permutation of {0, ..., n-1}.
inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);
  return perm;
}

}  // namespace tspan
