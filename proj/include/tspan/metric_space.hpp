#pragma once

// Finite metric spaces: validated distance matrices, the axioms as checks,
// diameter / four-point condition, spanning subsets and nets.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace tspan {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

// Anything with an indexed point set and a distance on index pairs.
template <typename S>
concept FiniteSpace = requires(const S& s, std::size_t i, std::size_t j) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.distance(i, j) } -> std::convertible_to<double>;
};

using PointSubset = std::vector<std::size_t>;

namespace detail {
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace detail

// ---------------------------------------------------------------- validation

struct MetricValidationReport {
  std::size_t n = 0;
  bool square = true;
  bool labels_ok = true;
  bool diagonal_zero = true;
  bool symmetric = true;
  bool nonnegative = true;
  bool triangle = true;

  // First offending indices; meaningful only when the matching flag is false.
  std::size_t bad_row = kNoIndex;               // row with wrong width
  std::string label_issue;                      // duplicate/empty label text
  std::size_t diagonal_at = kNoIndex;           // i with d(i,i) != 0
  std::array<std::size_t, 2> asymmetry_at{kNoIndex, kNoIndex};
  std::array<std::size_t, 2> negative_at{kNoIndex, kNoIndex};
  // d(i,j) > d(i,k) + d(k,j): stored as {i, j, k}
  std::array<std::size_t, 3> triangle_at{kNoIndex, kNoIndex, kNoIndex};
  double triangle_excess = 0.0;

  bool pass() const {
    return square && labels_ok && diagonal_zero && symmetric && nonnegative && triangle;
  }

  std::string summary() const {
    if (pass()) return "ok: metric axioms hold";
    std::string s = "invalid metric:";
    if (!square) s += " matrix not square (row " + std::to_string(bad_row) + ")";
    if (!labels_ok) s += " labels: " + label_issue;
    if (!diagonal_zero) s += " nonzero diagonal at " + std::to_string(diagonal_at);
    if (!symmetric)
      s += " asymmetric at (" + std::to_string(asymmetry_at[0]) + "," +
           std::to_string(asymmetry_at[1]) + ")";
    if (!nonnegative)
      s += " negative entry at (" + std::to_string(negative_at[0]) + "," +
           std::to_string(negative_at[1]) + ")";
    if (!triangle)
      s += " triangle violation at (" + std::to_string(triangle_at[0]) + "," +
           std::to_string(triangle_at[1]) + "," + std::to_string(triangle_at[2]) +
           "), excess " + detail::fmt_double(triangle_excess);
    return s;
  }
};

// Checks the metric axioms on a raw matrix, each within `tol`.
inline MetricValidationReport validate_metric(const std::vector<std::vector<double>>& m,
                                              double tol = kDefaultTol) {
  MetricValidationReport r;
  r.n = m.size();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size()) {
      r.square = false;
      r.bad_row = i;
      return r;  // nothing else is well defined
    }
  }
  for (std::size_t i = 0; i < r.n && r.diagonal_zero; ++i) {
    if (std::abs(m[i][i]) > tol) {
      r.diagonal_zero = false;
      r.diagonal_at = i;
    }
  }
  for (std::size_t i = 0; i < r.n && r.symmetric; ++i)
    for (std::size_t j = i + 1; j < r.n; ++j)
      if (std::abs(m[i][j] - m[j][i]) > tol) {
        r.symmetric = false;
        r.asymmetry_at = {i, j};
        break;
      }
  for (std::size_t i = 0; i < r.n && r.nonnegative; ++i)
    for (std::size_t j = 0; j < r.n; ++j)
      if (m[i][j] < -tol) {
        r.nonnegative = false;
        r.negative_at = {i, j};
        break;
      }
  for (std::size_t i = 0; i < r.n && r.triangle; ++i)
    for (std::size_t j = 0; j < r.n && r.triangle; ++j)
      for (std::size_t k = 0; k < r.n; ++k) {
        double excess = m[i][j] - (m[i][k] + m[k][j]);
        if (excess > tol) {
          r.triangle = false;
          r.triangle_at = {i, j, k};
          r.triangle_excess = excess;
          break;
        }
      }
  return r;
}

struct validation_error : std::runtime_error {
  MetricValidationReport report;
  explicit validation_error(MetricValidationReport rep)
      : std::runtime_error(rep.summary()), report(std::move(rep)) {}
};

// ---------------------------------------------------------- FiniteMetricSpace

// Immutable labeled metric space. Construction validates the axioms within
// `tol`, then normalizes: the diagonal is zeroed and near-symmetric entries
// are averaged. No repair beyond that is attempted.
class FiniteMetricSpace {
 public:
  using point_type = std::size_t;

  FiniteMetricSpace() = default;

  static FiniteMetricSpace from_matrix(std::vector<std::string> labels,
                                       const std::vector<std::vector<double>>& matrix,
                                       double tol = kDefaultTol) {
    MetricValidationReport rep = validate_metric(matrix, tol);
    if (labels.size() != matrix.size()) {
      rep.labels_ok = false;
      rep.label_issue = "label count " + std::to_string(labels.size()) +
                        " != point count " + std::to_string(matrix.size());
    } else {
      std::unordered_set<std::string> seen;
      for (const auto& l : labels) {
        if (l.empty()) {
          rep.labels_ok = false;
          rep.label_issue = "empty label";
          break;
        }
        if (!seen.insert(l).second) {
          rep.labels_ok = false;
          rep.label_issue = "duplicate label '" + l + "'";
          break;
        }
      }
    }
    if (!rep.pass()) throw validation_error(std::move(rep));

    FiniteMetricSpace s;
    s.n_ = matrix.size();
    s.labels_ = std::move(labels);
    s.d_.assign(s.n_ * s.n_, 0.0);
    for (std::size_t i = 0; i < s.n_; ++i)
      for (std::size_t j = i + 1; j < s.n_; ++j) {
        double v = 0.5 * (matrix[i][j] + matrix[j][i]);
        if (v < 0) v = 0;
        s.d_[i * s.n_ + j] = v;
        s.d_[j * s.n_ + i] = v;
      }
    return s;
  }

  std::size_t size() const { return n_; }
  double distance(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (labels_[i] == label) return i;
    throw std::invalid_argument("unknown point label '" + label + "'");
  }

  std::vector<double> row(std::size_t i) const {
    if (i >= n_) throw std::invalid_argument("row index out of range");
    return std::vector<double>(d_.begin() + static_cast<std::ptrdiff_t>(i * n_),
                               d_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_));
  }

  std::vector<std::vector<double>> matrix() const {
    std::vector<std::vector<double>> m(n_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m[i][j] = distance(i, j);
    return m;
  }

  bool operator==(const FiniteMetricSpace& o) const {
    return labels_ == o.labels_ && d_ == o.d_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> d_;  // row-major, symmetric, zero diagonal
};

// Raised when a requested ball intersection turns out to be empty (or cannot
// be certified nonempty at the working tolerance).
struct ball_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool approx_equal(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                         double tol = kDefaultTol) {
  if (a.size() != b.size() || a.labels() != b.labels()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (std::abs(a.distance(i, j) - b.distance(i, j)) > tol) return false;
  return true;
}

// A finite list of points of some ambient space, viewed as an indexed space.
// `Space` must expose point_type and distance(point, point).
template <typename Space>
class SampledSpace {
 public:
  using point_type = std::size_t;
  using ambient_point = typename Space::point_type;

  SampledSpace(const Space& space, std::vector<ambient_point> pts)
      : space_(&space), pts_(std::move(pts)) {}

  std::size_t size() const { return pts_.size(); }
  double distance(std::size_t i, std::size_t j) const {
    return space_->distance(pts_[i], pts_[j]);
  }
  const ambient_point& point(std::size_t i) const { return pts_.at(i); }
  const std::vector<ambient_point>& points() const { return pts_; }

 private:
  const Space* space_;
  std::vector<ambient_point> pts_;
};

// Materializes an indexed space as a plain labeled metric space.
template <FiniteSpace S>
FiniteMetricSpace materialize(const S& s, const std::string& label_prefix = "p") {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> m(s.size(), std::vector<double>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    labels.push_back(label_prefix + std::to_string(i));
    for (std::size_t j = 0; j < s.size(); ++j) m[i][j] = s.distance(i, j);
  }
  return FiniteMetricSpace::from_matrix(std::move(labels), m);
}

// ------------------------------------------------------------------ queries

template <FiniteSpace S>
double diameter(const S& s) {
  if (s.size() == 0) throw std::invalid_argument("diameter of empty space");
  double d = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) d = std::max(d, s.distance(i, j));
  return d;
}

// Four-point condition: among the three pairings of every quadruple, the two
// largest sums agree within tol. Characterizes metrics realizable by trees.
template <FiniteSpace S>
bool is_four_point(const S& s, double tol = kDefaultTol) {
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          std::array<double, 3> sums = {s.distance(i, j) + s.distance(k, l),
                                        s.distance(i, k) + s.distance(j, l),
                                        s.distance(i, l) + s.distance(j, k)};
          std::sort(sums.begin(), sums.end());
          if (sums[2] - sums[1] > tol) return false;
        }
  return true;
}

namespace detail {
inline void check_subset(std::size_t n, const PointSubset& subset) {
  if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
  std::unordered_set<std::size_t> seen;
  for (std::size_t a : subset) {
    if (a >= n) throw std::invalid_argument("subset index out of range");
    if (!seen.insert(a).second) throw std::invalid_argument("subset indices must be distinct");
  }
}
}  // namespace detail

enum class SpanMode { Spans, StrictlySpans };

struct SpanCheck {
  bool ok = true;
  std::size_t x = kNoIndex;        // violating ordered pair, when ok == false
  std::size_t x_prime = kNoIndex;
  double gap = 0.0;                // |xx'| - max_a (|xa| - |x'a|)
};

// Does A reproduce all distances of the space through the identity
// |xx'| = max_{a in A} (|xa| - |x'a|)?  On a finite space the sup is a max,
// so the strict variant coincides with the plain one; both are exposed.
template <FiniteSpace S>
SpanCheck spans_check(const S& s, const PointSubset& subset, SpanMode /*mode*/,
                      double tol = kDefaultTol) {
  detail::check_subset(s.size(), subset);
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t xp = 0; xp < s.size(); ++xp) {
      if (x == xp) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a : subset)
        best = std::max(best, s.distance(x, a) - s.distance(xp, a));
      if (std::abs(best - s.distance(x, xp)) > tol)
        return {false, x, xp, s.distance(x, xp) - best};
    }
  return {};
}

template <FiniteSpace S>
double covering_radius(const S& s, const PointSubset& subset) {
  detail::check_subset(s.size(), subset);
  double worst = 0;
  for (std::size_t x = 0; x < s.size(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a : subset) best = std::min(best, s.distance(x, a));
    worst = std::max(worst, best);
  }
  return worst;
}

// True iff every point of the space lies within alpha (+tol) of the subset.
template <FiniteSpace S>
bool is_net(const S& s, const PointSubset& subset, double alpha, double tol = kDefaultTol) {
  if (alpha < 0) throw std::invalid_argument("net radius must be nonnegative");
  return covering_radius(s, subset) <= alpha + tol;
}

}  // namespace tspan
