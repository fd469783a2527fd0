#pragma once

// Points, boxes and brackets in corner space, plus the Cover container.
//
// An anchored box [0,x) is identified with its upper corner x, and the
// bracket [[0,lo),[0,hi)] with the closed corner-space rectangle [lo,hi].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bracketing {

/// Thrown when a construction would exceed its bracket budget.
class budget_exceeded : public std::runtime_error {
 public:
  budget_exceeded(std::size_t required, std::size_t budget)
      : std::runtime_error("cover needs " + std::to_string(required) +
                           " brackets, budget is " + std::to_string(budget) +
                           "; use count-only mode"),
        required_(required),
        budget_(budget) {}

  std::size_t required() const noexcept { return required_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t required_;
  std::size_t budget_;
};

inline constexpr std::size_t kDefaultBudget = 20'000'000;

namespace detail {

inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

inline void require_delta(double delta) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
}

/// x^{1/d}; sqrt for d = 2 so that all constructions share one rounding.
inline double root(double x, int d) {
  return d == 2 ? std::sqrt(x) : std::pow(x, 1.0 / d);
}

inline double product(std::span<const double> v) {
  double p = 1.0;
  for (double x : v) p *= x;
  return p;
}

}  // namespace detail

/// A point of [0,1]^d.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
    detail::require(!coords_.empty(), "point needs at least one coordinate");
    for (double c : coords_)
      detail::require(c >= 0.0 && c <= 1.0, "point coordinate outside [0,1]");
  }
  Point(std::initializer_list<double> coords)
      : Point(std::vector<double>(coords)) {}

  static Point origin(int d) {
    return Point(std::vector<double>(static_cast<std::size_t>(d), 0.0));
  }
  static Point filled(int d, double v) {
    return Point(std::vector<double>(static_cast<std::size_t>(d), v));
  }

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  /// V_x, the volume of the anchored box [0,x).
  double volume() const noexcept { return detail::product(coords_); }

  bool operator==(const Point&) const = default;

 private:
  std::vector<double> coords_;
};

/// Componentwise a <= b.
inline bool dominated(std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline bool dominated(const Point& a, const Point& b) {
  return a.dim() == b.dim() && dominated(a.coords(), b.coords());
}

/// Closed axis-parallel box [lower, upper].
class Box {
 public:
  Box(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    detail::require(lower_.dim() == upper_.dim(), "box corners differ in dimension");
    detail::require(dominated(lower_, upper_), "box lower corner exceeds upper corner");
  }

  const Point& lower() const noexcept { return lower_; }
  const Point& upper() const noexcept { return upper_; }
  int dim() const noexcept { return lower_.dim(); }

  bool contains(std::span<const double> z) const {
    return dominated(lower_.coords(), z) && dominated(z, upper_.coords());
  }

  bool operator==(const Box&) const = default;

 private:
  Point lower_;
  Point upper_;
};

inline double box_volume(std::span<const double> lower, std::span<const double> upper) {
  double v = 1.0;
  for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
  return v;
}

/// V_{x,y} = vol([x,y]).
inline double box_volume(const Box& b) {
  return box_volume(b.lower().coords(), b.upper().coords());
}

/// Bracket [[0,lo),[0,hi)] of anchored boxes, stored as the corner-space
/// rectangle [lo,hi]. Covers every corner z with lo <= z <= hi.
class AnchoredBracket {
 public:
  AnchoredBracket(Point lo, Point hi) : box_(std::move(lo), std::move(hi)) {}

  const Point& lo() const noexcept { return box_.lower(); }
  const Point& hi() const noexcept { return box_.upper(); }
  int dim() const noexcept { return box_.dim(); }
  const Box& corner_box() const noexcept { return box_; }

  bool contains(std::span<const double> z) const { return box_.contains(z); }

  bool operator==(const AnchoredBracket&) const = default;

 private:
  Box box_;
};

/// W = V_hi - V_lo.
inline double bracket_weight(std::span<const double> lo, std::span<const double> hi) {
  return detail::product(hi) - detail::product(lo);
}

inline double bracket_weight(const AnchoredBracket& br) {
  return bracket_weight(br.lo().coords(), br.hi().coords());
}

/// Bracket [A,B] of unanchored boxes; A is empty when `inner` is absent.
///
/// With an inner box the bracket contains exactly the boxes [x,y) with
/// outer.lower <= x <= inner.lower and inner.upper <= y <= outer.upper.
/// Without one it contains every box inside `outer`.
class UnanchoredBracket {
 public:
  UnanchoredBracket(std::optional<Box> inner, Box outer)
      : inner_(std::move(inner)), outer_(std::move(outer)) {
    if (inner_) {
      detail::require(inner_->dim() == outer_.dim(), "inner and outer box differ in dimension");
      detail::require(dominated(outer_.lower(), inner_->lower()) &&
                          dominated(inner_->upper(), outer_.upper()),
                      "inner box is not nested in outer box");
    }
  }

  const std::optional<Box>& inner() const noexcept { return inner_; }
  const Box& outer() const noexcept { return outer_; }
  int dim() const noexcept { return outer_.dim(); }

  double weight() const {
    return box_volume(outer_) - (inner_ ? box_volume(*inner_) : 0.0);
  }

  /// True when the box [x,y) belongs to the bracket.
  bool contains(std::span<const double> x, std::span<const double> y) const {
    const auto& lo = outer_.lower().coords();
    const auto& hi = outer_.upper().coords();
    if (!dominated(lo, x) || !dominated(y, hi)) return false;
    if (inner_) return dominated(x, inner_->lower().coords()) && dominated(inner_->upper().coords(), y);
    return dominated(x, y);
  }

  bool operator==(const UnanchoredBracket&) const = default;

 private:
  std::optional<Box> inner_;
  Box outer_;
};

enum class Method { grid, thiemard, layered, reoriented, unanchored };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::grid: return "grid";
    case Method::thiemard: return "thiemard";
    case Method::layered: return "layered";
    case Method::reoriented: return "reoriented";
    case Method::unanchored: return "unanchored";
  }
  return "?";
}

inline std::optional<Method> method_from_string(std::string_view s) {
  for (Method m : {Method::grid, Method::thiemard, Method::layered, Method::reoriented,
                   Method::unanchored})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

/// Construction metadata carried by every cover.
struct CoverInfo {
  Method method = Method::grid;
  double delta = 0.0;
  int dim = 2;
  std::optional<int> p;

  bool operator==(const CoverInfo&) const = default;
};

/// Immutable collection of brackets.
///
/// Anchored brackets are stored flat, 2*dim doubles per bracket in the
/// order lo_1..lo_d hi_1..hi_d.
class Cover {
 public:
  static Cover anchored(CoverInfo info, std::vector<double> coords) {
    detail::require(info.method != Method::unanchored, "anchored cover with unanchored method tag");
    detail::require(info.dim >= 1, "cover dimension must be positive");
    const auto stride = 2 * static_cast<std::size_t>(info.dim);
    detail::require(coords.size() % stride == 0, "coordinate count is not a multiple of 2*dim");
    for (std::size_t off = 0; off < coords.size(); off += stride) {
      for (std::size_t k = 0; k < stride; ++k)
        detail::require(coords[off + k] >= 0.0 && coords[off + k] <= 1.0,
                        "bracket coordinate outside [0,1]");
      for (std::size_t k = 0; k < stride / 2; ++k)
        detail::require(coords[off + k] <= coords[off + stride / 2 + k],
                        "bracket lo exceeds hi");
    }
    Cover c;
    c.info_ = info;
    c.coords_ = std::move(coords);
    return c;
  }

  static Cover unanchored(CoverInfo info, std::vector<UnanchoredBracket> brackets) {
    detail::require(info.method == Method::unanchored, "unanchored cover needs the unanchored tag");
    for (const auto& b : brackets)
      detail::require(b.dim() == info.dim, "bracket dimension differs from cover dimension");
    Cover c;
    c.info_ = info;
    c.unanchored_ = std::move(brackets);
    return c;
  }

  const CoverInfo& info() const noexcept { return info_; }
  Method method() const noexcept { return info_.method; }
  double delta() const noexcept { return info_.delta; }
  int dim() const noexcept { return info_.dim; }
  std::optional<int> p() const noexcept { return info_.p; }
  bool is_anchored() const noexcept { return info_.method != Method::unanchored; }

  std::size_t size() const noexcept {
    return is_anchored() ? coords_.size() / stride() : unanchored_.size();
  }
  bool empty() const noexcept { return size() == 0; }

  std::span<const double> lo(std::size_t i) const {
    return std::span<const double>(coords_).subspan(i * stride(), dim_u());
  }
  std::span<const double> hi(std::size_t i) const {
    return std::span<const double>(coords_).subspan(i * stride() + dim_u(), dim_u());
  }

  AnchoredBracket bracket(std::size_t i) const {
    auto l = lo(i);
    auto h = hi(i);
    return AnchoredBracket(Point(std::vector<double>(l.begin(), l.end())),
                           Point(std::vector<double>(h.begin(), h.end())));
  }

  std::span<const double> coordinates() const noexcept { return coords_; }
  std::span<const UnanchoredBracket> unanchored_brackets() const noexcept { return unanchored_; }

  bool operator==(const Cover&) const = default;

 private:
  Cover() = default;
  std::size_t dim_u() const noexcept { return static_cast<std::size_t>(info_.dim); }
  std::size_t stride() const noexcept { return 2 * dim_u(); }

  CoverInfo info_;
  std::vector<double> coords_;
  std::vector<UnanchoredBracket> unanchored_;
};

/// Appends anchored brackets to a flat coordinate buffer (2-D helpers).
class BracketSink {
 public:
  explicit BracketSink(int dim) : dim_(dim) {}

  void reserve(std::size_t brackets) { coords_.reserve(brackets * 2 * static_cast<std::size_t>(dim_)); }

  void add(double lo_x, double lo_y, double hi_x, double hi_y) {
    coords_.insert(coords_.end(), {lo_x, lo_y, hi_x, hi_y});
  }
  void add(std::span<const double> lo, std::span<const double> hi) {
    coords_.insert(coords_.end(), lo.begin(), lo.end());
    coords_.insert(coords_.end(), hi.begin(), hi.end());
  }

  std::size_t size() const noexcept { return coords_.size() / (2 * static_cast<std::size_t>(dim_)); }
  std::vector<double> take() && { return std::move(coords_); }

 private:
  int dim_;
  std::vector<double> coords_;
};

/// The bracket of maximum volume among all delta-brackets containing z.
///
/// For V_z > delta this is [x,z] with x = (1 - delta/V_z)^{1/d} z, whose
/// weight is delta. Otherwise z lies in the bracket [0, zeta] with
/// zeta_i = min(1, (delta/V_z)^{1/d} z_i), or zeta = delta^{1/d}·1 when V_z = 0.
inline AnchoredBracket optimal_anchored_bracket(const Point& z, double delta, int d) {
  detail::require_delta(delta);
  detail::require(d >= 1 && z.dim() == d, "point dimension does not match d");
  const double vz = z.volume();
  std::vector<double> a(static_cast<std::size_t>(d));
  if (vz > delta) {
    const double s = detail::root(1.0 - delta / vz, d);
    for (int i = 0; i < d; ++i) a[i] = s * z[i];
    return AnchoredBracket(Point(std::move(a)), z);
  }
  if (vz > 0.0) {
    const double s = detail::root(delta / vz, d);
    for (int i = 0; i < d; ++i) a[i] = std::min(1.0, s * z[i]);
  } else {
    std::fill(a.begin(), a.end(), detail::root(delta, d));
  }
  return AnchoredBracket(Point::origin(d), Point(std::move(a)));
}

/// Volume of the optimal bracket when V_z > delta:
/// (1 - (1 - delta/V_z)^{1/d})^d V_z.
inline double optimal_bracket_volume(double vz, double delta, int d) {
  return std::pow(1.0 - detail::root(1.0 - delta / vz, d), d) * vz;
}

/// Componentwise scaling Phi(lambda).
class ScalingMap {
 public:
  explicit ScalingMap(std::vector<double> lambda) : lambda_(std::move(lambda)) {
    detail::require(!lambda_.empty(), "scaling map needs at least one factor");
    for (double l : lambda_)
      detail::require(l > 0.0 && std::isfinite(l), "scaling factors must be positive");
  }
  ScalingMap(std::initializer_list<double> l) : ScalingMap(std::vector<double>(l)) {}

  int dim() const noexcept { return static_cast<int>(lambda_.size()); }
  double operator[](std::size_t i) const { return lambda_[i]; }
  double determinant() const noexcept { return detail::product(lambda_); }

  ScalingMap inverse() const {
    std::vector<double> inv(lambda_.size());
    for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / lambda_[i];
    return ScalingMap(std::move(inv));
  }

 private:
  std::vector<double> lambda_;
};

/// Applies Phi(lambda) to every corner of an anchored cover. A delta-cover of
/// S becomes a (prod lambda_i · delta)-cover of Phi(lambda) S.
inline Cover scale(const Cover& c, const ScalingMap& m) {
  detail::require(c.is_anchored(), "scale applies to anchored covers");
  detail::require(m.dim() == c.dim(), "scaling map dimension differs from cover dimension");
  const auto d = static_cast<std::size_t>(c.dim());
  std::vector<double> out(c.coordinates().begin(), c.coordinates().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] *= m[k % d];
    if (out[k] > 1.0) throw std::invalid_argument("scaling pushes a coordinate above 1");
  }
  CoverInfo info = c.info();
  info.delta = m.determinant() * c.delta();
  return Cover::anchored(info, std::move(out));
}

}  // namespace bracketing
