#pragma once

// Scalar schedules and counting formulas shared by all constructions: the
// non-equidistant grid sequence and kappa, the stripe numbers omega, the
// layer and sector schedules of the layered and re-oriented covers, and the
// automatic sector exponent p.
//
// The recursions define the covers. The closed forms are kept for analysis
// and as cross-checks; they are evaluated on raw doubles with no tie nudging.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bracketing/geometry.hpp"

namespace bracketing {

enum class EvalMode { recursive, closed };

/// The decreasing sequence x_0 = 1 > x_1 > ... > x_kappa, followed by 0.
struct GridSequence {
  double delta = 0.0;
  int dim = 2;
  std::vector<double> xs;
  int kappa = 0;
};

namespace detail {

/// x_1 and the divisor x_1^{d-1} of the grid recursion.
struct GridStep {
  double x1;
  double divisor;
};

inline GridStep grid_step(double delta, int d) {
  const double x1 = root(1.0 - delta, d);
  return {x1, d == 2 ? x1 : std::pow(x1, d - 1)};
}

inline void require_dim(int d) { require(d >= 2, "dimension must be at least 2"); }

/// ceil(n / m) for m > 0 in exact integer arithmetic.
inline std::int64_t ceil_div(std::int64_t n, std::int64_t m) {
  return n >= 0 ? (n + m - 1) / m : -((-n) / m);
}

}  // namespace detail

/// x_0 := 1, x_1 := (1-delta)^{1/d}, x_{i+1} := (x_i - delta) x_1^{1-d} while
/// x_i > delta; kappa is the first index with x_kappa <= delta.
inline GridSequence grid_coordinates(double delta, int d) {
  detail::require_delta(delta);
  detail::require_dim(d);
  const auto step = detail::grid_step(delta, d);
  GridSequence g{delta, d, {1.0, step.x1}, 1};
  double x = step.x1;
  while (x > delta) {
    x = (x - delta) / step.divisor;
    g.xs.push_back(x);
  }
  g.kappa = static_cast<int>(g.xs.size()) - 1;
  g.xs.push_back(0.0);
  return g;
}

inline int kappa(double delta, int d, EvalMode mode = EvalMode::recursive) {
  detail::require_delta(delta);
  detail::require_dim(d);
  if (mode == EvalMode::closed) {
    const double dd = d;
    const double r = dd / (dd - 1.0) *
                     (std::log(1.0 - detail::root(1.0 - delta, d)) - std::log(delta)) /
                     std::log(1.0 - delta);
    return static_cast<int>(std::ceil(r));
  }
  const auto step = detail::grid_step(delta, d);
  int k = 1;
  for (double x = step.x1; x > delta; ++k) x = (x - delta) / step.divisor;
  return k;
}

/// Minimal number of delta-brackets of height 1 - (1-delta)^{1/2} covering the
/// stripe [(t, a_1), (1,1)], i.e. the first index k with x_k <= t (d = 2).
inline int omega(double delta, double t, EvalMode mode = EvalMode::recursive) {
  detail::require_delta(delta);
  detail::require(t >= 0.0 && t < 1.0, "stripe start t must lie in [0,1)");
  const double s = std::sqrt(1.0 - delta);
  if (mode == EvalMode::closed) {
    const double r = 2.0 *
                     (std::log(1.0 - s) - std::log(t * (1.0 - 1.0 / s) + delta / s)) /
                     std::log(1.0 - delta);
    return static_cast<int>(std::ceil(r));
  }
  int k = 1;
  for (double x = s; x > t; ++k) x = (x - delta) / s;
  return k;
}

/// p(delta) = max{ floor((ln(1/delta) - k) / c), 0 }.
inline int p_auto(double delta, double k = 0.0, double c = 1.7) {
  detail::require_delta(delta);
  detail::require(c > 0.0, "c must be positive");
  return std::max(static_cast<int>(std::floor((-std::log(delta) - k) / c)), 0);
}

struct LayerSchedule {
  double delta = 0.0;
  /// a_0 = 1, ..., a_zeta, then a_{zeta+1} = 0.
  std::vector<double> as;
  int zeta = 0;
  /// delta_i = delta / (1 - i delta) for the layers i < zeta.
  std::vector<double> deltas;
};

/// zeta(delta) = ceil(1/delta) - 1.
inline int layer_count(double delta) {
  return static_cast<int>(std::ceil(1.0 / delta)) - 1;
}

inline LayerSchedule layer_schedule(double delta) {
  detail::require_delta(delta);
  LayerSchedule s;
  s.delta = delta;
  s.zeta = layer_count(delta);
  s.as.reserve(static_cast<std::size_t>(s.zeta) + 2);
  for (int i = 0; i <= s.zeta; ++i) s.as.push_back(std::sqrt(std::max(0.0, 1.0 - i * delta)));
  s.as.push_back(0.0);
  s.deltas.reserve(static_cast<std::size_t>(s.zeta));
  for (int i = 0; i < s.zeta; ++i) s.deltas.push_back(delta / (1.0 - i * delta));
  return s;
}

inline constexpr int kMaxSectorExponent = 30;

/// Stripe decomposition of the discretized sector h of 2^p.
///
/// Stripe i spans heights [a[i+1], a[i]] and x-range [t[i], (h/2^p) a[i]];
/// `t[i]` holds t^{(h)}_{i+1}.
struct SectorSchedule {
  double delta = 0.0;
  int p = 0;
  int h = 1;
  int rho = 0;
  std::vector<double> a;  // i = 0..rho+1
  std::vector<double> t;  // i = 0..rho

  double slope() const { return h / std::ldexp(1.0, p); }
};

namespace detail {

inline void require_sector(double delta, int p, int h) {
  require_delta(delta);
  require(p >= 0 && p <= kMaxSectorExponent, "sector exponent p out of range");
  require(h >= 1 && h <= (1 << p), "sector index h must lie in [1, 2^p]");
}

inline double sector_height(double delta, double P, int h, std::int64_t i) {
  return std::sqrt(std::max(0.0, 1.0 - static_cast<double>(i) * (P / h) * delta));
}

}  // namespace detail

/// rho^{(h)}(delta) = ceil(h 2^{-p} / delta) - 1.
inline int sector_stripes(double delta, int p, int h) {
  detail::require_sector(delta, p, h);
  return static_cast<int>(std::ceil(h / std::ldexp(1.0, p) / delta)) - 1;
}

/// j_i = ceil(((h-1)/h) i - 1/h), evaluated exactly as ceil(((h-1) i - 1) / h).
inline std::int64_t sector_index(int h, std::int64_t i) {
  return detail::ceil_div(static_cast<std::int64_t>(h - 1) * i - 1, h);
}

/// a^{(h)}_i = (1 - i (2^p/h) delta)_+^{1/2}.
inline double sector_height(double delta, int p, int h, std::int64_t i) {
  detail::require_sector(delta, p, h);
  return detail::sector_height(delta, std::ldexp(1.0, p), h, i);
}

/// t^{(h)}_{i+1} from the square-root formula; zero for h = 1.
inline double sector_left_edge(double delta, int p, int h, std::int64_t i) {
  detail::require_sector(delta, p, h);
  if (h == 1) return 0.0;
  const double P = std::ldexp(1.0, p);
  const auto j = sector_index(h, i);
  return (h - 1) / P * detail::sector_height(delta, P, h - 1, j);
}

inline SectorSchedule sector_schedule(double delta, int p, int h) {
  SectorSchedule s;
  s.delta = delta;
  s.p = p;
  s.h = h;
  s.rho = sector_stripes(delta, p, h);
  const double P = std::ldexp(1.0, p);
  s.a.reserve(static_cast<std::size_t>(s.rho) + 2);
  for (int i = 0; i <= s.rho + 1; ++i) s.a.push_back(detail::sector_height(delta, P, h, i));
  s.t.reserve(static_cast<std::size_t>(s.rho) + 1);
  for (int i = 0; i <= s.rho; ++i) s.t.push_back(sector_left_edge(delta, p, h, i));
  return s;
}

/// t^{(h)}_{i+1} = ((h-1)/2^p) a^{(h-1)}_{j_i}, read off the neighbouring
/// sector's schedule.
inline double sector_left_edge_from_neighbour(const SectorSchedule& neighbour, int h,
                                              std::int64_t i) {
  detail::require(neighbour.h == h - 1, "neighbour must be sector h-1");
  const auto j = static_cast<std::size_t>(sector_index(h, i));
  const double a = j < neighbour.a.size() ? neighbour.a[j] : 0.0;
  return (h - 1) / std::ldexp(1.0, neighbour.p) * a;
}

namespace detail {

/// Brackets emitted on the stripe [lower, upper] of slope `slope`: the diagonal
/// one, then one per step x -> (x upper - delta)_+ / lower from x_1 = slope
/// lower while x > t.
inline int stripe_walk(double delta, double slope, double upper, double lower, double t) {
  int n = 1;
  for (double x = slope * lower; x > t; ++n) x = std::max(0.0, x * upper - delta) / lower;
  return n;
}

}  // namespace detail

/// omega(delta, h, i): brackets (diagonal one included) covering stripe i of
/// sector h.
///
/// Recursive mode walks the stripe with the construction's own arithmetic.
/// Closed mode uses the scaled stripe number omega(delta^{(h)}_i, t(delta,h,i))
/// after the construction's first comparison x_1 > t, which also settles the
/// terminal stripe whose lower height is clamped to 0.
inline int sector_stripe_count(double delta, int p, int h, int i,
                               EvalMode mode = EvalMode::closed) {
  detail::require_sector(delta, p, h);
  const double P = std::ldexp(1.0, p);
  const double slope = h / P;
  const double upper = detail::sector_height(delta, P, h, i);
  const double lower = detail::sector_height(delta, P, h, i + 1);
  const double edge = sector_left_edge(delta, p, h, i);
  if (mode == EvalMode::recursive) return detail::stripe_walk(delta, slope, upper, lower, edge);
  if (slope * lower <= edge) return 1;
  const double dh = P / h * delta;
  const double di = dh / (1.0 - i * dh);
  // A sliver just above the clamped stripe: x_2 is already 0.
  if (di >= 1.0) return 2;
  double t = 0.0;
  if (h > 1) {
    const auto j = static_cast<double>(sector_index(h, i));
    t = (h - 1.0) / h * std::sqrt(std::max(0.0, 1.0 - (j * h / (h - 1.0) - i) * di));
  }
  return omega(di, t, EvalMode::closed);
}

}  // namespace bracketing
