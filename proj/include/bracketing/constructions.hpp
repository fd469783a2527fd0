#pragma once

// The four anchored-cover constructions (grid, Thiemard, layered,
// re-oriented), the product cover of unanchored boxes, and count-only
// evaluation of the cardinality identities.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bracketing/geometry.hpp"
#include "bracketing/sequences.hpp"

namespace bracketing {

/// Thrown by the product construction when a paired bracket is too heavy.
class weight_violation : public std::runtime_error {
 public:
  weight_violation(std::size_t lower_index, std::size_t upper_index, double weight, double delta)
      : std::runtime_error("pair (" + std::to_string(lower_index) + ", " +
                           std::to_string(upper_index) + ") has weight " + std::to_string(weight) +
                           " > " + std::to_string(delta) +
                           "; anchored cover is unsuitable for the product construction"),
        lower_index_(lower_index),
        upper_index_(upper_index),
        weight_(weight) {}

  std::size_t lower_index() const noexcept { return lower_index_; }
  std::size_t upper_index() const noexcept { return upper_index_; }
  double weight() const noexcept { return weight_; }

 private:
  std::size_t lower_index_;
  std::size_t upper_index_;
  double weight_;
};

// ---------------------------------------------------------------------------
// Thiemard stripes

/// t_0 = 1 > t_1 > ... > t_tau > 0 = t_{tau+1}; t_tau is the first entry <= delta.
struct ThiemardStripes {
  std::vector<double> ts;
  int tau = 0;
};

/// t_{i+1} = (1 - delta/t_i)^{1/2} t_i, evaluated with the same expression the
/// decomposition uses for type-1 rectangles with upper corner (t_i, 1).
inline ThiemardStripes thiemard_stripes(double delta) {
  detail::require_delta(delta);
  ThiemardStripes s;
  s.ts.push_back(1.0);
  for (;;) {
    const double b = s.ts.back() * 1.0;
    const double t = std::sqrt((b - delta) / b) * s.ts.back();
    s.ts.push_back(t);
    if (t <= delta) break;
  }
  s.tau = static_cast<int>(s.ts.size()) - 1;
  s.ts.push_back(0.0);
  return s;
}

// ---------------------------------------------------------------------------
// Counting

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int k = 0; k < exp; ++k) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base)
      throw std::overflow_error("cover cardinality overflows 64 bits");
    r *= base;
  }
  return r;
}

}  // namespace detail

/// Cardinality of a construction without materializing it.
///
///   grid        (kappa(delta,d) + 1)^d
///   thiemard    sum_{i<tau} (kappa(delta/t_i) + 1) + 1
///   layered     sum_{i<zeta} (2 kappa(delta_i) + 1) + 1
///   reoriented  sum_h sum_i 2 omega(delta,h,i) - (rho^{(2^p)} + 1)
///
/// Work is proportional to the number of stripes. `p` defaults to p_auto.
inline std::uint64_t cover_count(Method method, double delta, std::optional<int> p = std::nullopt,
                                 int d = 2, EvalMode mode = EvalMode::closed) {
  detail::require_delta(delta);
  switch (method) {
    case Method::grid:
      return detail::checked_pow(static_cast<std::uint64_t>(kappa(delta, d, mode)) + 1, d);
    case Method::thiemard: {
      const auto s = thiemard_stripes(delta);
      std::uint64_t n = 1;
      for (int i = 0; i < s.tau; ++i)
        n += static_cast<std::uint64_t>(kappa(delta / s.ts[i], 2, mode)) + 1;
      return n;
    }
    case Method::layered: {
      const auto sched = layer_schedule(delta);
      std::uint64_t n = 1;
      for (double di : sched.deltas) n += 2 * static_cast<std::uint64_t>(kappa(di, 2, mode)) + 1;
      return n;
    }
    case Method::reoriented: {
      const int pp = p.value_or(p_auto(delta));
      detail::require(pp >= 0 && pp <= kMaxSectorExponent, "sector exponent p out of range");
      const int sectors = 1 << pp;
      std::uint64_t n = 0;
      for (int h = sectors; h >= 1; --h) {
        const int rho = sector_stripes(delta, pp, h);
        for (int i = 0; i <= rho; ++i)
          n += 2 * static_cast<std::uint64_t>(sector_stripe_count(delta, pp, h, i, mode));
      }
      return n - static_cast<std::uint64_t>(sector_stripes(delta, pp, sectors) + 1);
    }
    case Method::unanchored:
      break;
  }
  throw std::invalid_argument("no counting identity for unanchored covers");
}

namespace detail {

inline void check_budget(std::uint64_t required, std::size_t budget) {
  if (required > budget) throw budget_exceeded(static_cast<std::size_t>(required), budget);
}

/// Appends the swapped copy of every bracket that is not its own mirror image.
inline void add_mirrors(std::vector<double>& coords) {
  const std::size_t n = coords.size() / 4;
  std::size_t symmetric = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (coords[4 * k] == coords[4 * k + 1] && coords[4 * k + 2] == coords[4 * k + 3]) ++symmetric;
  coords.reserve(coords.size() + 4 * (n - symmetric));
  for (std::size_t k = 0; k < n; ++k) {
    const double lx = coords[4 * k], ly = coords[4 * k + 1];
    const double hx = coords[4 * k + 2], hy = coords[4 * k + 3];
    if (lx == ly && hx == hy) continue;
    coords.insert(coords.end(), {ly, lx, hy, hx});
  }
}

/// Stripe i of the layered construction: the diagonal bracket
/// [a_{i+1}·1, a_i·1] and the brackets [(x_{j+1}, a_{i+1}), (x_j, a_i)] with
/// x_1 = a_{i+1}, x_{j+1} = max{0, (x_j a_i - delta)/a_{i+1}}, ending with the
/// bracket whose left edge is 0.
inline void layer_stripe(double delta, double upper, double lower, BracketSink& out) {
  out.add(lower, lower, upper, upper);
  double x = lower;
  for (;;) {
    const double next = std::max(0.0, (x * upper - delta) / lower);
    out.add(next, lower, x, upper);
    if (next == 0.0) break;
    x = next;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructions

/// Cells of the non-equidistant grid ({x_0,...,x_kappa} u {0})^d.
inline Cover grid_cover(double delta, int d, std::size_t budget = kDefaultBudget) {
  const auto g = grid_coordinates(delta, d);
  const auto cells_per_axis = static_cast<std::size_t>(g.kappa) + 1;
  detail::check_budget(detail::checked_pow(cells_per_axis, d), budget);

  // Edges in increasing order: 0, x_kappa, ..., x_1, 1.
  std::vector<double> edges(g.xs.rbegin(), g.xs.rend());
  BracketSink out(d);
  out.reserve(static_cast<std::size_t>(detail::checked_pow(cells_per_axis, d)));
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> lo(idx.size()), hi(idx.size());
  for (;;) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      lo[k] = edges[idx[k]];
      hi[k] = edges[idx[k] + 1];
    }
    out.add(lo, hi);
    std::size_t k = idx.size();
    while (k > 0 && ++idx[k - 1] == cells_per_axis) idx[--k] = 0;
    if (k == 0) break;
  }
  return Cover::anchored({Method::grid, delta, d, std::nullopt}, std::move(out).take());
}

/// Thiemard's recursive decomposition of [0,1]^2.
///
/// A rectangle P = [alpha, beta] of type j with running product v splits at
/// gamma into Q_1 = [alpha, (gamma_1, beta_2)], Q_2 = [(gamma_1, alpha_2),
/// (beta_1, gamma_2)] and [gamma, beta], the last having weight delta. Q_i for
/// i = j..2 are decomposed further while delta^P v > delta, else emitted.
inline Cover thiemard_cover(double delta, std::size_t budget = kDefaultBudget) {
  detail::require_delta(delta);
  const auto expected = cover_count(Method::thiemard, delta);
  detail::check_budget(expected, budget);

  struct Frame {
    std::array<double, 2> alpha, beta;
    int type;
    double v;
    double shrink;  // delta^P
    std::array<double, 2> gamma;
    int next_child;
  };
  const auto make_frame = [delta](std::array<double, 2> alpha, std::array<double, 2> beta,
                                  int type, double v) {
    const double b = beta[0] * beta[1];
    const double shrink =
        type == 1 ? std::sqrt((b - delta) / b) : (b - delta) / (alpha[0] * beta[1]);
    std::array<double, 2> gamma{};
    for (int i = 0; i < 2; ++i) gamma[i] = i + 1 < type ? alpha[i] : shrink * beta[i];
    return Frame{alpha, beta, type, v, shrink, gamma, type};
  };
  const auto child = [](const Frame& f, int i) -> std::pair<std::array<double, 2>, std::array<double, 2>> {
    if (i == 1) return {f.alpha, {f.gamma[0], f.beta[1]}};
    return {{f.gamma[0], f.alpha[1]}, {f.beta[0], f.gamma[1]}};
  };

  BracketSink out(2);
  out.reserve(static_cast<std::size_t>(expected));
  std::vector<Frame> stack;
  stack.push_back(make_frame({0.0, 0.0}, {1.0, 1.0}, 1, 1.0));
  while (!stack.empty()) {
    Frame& f = stack.back();
    const double child_v = f.shrink * f.v;
    if (child_v > delta && f.next_child <= 2) {
      const int i = f.next_child++;
      const auto [lo, hi] = child(f, i);
      stack.push_back(make_frame(lo, hi, i, child_v));
      continue;
    }
    if (child_v <= delta) {
      for (int i = f.type; i <= 2; ++i) {
        const auto [lo, hi] = child(f, i);
        out.add(lo[0], lo[1], hi[0], hi[1]);
      }
    }
    out.add(f.gamma[0], f.gamma[1], f.beta[0], f.beta[1]);
    stack.pop_back();
  }
  return Cover::anchored({Method::thiemard, delta, 2, std::nullopt}, std::move(out).take());
}

/// Brackets S_i of layer i < zeta of the layered construction (no mirror).
inline Cover layer_stripe_cover(double delta, int layer) {
  const auto sched = layer_schedule(delta);
  detail::require(layer >= 0 && layer < sched.zeta, "layer index out of range");
  BracketSink out(2);
  detail::layer_stripe(delta, sched.as[layer], sched.as[layer + 1], out);
  return Cover::anchored({Method::layered, delta, 2, std::nullopt}, std::move(out).take());
}

/// Layers [0, a_i·1] \ [0, a_{i+1}·1) covered by stripe brackets and their
/// mirror images, plus the final bracket [0, a_zeta·1].
inline Cover layered_cover(double delta, std::size_t budget = kDefaultBudget) {
  detail::require_delta(delta);
  const auto expected = cover_count(Method::layered, delta);
  detail::check_budget(expected, budget);
  const auto sched = layer_schedule(delta);

  BracketSink out(2);
  out.reserve(static_cast<std::size_t>(expected));
  for (int i = 0; i < sched.zeta; ++i) detail::layer_stripe(delta, sched.as[i], sched.as[i + 1], out);
  auto coords = std::move(out).take();
  detail::add_mirrors(coords);
  const double last = sched.as[sched.zeta];
  coords.insert(coords.end(), {0.0, 0.0, last, last});
  return Cover::anchored({Method::layered, delta, 2, std::nullopt}, std::move(coords));
}

/// True when 2^p >= 1/delta, outside the regime where re-orientation pays off.
inline bool reoriented_outside_regime(double delta, int p) {
  return std::ldexp(1.0, p) >= 1.0 / delta;
}

/// Re-oriented brackets: for sectors h = 2^p..1 and stripes i = 0..rho^{(h)},
/// emit the diagonal bracket [abar_{i+1}, abar_i] with abar_i = ((h/2^p) a_i, a_i),
/// then from x_1 = (h/2^p) a_{i+1}, while x_j > t_{i+1}, the bracket
/// [(x_{j+1}, a_{i+1}), (x_j, a_i)] with x_{j+1} = (x_j a_i - delta)_+ / a_{i+1}.
/// The result is closed under (x,y) -> (y,x); self-mirrored brackets appear once.
inline Cover reoriented_cover(double delta, int p, std::size_t budget = kDefaultBudget) {
  detail::require_delta(delta);
  detail::require(p >= 0 && p <= kMaxSectorExponent, "sector exponent p out of range");
  const auto expected = cover_count(Method::reoriented, delta, p);
  detail::check_budget(expected, budget);

  BracketSink out(2);
  out.reserve(static_cast<std::size_t>(expected));
  for (int h = 1 << p; h >= 1; --h) {
    const auto s = sector_schedule(delta, p, h);
    const double slope = s.slope();
    for (int i = 0; i <= s.rho; ++i) {
      const double upper = s.a[i];
      const double lower = s.a[i + 1];
      out.add(slope * lower, lower, slope * upper, upper);
      double x = slope * lower;
      while (x > s.t[i]) {
        const double next = std::max(0.0, x * upper - delta) / lower;
        out.add(next, lower, x, upper);
        x = next;
      }
    }
  }
  auto coords = std::move(out).take();
  detail::add_mirrors(coords);
  return Cover::anchored({Method::reoriented, delta, 2, p}, std::move(coords));
}

/// Bracket for the boxes [x,y) with 1 - x in [p,q] and y in [r,s].
///
/// [x,y) = [0,y) ∩ [x,1), so intersecting the bracket of [0,y) with the
/// reflected bracket of [x,1) gives inner [1-p, r] and outer [1-q, s]; the
/// weight is at most (V_s - V_r) + (V_q - V_p). Returns nullopt when no
/// x <= y is feasible (1-q not <= s).
inline std::optional<UnanchoredBracket> product_bracket(std::span<const double> p,
                                                        std::span<const double> q,
                                                        std::span<const double> r,
                                                        std::span<const double> s) {
  const std::size_t d = p.size();
  std::vector<double> outer_lo(d), inner_lo(d);
  for (std::size_t k = 0; k < d; ++k) {
    outer_lo[k] = 1.0 - q[k];
    inner_lo[k] = 1.0 - p[k];
  }
  if (!dominated(outer_lo, s)) return std::nullopt;
  Box outer(Point(std::move(outer_lo)), Point(std::vector<double>(s.begin(), s.end())));
  std::optional<Box> inner;
  if (dominated(inner_lo, r))
    inner.emplace(Point(std::move(inner_lo)), Point(std::vector<double>(r.begin(), r.end())));
  return UnanchoredBracket(std::move(inner), std::move(outer));
}

/// Unanchored delta-cover built from an anchored (delta/2)-cover of
/// cardinality L; at most L^2 brackets. Every bracket is weight-checked
/// against delta (1 + rel_tol).
inline Cover unanchored_product_cover(const Cover& anchored, double rel_tol = 1e-9) {
  detail::require(anchored.is_anchored(), "product construction needs an anchored cover");
  const double delta = 2.0 * anchored.delta();
  detail::require(delta > 0.0 && delta <= 1.0, "target delta must lie in (0,1]");
  std::vector<UnanchoredBracket> out;
  for (std::size_t a = 0; a < anchored.size(); ++a) {
    for (std::size_t b = 0; b < anchored.size(); ++b) {
      auto br = product_bracket(anchored.lo(a), anchored.hi(a), anchored.lo(b), anchored.hi(b));
      if (!br) continue;
      const double w = br->weight();
      if (w > delta * (1.0 + rel_tol)) throw weight_violation(a, b, w, delta);
      out.push_back(std::move(*br));
    }
  }
  return Cover::unanchored({Method::unanchored, delta, anchored.dim(), anchored.p()},
                           std::move(out));
}

/// Materializes the named anchored construction.
inline Cover make_cover(Method method, double delta, std::optional<int> p = std::nullopt,
                        int d = 2, std::size_t budget = kDefaultBudget) {
  switch (method) {
    case Method::grid: return grid_cover(delta, d, budget);
    case Method::thiemard: return thiemard_cover(delta, budget);
    case Method::layered: return layered_cover(delta, budget);
    case Method::reoriented: {
      const int exponent = p.has_value() ? *p : p_auto(delta);
      return reoriented_cover(delta, exponent, budget);
    }
    case Method::unanchored: break;
  }
  throw std::invalid_argument("unanchored covers are built from an anchored cover");
}

}  // namespace bracketing
