#pragma once

// Independent checks that a Cover is a delta-bracketing cover. The checks
// read bracket corners only, never the construction metadata.
//
// Coverage of the 2-D corner space is decided exactly by a slab sweep over
// the distinct x-edges: inside every slab the y-intervals of the brackets
// spanning the slab must cover [0,1]. Brackets are closed, so touching
// edges count as covered and only gaps of positive width are reported.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "bracketing/geometry.hpp"

namespace bracketing {

struct VerificationReport {
  bool weights_ok = true;
  double max_weight = 0.0;
  bool coverage_ok = true;
  /// Corner (anchored) or x-then-y pair (unanchored) covered by no bracket.
  std::optional<std::vector<double>> uncovered_witness;
  std::size_t checked_brackets = 0;
  double tolerance = 0.0;
  /// Index of the heaviest bracket, if any.
  std::optional<std::size_t> heaviest;

  bool ok() const noexcept { return weights_ok && coverage_ok; }
};

struct OverlapStats {
  double total_bracket_area = 0.0;
  double union_area = 0.0;
  int max_depth = 0;
  /// 20 bins over [0, delta]; heavier brackets land in the last bin.
  std::vector<std::pair<double, std::size_t>> weight_histogram;
};

inline constexpr double kDefaultRelTol = 1e-9;

inline double weight_of(const Cover& c, std::size_t i) {
  return c.is_anchored() ? bracket_weight(c.lo(i), c.hi(i)) : c.unanchored_brackets()[i].weight();
}

/// weight <= delta (1 + rel_tol) for every bracket.
inline VerificationReport verify_weights(const Cover& c, double delta, double rel_tol = kDefaultRelTol) {
  detail::require(rel_tol >= 0.0, "tolerance must be nonnegative");
  VerificationReport r;
  r.tolerance = rel_tol;
  const double limit = delta * (1.0 + rel_tol);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = weight_of(c, i);
    if (!r.heaviest || w > r.max_weight) {
      r.max_weight = w;
      r.heaviest = i;
    }
    if (w > limit) r.weights_ok = false;
  }
  r.checked_brackets = c.size();
  return r;
}

namespace detail {

inline void require_planar_anchored(const Cover& c) {
  require(c.is_anchored(), "coverage sweep needs an anchored cover (use verify_unanchored)");
  require(c.dim() == 2, "coverage sweep is two-dimensional");
}

/// Visits every slab [x_k, x_{k+1}] of positive width between 0 and 1 with the
/// y-intervals of the brackets spanning it, sorted by lower end.
template <typename Visit>
void sweep_slabs(const Cover& c, Visit&& visit) {
  const std::size_t n = c.size();
  std::vector<double> edges{0.0, 1.0};
  edges.reserve(2 * n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back(c.lo(i)[0]);
    edges.push_back(c.hi(i)[0]);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // Brackets by left edge and by right edge for insertion and removal.
  std::vector<std::size_t> by_lo(n), by_hi(n);
  for (std::size_t i = 0; i < n; ++i) by_lo[i] = by_hi[i] = i;
  std::sort(by_lo.begin(), by_lo.end(), [&](auto a, auto b) { return c.lo(a)[0] < c.lo(b)[0]; });
  std::sort(by_hi.begin(), by_hi.end(), [&](auto a, auto b) { return c.hi(a)[0] < c.hi(b)[0]; });

  using Interval = std::pair<std::pair<double, double>, std::size_t>;
  std::set<Interval> active;
  std::size_t ins = 0, rem = 0;
  std::vector<std::pair<double, double>> intervals;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double left = edges[k], right = edges[k + 1];
    while (ins < n && c.lo(by_lo[ins])[0] <= left) {
      const auto i = by_lo[ins++];
      if (c.hi(i)[0] > left) active.insert({{c.lo(i)[1], c.hi(i)[1]}, i});
    }
    while (rem < n && c.hi(by_hi[rem])[0] <= left) {
      const auto i = by_hi[rem++];
      active.erase({{c.lo(i)[1], c.hi(i)[1]}, i});
    }
    intervals.clear();
    for (const auto& iv : active) intervals.push_back(iv.first);
    if (!visit(left, right, intervals)) return;
  }
}

}  // namespace detail

/// Exact check that the union of the corner-space rectangles is [0,1]^2.
inline VerificationReport verify_coverage(const Cover& c) {
  detail::require_planar_anchored(c);
  VerificationReport r;
  r.checked_brackets = c.size();
  detail::sweep_slabs(c, [&](double left, double right, const auto& intervals) {
    double reach = 0.0;
    std::optional<std::pair<double, double>> gap;
    for (const auto& [lo, hi] : intervals) {
      if (lo > reach) {
        gap = {reach, lo};
        break;
      }
      reach = std::max(reach, hi);
    }
    if (!gap && reach < 1.0) gap = {reach, 1.0};
    if (!gap) return true;
    r.coverage_ok = false;
    r.uncovered_witness = std::vector<double>{0.5 * (left + right), 0.5 * (gap->first + gap->second)};
    return false;
  });
  return r;
}

/// Weights and coverage in one report.
inline VerificationReport verify_anchored(const Cover& c, double delta, double rel_tol = kDefaultRelTol) {
  auto r = verify_weights(c, delta, rel_tol);
  const auto cov = verify_coverage(c);
  r.coverage_ok = cov.coverage_ok;
  r.uncovered_witness = cov.uncovered_witness;
  return r;
}

/// Union area, summed area, stacking depth and weight histogram.
inline OverlapStats overlap_stats(const Cover& c, int bins = 20) {
  detail::require_planar_anchored(c);
  detail::require(bins >= 1, "histogram needs at least one bin");
  OverlapStats s;
  for (std::size_t i = 0; i < c.size(); ++i) s.total_bracket_area += box_volume(c.lo(i), c.hi(i));

  std::vector<std::pair<double, int>> events;
  detail::sweep_slabs(c, [&](double left, double right, const auto& intervals) {
    double covered = 0.0, reach = 0.0;
    for (const auto& [lo, hi] : intervals) {
      if (hi > reach) {
        covered += hi - std::max(lo, reach);
        reach = hi;
      }
    }
    s.union_area += (right - left) * covered;

    // Depth over open y-ranges: closing events sort before opening ones.
    events.clear();
    for (const auto& [lo, hi] : intervals) {
      if (hi <= lo) continue;
      events.emplace_back(lo, +1);
      events.emplace_back(hi, -1);
    }
    std::sort(events.begin(), events.end());
    int depth = 0;
    for (const auto& e : events) s.max_depth = std::max(s.max_depth, depth += e.second);
    return true;
  });

  const double delta = c.delta();
  s.weight_histogram.resize(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) s.weight_histogram[b] = {delta * b / bins, 0};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = bracket_weight(c.lo(i), c.hi(i));
    auto b = static_cast<int>(w / delta * bins);
    s.weight_histogram[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))].second++;
  }
  return s;
}

/// True when the cells of a d-dimensional cover are exactly the cells of the
/// product grid spanned by its distinct coordinates (tiling check for d >= 3).
inline bool verify_grid_tiling(const Cover& c) {
  detail::require(c.is_anchored(), "tiling check needs an anchored cover");
  const auto d = static_cast<std::size_t>(c.dim());
  std::vector<std::vector<double>> axes(d);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t k = 0; k < d; ++k) {
      axes[k].push_back(c.lo(i)[k]);
      axes[k].push_back(c.hi(i)[k]);
    }
  std::size_t expected = 1;
  for (auto& a : axes) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    if (a.size() < 2 || a.front() != 0.0 || a.back() != 1.0) return false;
    expected *= a.size() - 1;
  }
  if (expected != c.size()) return false;
  std::vector<std::size_t> seen;
  seen.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::size_t key = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const auto& a = axes[k];
      const auto pos = static_cast<std::size_t>(std::lower_bound(a.begin(), a.end(), c.lo(i)[k]) - a.begin());
      if (pos + 1 >= a.size() || a[pos + 1] != c.hi(i)[k]) return false;
      key = key * (a.size() - 1) + pos;
    }
    seen.push_back(key);
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

namespace detail {

/// Uniform double in [0,1) from the top 53 bits.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Exact weight check plus sampled coverage: n_samples boxes [x,y), x <= y,
/// drawn from `seed`, must each belong to some bracket.
inline VerificationReport verify_unanchored(const Cover& c, double delta, std::size_t n_samples,
                                            std::uint64_t seed, double rel_tol = kDefaultRelTol) {
  detail::require(!c.is_anchored(), "verify_unanchored needs an unanchored cover");
  detail::require(n_samples >= 1, "at least one sample is required");
  auto r = verify_weights(c, delta, rel_tol);
  const auto brackets = c.unanchored_brackets();
  const auto d = static_cast<std::size_t>(c.dim());

  // Brackets sorted by outer.lower[0] so candidates form a prefix.
  std::vector<std::size_t> order(brackets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return brackets[a].outer().lower()[0] < brackets[b].outer().lower()[0];
  });
  std::vector<double> keys(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) keys[i] = brackets[order[i]].outer().lower()[0];

  std::mt19937_64 rng(seed);
  std::vector<double> x(d), y(d);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t k = 0; k < d; ++k) {
      const double u = detail::unit_double(rng), v = detail::unit_double(rng);
      x[k] = std::min(u, v);
      y[k] = std::max(u, v);
    }
    const auto end = std::upper_bound(keys.begin(), keys.end(), x[0]) - keys.begin();
    bool covered = false;
    for (std::ptrdiff_t k = 0; k < end && !covered; ++k) covered = brackets[order[k]].contains(x, y);
    if (!covered) {
      r.coverage_ok = false;
      std::vector<double> w(x);
      w.insert(w.end(), y.begin(), y.end());
      r.uncovered_witness = std::move(w);
      break;
    }
  }
  return r;
}

}  // namespace bracketing
