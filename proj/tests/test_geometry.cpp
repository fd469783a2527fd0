#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bracketing/bracketing.hpp"
#include "oracles.hpp"

using namespace bracketing;

TEST(Point, RejectsCoordinatesOutsideUnitCube) {
  EXPECT_THROW(Point({0.5, 1.5}), std::invalid_argument);
  EXPECT_THROW(Point({-0.1}), std::invalid_argument);
  EXPECT_THROW(Point(std::vector<double>{}), std::invalid_argument);
  EXPECT_DOUBLE_EQ(Point({0.5, 0.4}).volume(), 0.2);
}

TEST(Box, Volume) {
  EXPECT_DOUBLE_EQ(box_volume(Box({0, 0}, {1, 1})), 1.0);
  EXPECT_DOUBLE_EQ(box_volume(Box({0.5, 0.5}, {1, 1})), 0.25);
  EXPECT_DOUBLE_EQ(box_volume(Box({0.3, 0.3}, {0.3, 1})), 0.0);
  EXPECT_THROW(Box({0.6, 0}, {0.5, 1}), std::invalid_argument);
}

TEST(Box, VolumeMonotoneUnderExpansion) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 1000; ++n) {
    double a[4];
    for (auto& v : a) v = u(rng);
    std::sort(a, a + 4);
    double b[4];
    for (auto& v : b) v = u(rng);
    std::sort(b, b + 4);
    const Box inner({a[1], b[1]}, {a[2], b[2]});
    const Box outer({a[0], b[0]}, {a[3], b[3]});
    EXPECT_LE(box_volume(inner), box_volume(outer));
    EXPECT_GE(box_volume(inner), 0.0);
  }
}

TEST(AnchoredBracket, Weight) {
  EXPECT_DOUBLE_EQ(bracket_weight(AnchoredBracket({0.5, 0.5}, {1, 1})), 0.75);
  EXPECT_DOUBLE_EQ(bracket_weight(AnchoredBracket({0, 0}, {0.3, 0.7})), 0.3 * 0.7);
  const double s = std::sqrt(0.75);
  EXPECT_NEAR(bracket_weight(AnchoredBracket({s, s}, {1, 1})), 0.25, 1e-15);
}

TEST(UnanchoredBracket, ContainsAndWeight) {
  const UnanchoredBracket with_inner(Box({0.4, 0.4}, {0.6, 0.6}), Box({0.2, 0.2}, {0.9, 0.9}));
  EXPECT_NEAR(with_inner.weight(), 0.49 - 0.04, 1e-15);
  const std::vector<double> x{0.3, 0.4}, y{0.7, 0.6};
  EXPECT_TRUE(with_inner.contains(x, y));
  const std::vector<double> x_bad{0.5, 0.3};
  EXPECT_FALSE(with_inner.contains(x_bad, y));

  const UnanchoredBracket hull(std::nullopt, Box({0, 0}, {1, 1}));
  EXPECT_DOUBLE_EQ(hull.weight(), 1.0);
  const std::vector<double> a{0.8, 0.1}, b{0.9, 0.2};
  EXPECT_TRUE(hull.contains(a, b));
  EXPECT_FALSE(hull.contains(b, a));

  EXPECT_THROW(UnanchoredBracket(Box({0.1, 0.1}, {0.95, 0.5}), Box({0.2, 0.2}, {0.9, 0.9})),
               std::invalid_argument);
}

TEST(OptimalBracket, UnitCorner) {
  const auto br = optimal_anchored_bracket(Point({1, 1}), 0.25, 2);
  EXPECT_NEAR(br.lo()[0], 0.8660254037844386, 1e-15);
  EXPECT_NEAR(br.lo()[1], 0.8660254037844386, 1e-15);
  EXPECT_NEAR(bracket_weight(br), 0.25, 1e-15);
  EXPECT_NEAR(box_volume(br.corner_box()), oracle::optimal_volume_2d(1.0, 0.25), 1e-15);
  EXPECT_NEAR(oracle::optimal_volume_2d(1.0, 0.25), 0.0179492, 1e-7);
}

TEST(OptimalBracket, SmallCorner) {
  const Point z({0.4, 0.5});
  const auto br = optimal_anchored_bracket(z, 0.25, 2);
  EXPECT_EQ(br.lo(), Point::origin(2));
  EXPECT_TRUE(dominated(z, br.hi()));
  EXPECT_LE(br.hi().volume(), 0.25 + 1e-15);

  const auto at_axis = optimal_anchored_bracket(Point({0.0, 0.7}), 0.25, 2);
  EXPECT_DOUBLE_EQ(at_axis.hi()[0], 0.5);
  EXPECT_DOUBLE_EQ(at_axis.hi()[1], 0.5);
}

TEST(OptimalBracket, SmallCornerClampsAtOne) {
  const auto br = optimal_anchored_bracket(Point({0.9, 0.1}), 0.5, 2);
  EXPECT_DOUBLE_EQ(br.hi()[0], 1.0);
  EXPECT_LE(br.hi().volume(), 0.5 + 1e-15);
  EXPECT_TRUE(br.contains(std::vector<double>{0.9, 0.1}));
}

TEST(OptimalBracket, VolumeMatchesClosedForm) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.3, 1.0);
  for (int n = 0; n < 200; ++n) {
    const Point z({u(rng), u(rng)});
    const double delta = 0.05;
    const auto br = optimal_anchored_bracket(z, delta, 2);
    EXPECT_NEAR(box_volume(br.corner_box()), oracle::optimal_volume_2d(z.volume(), delta), 1e-14);
    EXPECT_NEAR(optimal_bracket_volume(z.volume(), delta, 2), box_volume(br.corner_box()), 1e-14);
  }
}

TEST(Scaling, IdentityAndInverse) {
  const auto c = grid_cover(0.1, 2);
  EXPECT_EQ(scale(c, ScalingMap{1.0, 1.0}), c);
  const ScalingMap m{0.5, 0.8};
  const auto back = scale(scale(c, m), m.inverse());
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t k = 0; k < c.coordinates().size(); ++k)
    EXPECT_NEAR(back.coordinates()[k], c.coordinates()[k], 1e-12);
  EXPECT_NEAR(back.delta(), c.delta(), 1e-15);
}

TEST(Scaling, WeightsScaleByDeterminant) {
  const auto c = layered_cover(0.05);
  const ScalingMap m{0.5, 1.0};
  const auto s = scale(c, m);
  EXPECT_DOUBLE_EQ(s.delta(), 0.025);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(bracket_weight(s.lo(i), s.hi(i)), 0.5 * bracket_weight(c.lo(i), c.hi(i)), 1e-12);
    EXPECT_LE(bracket_weight(s.lo(i), s.hi(i)), 0.5 * 0.05 * (1 + 1e-9));
  }
}

TEST(Scaling, RejectsInvalidMaps) {
  EXPECT_THROW(ScalingMap({1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(scale(grid_cover(0.25, 2), ScalingMap{2.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(scale(grid_cover(0.25, 2), ScalingMap{1.0}), std::invalid_argument);
}

TEST(Scaling, StripeCoverMapsToLayer) {
  const double delta = 0.05;
  const auto sched = layer_schedule(delta);
  for (int i = 0; i < sched.zeta; ++i) {
    const auto layer = layer_stripe_cover(delta, i);
    const auto unit = layer_stripe_cover(sched.deltas[i], 0);
    const double a = sched.as[i];
    ASSERT_EQ(layer.size(), unit.size()) << "layer " << i;
    const auto scaled = scale(layer, ScalingMap{1.0 / a, 1.0 / a});
    EXPECT_NEAR(scaled.delta(), sched.deltas[i], 1e-12);
    for (std::size_t k = 0; k < unit.coordinates().size(); ++k)
      EXPECT_NEAR(scaled.coordinates()[k], unit.coordinates()[k], 1e-12) << "layer " << i;
  }
}

TEST(Method, Names) {
  for (auto m : {Method::grid, Method::thiemard, Method::layered, Method::reoriented, Method::unanchored})
    EXPECT_EQ(method_from_string(to_string(m)), m);
  EXPECT_FALSE(method_from_string("hexagonal"));
}

TEST(Cover, ValidatesBrackets) {
  EXPECT_THROW(Cover::anchored({Method::grid, 0.1, 2, std::nullopt}, {0.5, 0.5, 0.4, 1.0}),
               std::invalid_argument);
  EXPECT_THROW(Cover::anchored({Method::grid, 0.1, 2, std::nullopt}, {0.5, 0.5, 1.0}),
               std::invalid_argument);
  EXPECT_THROW(Cover::anchored({Method::grid, 0.1, 2, std::nullopt}, {0.0, 0.0, 1.0, 1.2}),
               std::invalid_argument);
  const auto c = Cover::anchored({Method::grid, 0.1, 2, std::nullopt}, {0.0, 0.0, 1.0, 1.0});
  EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(c.bracket(0), AnchoredBracket({0, 0}, {1, 1}));
}
