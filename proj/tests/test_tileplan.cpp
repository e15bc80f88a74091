#include <gtest/gtest.h>

#include <random>

#include "semistab/gitnorm.hpp"
#include "semistab/json_io.hpp"
#include "semistab/tileplan.hpp"

using namespace semistab;

namespace {

BlockDecomposition groups(std::vector<int> rows, std::vector<int> cols) {
  BlockDecomposition dec;
  dec.row_groups = std::move(rows);
  dec.col_groups = std::move(cols);
  dec.D.assign(dec.row_groups.size(), std::vector<int>(dec.col_groups.size(), 0));
  return dec;
}

RVector R(std::initializer_list<Rational> v) { return RVector(v); }

std::vector<TilePoint> worked_example_points() {
  BlockDecomposition dec = groups({2, 2}, {4, 4, 1});
  return {tile_point(dec, {0, 1, 0, 0}, 0), tile_point(dec, {0, 1, 1, 1}, ratio(1, 2)), tile_point(dec, {0, 0, 2, 2}, 1),
          tile_point(dec, {1, 1, 2, 2}, ratio(3, 2))};
}

}  // namespace

TEST(TilePoint, Examples) {
  BlockDecomposition dec = groups({2, 2}, {4, 4, 1});
  TilePoint a = tile_point(dec, {0, 1, 0, 0}, 0);
  EXPECT_EQ(a.rows, R({ratio(1, 4), ratio(1, 4)}));
  EXPECT_EQ(a.cols, R({ratio(1, 4), 0, 0}));
  EXPECT_EQ(a.sigma, 0);
  TilePoint b = tile_point(dec, {1, 1, 2, 2}, ratio(3, 2));
  EXPECT_EQ(b.rows, R({0, ratio(1, 2)}));
  EXPECT_EQ(b.cols, R({0, 0, 1}));
  EXPECT_EQ(b.sigma, ratio(3, 2));
  TilePoint full = tile_point(dec, {0, 1, 0, 2}, ratio(7, 5));
  EXPECT_EQ(full.rows, R({ratio(1, 4), ratio(1, 4)}));
  EXPECT_EQ(full.cols, R({ratio(1, 9), ratio(1, 9), ratio(1, 9)}));
  EXPECT_THROW(tile_point(dec, {0, 2, 0, 0}, 0), std::invalid_argument);
}

TEST(SolvePlan, WorkedExample) {
  auto plan = solve_plan(worked_example_points(), 4, 9, SigmaMode::Pinned, ratio(13, 36));
  ASSERT_TRUE(plan);
  EXPECT_EQ(plan->theta, R({ratio(4, 9), ratio(4, 9), ratio(1, 18), ratio(1, 18)}));
  EXPECT_EQ(plan->sigma_total, ratio(13, 36));
  EXPECT_EQ(plan->tau, ratio(9, 13));
  EXPECT_LE(plan->sigma_lo, ratio(13, 36));
  EXPECT_GE(plan->sigma_hi, ratio(13, 36));
  for (const auto& r : plan_residual(*plan)) EXPECT_EQ(r, 0);
}

TEST(SolvePlan, ModelPair) {
  // (p, q, d) = (2, 3, 1): columns split as (p, q - p).
  BlockDecomposition dec = groups({2}, {2, 1});
  std::vector<TilePoint> pts{tile_point(dec, {0, 0, 0, 0}, 0), tile_point(dec, {0, 0, 1, 1}, 1)};
  auto plan = solve_plan(pts, 2, 3);
  ASSERT_TRUE(plan);
  EXPECT_EQ(plan->theta, R({ratio(2, 3), ratio(1, 3)}));
  EXPECT_EQ(plan->sigma_total, ratio(1, 3));
  EXPECT_EQ(plan->tau, ratio(3, 2));
  EXPECT_EQ(plan->sigma_lo, plan->sigma_hi);
}

TEST(SolvePlan, Infeasible) {
  BlockDecomposition dec = groups({2}, {2, 1});
  EXPECT_FALSE(solve_plan({tile_point(dec, {0, 0, 0, 0}, 0)}, 2, 3));
  auto pinned = solve_plan(worked_example_points(), 4, 9, SigmaMode::Pinned, Rational(5));
  EXPECT_FALSE(pinned);
  EXPECT_THROW(solve_plan({}, 4, 9), std::invalid_argument);
}

TEST(SolvePlan, MinAndMaxModesBracketPinned) {
  auto pts = worked_example_points();
  auto lo = solve_plan(pts, 4, 9, SigmaMode::Min), hi = solve_plan(pts, 4, 9, SigmaMode::Max);
  ASSERT_TRUE(lo && hi);
  EXPECT_EQ(lo->sigma_total, lo->sigma_lo);
  EXPECT_EQ(hi->sigma_total, hi->sigma_hi);
  EXPECT_LE(lo->sigma_total, hi->sigma_total);
}

TEST(SolvePlan, JsonRoundTrip) {
  auto plan = solve_plan(worked_example_points(), 4, 9, SigmaMode::Pinned, ratio(13, 36));
  ASSERT_TRUE(plan);
  TilePlan back = plan_from_json(plan_to_json(*plan));
  EXPECT_EQ(back.theta, plan->theta);
  EXPECT_EQ(back.tau, plan->tau);
  EXPECT_EQ(back.sigma_total, plan->sigma_total);
  ASSERT_EQ(back.points.size(), plan->points.size());
  for (size_t k = 0; k < back.points.size(); ++k) {
    EXPECT_EQ(back.points[k].tile, plan->points[k].tile);
    EXPECT_EQ(back.points[k].rows, plan->points[k].rows);
  }
  json bad = plan_to_json(*plan);
  bad["tiles"].erase(0);
  EXPECT_THROW(plan_from_json(bad), InputError);
}

TEST(Properties, PlanIsExactAndTauConsistent) {
  std::mt19937_64 rng(13);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> rg, cg;
    for (int k = 0, n = 1 + static_cast<int>(rng() % 3); k < n; ++k) rg.push_back(1 + static_cast<int>(rng() % 3));
    for (int k = 0, n = 1 + static_cast<int>(rng() % 3); k < n; ++k) cg.push_back(1 + static_cast<int>(rng() % 3));
    int p = 0, q = 0;
    for (int x : rg) p += x;
    for (int x : cg) q += x;
    BlockDecomposition dec = groups(rg, cg);
    std::vector<TilePoint> pts;
    pts.push_back(tile_point(dec, {0, static_cast<int>(rg.size()) - 1, 0, static_cast<int>(cg.size()) - 1}, ratio(1, 1 + rng() % 4)));
    for (int k = 0; k < 4; ++k) {
      int iL = static_cast<int>(rng() % rg.size()), jL = static_cast<int>(rng() % cg.size());
      int iR = iL + static_cast<int>(rng() % (rg.size() - iL)), jR = jL + static_cast<int>(rng() % (cg.size() - jL));
      pts.push_back(tile_point(dec, {iL, iR, jL, jR}, ratio(static_cast<long>(rng() % 7), 2)));
    }
    auto plan = solve_plan(pts, p, q);
    if (!plan) continue;
    ++solved;
    for (const auto& r : plan_residual(*plan)) EXPECT_EQ(r, 0);
    for (const auto& t : plan->theta) EXPECT_GE(t, 0);
    if (plan->sigma_total > 0) EXPECT_EQ(plan->tau * p * plan->sigma_total, 1);
  }
  EXPECT_GT(solved, 20);
}

TEST(Properties, DegenerateExampleFeasibleInterval) {
  // Realized through the support points of the full tile map.
  PolyMatrix P = polymatrix_from_json(read_json_file(std::string(SEMISTAB_FIXTURES) + "/sec63.json")["P"], "/P");
  SigmaInterval iv = feasible_sigma_interval(support_set(P));
  ASSERT_TRUE(iv.feasible);
  EXPECT_LE(iv.lo, ratio(3, 16));
  EXPECT_GE(iv.hi, ratio(5, 24));
}

TEST(Properties, ModelPairExponentFormula) {
  for (int p = 1; p <= 4; ++p)
    for (int q = p + 1; q <= 7; ++q)
      for (int d = 1; d <= 3; ++d) {
        BlockDecomposition dec = groups({p}, {p, q - p});
        auto plan = solve_plan({tile_point(dec, {0, 0, 0, 0}, 0), tile_point(dec, {0, 0, 1, 1}, ratio(1, d))}, p, q);
        ASSERT_TRUE(plan);
        EXPECT_EQ(plan->tau, ratio(d * q, (q - p) * p)) << p << " " << q << " " << d;
      }
}
