#pragma once

#include <optional>
#include <vector>

#include "semistab/blockdecomp.hpp"
#include "semistab/json_io.hpp"

namespace semistab {

// Group-indexed barycentric marker of a tile: rows 1_I/p_I, columns 1_J/q_J, then sigma.
struct TilePoint {
  Tile tile;
  RVector rows, cols;
  Rational sigma;
};

TilePoint tile_point(const BlockDecomposition& dec, const Tile& T, const Rational& sigma);

enum class SigmaMode { Pinned, Min, Max };

struct TilePlan {
  std::vector<TilePoint> points;
  RVector theta;
  Rational sigma_total, tau;
  // Feasible sigma range over all convex combinations hitting the target.
  Rational sigma_lo, sigma_hi;
  int p = 0, q = 0;
};

// Solves for theta >= 0, sum theta = 1, sum theta_k point_k = (1/p; 1/q; sigma).
// Returns nullopt when the target is outside the convex hull (or the pinned sigma is infeasible).
std::optional<TilePlan> solve_plan(const std::vector<TilePoint>& points, int p, int q, SigmaMode mode = SigmaMode::Max,
                                   const Rational& pinned = 0);

// Exact residual of the plan identity; zero vector when the plan is consistent.
RVector plan_residual(const TilePlan& plan);

json plan_to_json(const TilePlan& plan);
TilePlan plan_from_json(const json& j, const std::string& path = "");

}  // namespace semistab
