#pragma once

#include <vector>

#include "semistab/rational.hpp"

namespace semistab {

enum class Sense { LE, EQ, GE };
enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPRow {
  RVector a;
  Sense sense;
  Rational rhs;
};

// Dense exact LP: optimize c.x subject to rows, with x_k >= 0 or free per variable.
struct LinearProgram {
  int num_vars = 0;
  std::vector<bool> nonneg;
  std::vector<LPRow> rows;
  RVector objective;
  bool maximize = false;

  explicit LinearProgram(int n = 0) : num_vars(n), nonneg(n, true), objective(n) {}
  void add_row(RVector a, Sense s, Rational rhs) { rows.push_back({std::move(a), s, std::move(rhs)}); }
};

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  RVector x;
  Rational value;
};

// Two-phase primal simplex with Bland's rule; all arithmetic exact.
LPSolution solve_lp(const LinearProgram& lp);

// Lexicographically least optimal point: after optimizing, minimizes x_k for each k
// in `order` in turn while pinning previously fixed values.
LPSolution solve_lp_lexmin(const LinearProgram& lp, const std::vector<int>& order);

}  // namespace semistab
