#include "semistab/lp.hpp"

#include <stdexcept>

namespace semistab {

namespace {

class Tableau {
 public:
  Tableau(int m, int n) : m_(m), n_(n), t_(m, RVector(n + 1)), obj_(n + 1), basis_(m, -1) {}

  Rational& at(int i, int j) { return t_[i][j]; }
  Rational& rhs(int i) { return t_[i][n_]; }
  int rows() const { return m_; }
  std::vector<int>& basis() { return basis_; }

  void set_objective(const RVector& c) {
    for (int j = 0; j < n_; ++j) obj_[j] = c[j];
    obj_[n_] = 0;
    for (int i = 0; i < m_; ++i) {
      const Rational f = obj_[basis_[i]];
      if (f == 0) continue;
      for (int j = 0; j <= n_; ++j)
        if (t_[i][j] != 0) obj_[j] -= f * t_[i][j];
    }
  }

  void pivot(int r, int c) {
    Rational inv = 1 / t_[r][c];
    for (int j = 0; j <= n_; ++j)
      if (t_[r][j] != 0) t_[r][j] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || t_[i][c] == 0) continue;
      Rational f = t_[i][c];
      for (int j = 0; j <= n_; ++j)
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
    }
    if (obj_[c] != 0) {
      Rational f = obj_[c];
      for (int j = 0; j <= n_; ++j)
        if (t_[r][j] != 0) obj_[j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  // Minimizes the current objective over columns with allowed[j]; Bland's rule.
  LPStatus optimize(const std::vector<bool>& allowed) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < n_; ++j)
        if (allowed[j] && obj_[j] < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return LPStatus::Optimal;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = t_[i][n_] / t_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return LPStatus::Unbounded;
      pivot(leave, enter);
    }
  }

  // Objective value is -obj_[n] since the row stores c - z.
  Rational value() const { return -obj_[n_]; }

  void drop_row(int r) {
    t_.erase(t_.begin() + r);
    basis_.erase(basis_.begin() + r);
    --m_;
  }

 private:
  int m_, n_;
  std::vector<RVector> t_;
  RVector obj_;
  std::vector<int> basis_;
};

}  // namespace

LPSolution solve_lp(const LinearProgram& lp) {
  const int nv = lp.num_vars;
  if (static_cast<int>(lp.nonneg.size()) != nv || static_cast<int>(lp.objective.size()) != nv)
    throw std::invalid_argument("LP variable metadata has wrong size");
  for (const auto& r : lp.rows)
    if (static_cast<int>(r.a.size()) != nv) throw std::invalid_argument("LP row has wrong length");

  // Column layout: structural (free variables split), slacks, artificials.
  std::vector<int> pos_col(nv), neg_col(nv, -1);
  int n = 0;
  for (int k = 0; k < nv; ++k) {
    pos_col[k] = n++;
    if (!lp.nonneg[k]) neg_col[k] = n++;
  }
  const int n_struct = n;
  const int m = static_cast<int>(lp.rows.size());
  std::vector<int> slack_col(m, -1);
  for (int i = 0; i < m; ++i)
    if (lp.rows[i].sense != Sense::EQ) slack_col[i] = n++;
  const int first_art = n;
  n += m;

  Tableau T(m, n);
  for (int i = 0; i < m; ++i) {
    const LPRow& row = lp.rows[i];
    bool flip = row.rhs < 0;
    Rational sgn = flip ? -1 : 1;
    for (int k = 0; k < nv; ++k) {
      if (row.a[k] == 0) continue;
      T.at(i, pos_col[k]) = sgn * row.a[k];
      if (neg_col[k] >= 0) T.at(i, neg_col[k]) = -sgn * row.a[k];
    }
    if (slack_col[i] >= 0) T.at(i, slack_col[i]) = sgn * (row.sense == Sense::LE ? 1 : -1);
    T.at(i, first_art + i) = 1;
    T.rhs(i) = sgn * row.rhs;
    T.basis()[i] = first_art + i;
  }

  RVector phase1(n);
  for (int j = first_art; j < n; ++j) phase1[j] = 1;
  T.set_objective(phase1);
  std::vector<bool> allowed(n, true);
  T.optimize(allowed);
  LPSolution sol;
  if (T.value() != 0) {
    sol.status = LPStatus::Infeasible;
    return sol;
  }
  // Drive remaining artificials out of the basis or drop redundant rows.
  for (int i = 0; i < T.rows();) {
    if (T.basis()[i] < first_art) {
      ++i;
      continue;
    }
    int c = -1;
    for (int j = 0; j < first_art; ++j)
      if (T.at(i, j) != 0) {
        c = j;
        break;
      }
    if (c >= 0) {
      T.pivot(i, c);
      ++i;
    } else {
      T.drop_row(i);
    }
  }
  for (int j = first_art; j < n; ++j) allowed[j] = false;
  RVector cost(n);
  for (int k = 0; k < nv; ++k) {
    Rational c = lp.maximize ? -lp.objective[k] : lp.objective[k];
    cost[pos_col[k]] = c;
    if (neg_col[k] >= 0) cost[neg_col[k]] = -c;
  }
  T.set_objective(cost);
  LPStatus st = T.optimize(allowed);
  if (st == LPStatus::Unbounded) {
    sol.status = st;
    return sol;
  }
  RVector col_val(n_struct);
  for (int i = 0; i < T.rows(); ++i)
    if (T.basis()[i] < n_struct) col_val[T.basis()[i]] = T.rhs(i);
  sol.status = LPStatus::Optimal;
  sol.x.assign(nv, Rational(0));
  for (int k = 0; k < nv; ++k) {
    sol.x[k] = col_val[pos_col[k]];
    if (neg_col[k] >= 0) sol.x[k] -= col_val[neg_col[k]];
  }
  sol.value = 0;
  for (int k = 0; k < nv; ++k) sol.value += lp.objective[k] * sol.x[k];
  return sol;
}

LPSolution solve_lp_lexmin(const LinearProgram& lp, const std::vector<int>& order) {
  LPSolution first = solve_lp(lp);
  if (first.status != LPStatus::Optimal) return first;
  LinearProgram pinned = lp;
  bool has_objective = false;
  for (const auto& c : lp.objective)
    if (c != 0) has_objective = true;
  if (has_objective) pinned.add_row(lp.objective, Sense::EQ, first.value);
  pinned.maximize = false;
  LPSolution cur = first;
  for (int k : order) {
    pinned.objective.assign(lp.num_vars, Rational(0));
    pinned.objective[k] = 1;
    cur = solve_lp(pinned);
    if (cur.status != LPStatus::Optimal) throw std::logic_error("lexicographic refinement lost feasibility");
    RVector e(lp.num_vars);
    e[k] = 1;
    pinned.add_row(e, Sense::EQ, cur.x[k]);
  }
  cur.value = 0;
  for (int k = 0; k < lp.num_vars; ++k) cur.value += lp.objective[k] * cur.x[k];
  return cur;
}

}  // namespace semistab
