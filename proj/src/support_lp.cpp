#include <set>

#include "semistab/gitnorm.hpp"
#include "semistab/lp.hpp"

namespace semistab {

LogWeights RationalWeights::to_log() const {
  LogWeights w;
  w.wp.resize(wp.size());
  w.wq.resize(wq.size());
  w.wd.resize(wd.size());
  for (size_t k = 0; k < wp.size(); ++k) w.wp(k) = wp[k].get_d();
  for (size_t k = 0; k < wq.size(); ++k) w.wq(k) = wq[k].get_d();
  for (size_t k = 0; k < wd.size(); ++k) w.wd(k) = wd[k].get_d();
  return w;
}

RVector balanced_target(int p, int q, int d, const Rational& sigma) {
  RVector t(p + q + d);
  for (int i = 0; i < p; ++i) t[i] = ratio(1, p);
  for (int j = 0; j < q; ++j) t[p + j] = ratio(1, q);
  for (int k = 0; k < d; ++k) t[p + q + k] = sigma;
  return t;
}

namespace {

// Convex-combination constraints: sum theta = 1, sum theta v_e = target.
LinearProgram membership_lp(const SupportSet& E, const RVector& target, int extra_vars) {
  const int n = static_cast<int>(E.size());
  const int dim = E.p + E.q + E.d;
  LinearProgram lp(n + extra_vars);
  RVector ones(n + extra_vars);
  for (int e = 0; e < n; ++e) ones[e] = 1;
  lp.add_row(ones, Sense::EQ, 1);
  std::vector<RVector> pts;
  for (int e = 0; e < n; ++e) pts.push_back(E.weight_point(e));
  for (int c = 0; c < dim; ++c) {
    RVector a(n + extra_vars);
    for (int e = 0; e < n; ++e) a[e] = pts[e][c];
    lp.add_row(a, Sense::EQ, target[c]);
  }
  return lp;
}

std::optional<Destabilizer> max_margin(const SupportSet& E, const Rational& sigma, bool special_linear) {
  const int p = E.p, q = E.q, d = E.d, n = p + q + d;
  // Variables: w (n, free), m (free). Maximize m.
  LinearProgram lp(n + 1);
  for (int k = 0; k <= n; ++k) lp.nonneg[k] = false;
  lp.objective[n] = 1;
  lp.maximize = true;
  for (size_t e = 0; e < E.size(); ++e) {
    RVector a = E.weight_point(e);
    for (int k = 0; k < d; ++k) a[p + q + k] -= sigma;
    a.push_back(1);
    lp.add_row(a, Sense::LE, 0);
  }
  RVector sp(n + 1), sq(n + 1), sd(n + 1);
  for (int i = 0; i < p; ++i) sp[i] = 1;
  for (int j = 0; j < q; ++j) sq[p + j] = 1;
  for (int k = 0; k < d; ++k) sd[p + q + k] = 1;
  lp.add_row(sp, Sense::EQ, 0);
  lp.add_row(sq, Sense::EQ, 0);
  if (special_linear) lp.add_row(sd, Sense::EQ, 0);
  for (int k = 0; k < n; ++k) {
    RVector a(n + 1);
    a[k] = 1;
    lp.add_row(a, Sense::LE, 1);
    lp.add_row(a, Sense::GE, -1);
  }
  LPSolution sol = solve_lp(lp);
  if (sol.status != LPStatus::Optimal || sol.x[n] <= 0) return std::nullopt;
  Destabilizer D;
  D.w.wp.assign(sol.x.begin(), sol.x.begin() + p);
  D.w.wq.assign(sol.x.begin() + p, sol.x.begin() + p + q);
  D.w.wd.assign(sol.x.begin() + p + q, sol.x.begin() + n);
  D.margin = sol.x[n];
  D.special_linear = special_linear;
  return D;
}

Destabilizer trivial_destabilizer(const SupportSet& E) {
  Destabilizer D;
  D.w.wp.assign(E.p, Rational(0));
  D.w.wq.assign(E.q, Rational(0));
  D.w.wd.assign(E.d, Rational(0));
  D.margin = 1;
  D.special_linear = true;
  D.trivial = true;
  return D;
}

}  // namespace

MembershipResult polytope_membership(const SupportSet& E, const Rational& sigma) {
  MembershipResult res;
  if (E.empty()) {
    res.separator = trivial_destabilizer(E);
    return res;
  }
  LinearProgram lp = membership_lp(E, balanced_target(E.p, E.q, E.d, sigma), 0);
  LPSolution sol = solve_lp(lp);
  if (sol.status == LPStatus::Optimal) {
    res.member = true;
    res.coefficients = sol.x;
    return res;
  }
  res.separator = max_margin(E, sigma, false);
  return res;
}

std::optional<Destabilizer> find_destabilizer(const SupportSet& E, const Rational& sigma) {
  if (E.empty()) return trivial_destabilizer(E);
  if (auto D = max_margin(E, sigma, true)) return D;
  return max_margin(E, sigma, false);
}

bool verify_destabilizer(const SupportSet& E, const Rational& sigma, const Destabilizer& D) {
  if (static_cast<int>(D.w.wp.size()) != E.p || static_cast<int>(D.w.wq.size()) != E.q || static_cast<int>(D.w.wd.size()) != E.d)
    return false;
  if (D.margin <= 0) return false;
  Rational sp = 0, sq = 0, sd = 0;
  for (const auto& x : D.w.wp) sp += x;
  for (const auto& x : D.w.wq) sq += x;
  for (const auto& x : D.w.wd) sd += x;
  if (sp != 0 || sq != 0) return false;
  if (D.special_linear && sd != 0) return false;
  for (const auto& t : E.triples) {
    Rational s = D.w.wp[t.i] + D.w.wq[t.j];
    for (int k = 0; k < E.d; ++k) s += D.w.wd[k] * (t.alpha[k] - sigma);
    if (s > -D.margin) return false;
  }
  return true;
}

bool sparse_hypotheses(const PolyMatrix& P, std::string* reason) {
  auto fail = [&](const std::string& r) {
    if (reason) *reason = r;
    return false;
  };
  // Hypothesis 1: for each alpha, at most one nonzero per row and per column.
  std::map<Multiindex, std::set<int>, GradedLex> rows_used, cols_used;
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j)
      for (const auto& kv : P(i, j).terms()) {
        if (!rows_used[kv.first].insert(i).second)
          return fail("monomial " + format_multiindex(kv.first) + " appears twice in row " + std::to_string(i));
        if (!cols_used[kv.first].insert(j).second)
          return fail("monomial " + format_multiindex(kv.first) + " appears twice in column " + std::to_string(j));
      }
  // Hypothesis 2: no two multiindices of one entry differ by e^k - e^k'.
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j) {
      const auto& terms = P(i, j).terms();
      for (auto a = terms.begin(); a != terms.end(); ++a)
        for (auto b = std::next(a); b != terms.end(); ++b) {
          int plus = 0, minus = 0;
          bool other = false;
          for (size_t k = 0; k < a->first.size(); ++k) {
            int diff = a->first[k] - b->first[k];
            if (diff == 1)
              ++plus;
            else if (diff == -1)
              ++minus;
            else if (diff != 0)
              other = true;
          }
          if (!other && plus == 1 && minus == 1)
            return fail("entry (" + std::to_string(i) + "," + std::to_string(j) + ") has multiindices " + format_multiindex(a->first) +
                        " and " + format_multiindex(b->first) + " differing by e^k - e^k'");
        }
    }
  return true;
}

SparseVerdict sparse_criterion(const PolyMatrix& P, const Rational& sigma) {
  SparseVerdict v;
  v.applicable = sparse_hypotheses(P, &v.reason);
  if (!v.applicable) return v;
  SupportSet E = support_set(P);
  if (E.empty()) {
    v.reason = "zero matrix";
    return v;
  }
  RVector target = balanced_target(E.p, E.q, E.d, sigma);
  LPSolution sol = solve_lp(membership_lp(E, target, 0));
  if (sol.status != LPStatus::Optimal) {
    v.reason = "balanced point outside the Newton polytope";
    return v;
  }
  v.positive = true;
  for (size_t e = 0; e < E.size(); ++e) v.theta.push_back({E.triples[e], sol.x[e]});
  // Max-min LP: maximize t subject to theta_e >= t.
  const int n = static_cast<int>(E.size());
  LinearProgram lp = membership_lp(E, target, 1);
  lp.nonneg[n] = false;
  lp.objective[n] = 1;
  lp.maximize = true;
  for (int e = 0; e < n; ++e) {
    RVector a(n + 1);
    a[e] = 1;
    a[n] = -1;
    lp.add_row(a, Sense::GE, 0);
  }
  LPSolution mm = solve_lp(lp);
  v.strictly_positive_theta = mm.status == LPStatus::Optimal && mm.x[n] > 0;
  return v;
}

SigmaInterval feasible_sigma_interval(const SupportSet& E) {
  if (E.d == 0) throw std::invalid_argument("sigma interval needs at least one variable");
  SigmaInterval out;
  if (E.empty()) return out;
  const int n = static_cast<int>(E.size());
  LinearProgram lp = membership_lp(E, balanced_target(E.p, E.q, E.d, 0), 1);
  lp.nonneg[n] = false;
  // Variable rows currently read sum theta alpha_k = 0; move sigma to the left side.
  for (int k = 0; k < E.d; ++k) lp.rows[1 + E.p + E.q + k].a[n] = -1;
  lp.objective[n] = 1;
  lp.maximize = false;
  LPSolution lo = solve_lp(lp);
  if (lo.status != LPStatus::Optimal) return out;
  lp.maximize = true;
  LPSolution hi = solve_lp(lp);
  out.feasible = true;
  out.lo = lo.x[n];
  out.hi = hi.x[n];
  return out;
}

}  // namespace semistab
