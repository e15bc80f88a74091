#include "semistab/tileplan.hpp"

#include "semistab/lp.hpp"

namespace semistab {

TilePoint tile_point(const BlockDecomposition& dec, const Tile& T, const Rational& sigma) {
  const int nr = dec.row_group_count(), nc = dec.col_group_count();
  if (T.iL < 0 || T.iR >= nr || T.iL > T.iR || T.jL < 0 || T.jR >= nc || T.jL > T.jR) throw std::invalid_argument("tile outside decomposition");
  int pI = 0, qJ = 0;
  for (int i = T.iL; i <= T.iR; ++i) pI += dec.row_groups[i];
  for (int j = T.jL; j <= T.jR; ++j) qJ += dec.col_groups[j];
  if (pI == 0 || qJ == 0) throw std::invalid_argument("tile covers an empty group range");
  TilePoint pt;
  pt.tile = T;
  pt.tile.sigma = sigma;
  pt.sigma = sigma;
  pt.rows.assign(nr, Rational(0));
  pt.cols.assign(nc, Rational(0));
  for (int i = T.iL; i <= T.iR; ++i) pt.rows[i] = ratio(1, pI);
  for (int j = T.jL; j <= T.jR; ++j) pt.cols[j] = ratio(1, qJ);
  return pt;
}

namespace {

// Variables: theta_0..theta_{k-1}, sigma (free).
LinearProgram plan_lp(const std::vector<TilePoint>& pts, int p, int q) {
  const int k = static_cast<int>(pts.size());
  const int nr = static_cast<int>(pts[0].rows.size()), nc = static_cast<int>(pts[0].cols.size());
  for (const auto& pt : pts)
    if (static_cast<int>(pt.rows.size()) != nr || static_cast<int>(pt.cols.size()) != nc)
      throw std::invalid_argument("tile points come from different decompositions");
  LinearProgram lp(k + 1);
  lp.nonneg[k] = false;
  RVector ones(k + 1);
  for (int e = 0; e < k; ++e) ones[e] = 1;
  lp.add_row(ones, Sense::EQ, 1);
  for (int i = 0; i < nr; ++i) {
    RVector a(k + 1);
    for (int e = 0; e < k; ++e) a[e] = pts[e].rows[i];
    lp.add_row(a, Sense::EQ, ratio(1, p));
  }
  for (int j = 0; j < nc; ++j) {
    RVector a(k + 1);
    for (int e = 0; e < k; ++e) a[e] = pts[e].cols[j];
    lp.add_row(a, Sense::EQ, ratio(1, q));
  }
  RVector a(k + 1);
  for (int e = 0; e < k; ++e) a[e] = pts[e].sigma;
  a[k] = -1;
  lp.add_row(a, Sense::EQ, 0);
  return lp;
}

}  // namespace

std::optional<TilePlan> solve_plan(const std::vector<TilePoint>& points, int p, int q, SigmaMode mode, const Rational& pinned) {
  if (points.empty()) throw std::invalid_argument("solve_plan needs at least one tile point");
  if (p <= 0 || q <= 0) throw std::invalid_argument("p and q must be positive");
  const int k = static_cast<int>(points.size());
  LinearProgram lp = plan_lp(points, p, q);

  lp.objective[k] = 1;
  lp.maximize = false;
  LPSolution lo = solve_lp(lp);
  if (lo.status != LPStatus::Optimal) return std::nullopt;
  lp.maximize = true;
  LPSolution hi = solve_lp(lp);

  TilePlan plan;
  plan.points = points;
  plan.p = p;
  plan.q = q;
  plan.sigma_lo = lo.value;
  plan.sigma_hi = hi.value;
  Rational sigma = mode == SigmaMode::Pinned ? pinned : mode == SigmaMode::Min ? lo.value : hi.value;
  if (sigma < plan.sigma_lo || sigma > plan.sigma_hi) return std::nullopt;

  LinearProgram fixed = plan_lp(points, p, q);
  RVector pin(k + 1);
  pin[k] = 1;
  fixed.add_row(pin, Sense::EQ, sigma);
  std::vector<int> order(k);
  for (int e = 0; e < k; ++e) order[e] = e;
  LPSolution sol = solve_lp_lexmin(fixed, order);
  if (sol.status != LPStatus::Optimal) return std::nullopt;
  plan.theta.assign(sol.x.begin(), sol.x.begin() + k);
  plan.sigma_total = sigma;
  if (sigma > 0) plan.tau = 1 / (p * sigma);
  return plan;
}

RVector plan_residual(const TilePlan& plan) {
  const size_t nr = plan.points.at(0).rows.size(), nc = plan.points.at(0).cols.size();
  RVector r(nr + nc + 2);
  for (size_t e = 0; e < plan.points.size(); ++e) {
    const auto& pt = plan.points[e];
    for (size_t i = 0; i < nr; ++i) r[i] += plan.theta[e] * pt.rows[i];
    for (size_t j = 0; j < nc; ++j) r[nr + j] += plan.theta[e] * pt.cols[j];
    r[nr + nc] += plan.theta[e] * pt.sigma;
    r[nr + nc + 1] += plan.theta[e];
  }
  for (size_t i = 0; i < nr; ++i) r[i] -= ratio(1, plan.p);
  for (size_t j = 0; j < nc; ++j) r[nr + j] -= ratio(1, plan.q);
  r[nr + nc] -= plan.sigma_total;
  r[nr + nc + 1] -= 1;
  return r;
}

json plan_to_json(const TilePlan& plan) {
  json j;
  json th = json::array();
  for (const auto& t : plan.theta) th.push_back(rational_to_json(t));
  j["theta"] = th;
  j["sigma"] = rational_to_json(plan.sigma_total);
  j["tau"] = rational_to_json(plan.tau);
  j["sigma_range"] = {rational_to_json(plan.sigma_lo), rational_to_json(plan.sigma_hi)};
  j["p"] = plan.p;
  j["q"] = plan.q;
  json tiles = json::array();
  for (const auto& pt : plan.points) {
    json t;
    t["I"] = {pt.tile.iL, pt.tile.iR};
    t["J"] = {pt.tile.jL, pt.tile.jR};
    t["sigma"] = rational_to_json(pt.sigma);
    json rows = json::array(), cols = json::array();
    for (const auto& x : pt.rows) rows.push_back(rational_to_json(x));
    for (const auto& x : pt.cols) cols.push_back(rational_to_json(x));
    t["rows"] = rows;
    t["cols"] = cols;
    tiles.push_back(t);
  }
  j["tiles"] = tiles;
  return j;
}

TilePlan plan_from_json(const json& j, const std::string& path) {
  TilePlan plan;
  auto rlist = [&](const json& a, const std::string& where) {
    if (!a.is_array()) throw InputError(where, "expected an array");
    RVector v;
    for (size_t k = 0; k < a.size(); ++k) v.push_back(rational_from_json(a[k], where + "/" + std::to_string(k)));
    return v;
  };
  plan.theta = rlist(field(j, "theta", path), path + "/theta");
  plan.sigma_total = rational_from_json(field(j, "sigma", path), path + "/sigma");
  plan.tau = rational_from_json(field(j, "tau", path), path + "/tau");
  RVector range = rlist(field(j, "sigma_range", path), path + "/sigma_range");
  if (range.size() != 2) throw InputError(path + "/sigma_range", "expected two entries");
  plan.sigma_lo = range[0];
  plan.sigma_hi = range[1];
  plan.p = int_field(j, "p", path);
  plan.q = int_field(j, "q", path);
  const json& tiles = field(j, "tiles", path);
  if (!tiles.is_array() || tiles.size() != plan.theta.size()) throw InputError(path + "/tiles", "expected one tile per theta");
  for (size_t k = 0; k < tiles.size(); ++k) {
    std::string tp = path + "/tiles/" + std::to_string(k);
    const json& t = tiles[k];
    TilePoint pt;
    const json& I = field(t, "I", tp);
    const json& J = field(t, "J", tp);
    if (!I.is_array() || I.size() != 2 || !J.is_array() || J.size() != 2) throw InputError(tp, "I and J must be [lo, hi]");
    pt.tile = {I[0].get<int>(), I[1].get<int>(), J[0].get<int>(), J[1].get<int>(), 0};
    pt.sigma = rational_from_json(field(t, "sigma", tp), tp + "/sigma");
    pt.tile.sigma = pt.sigma;
    pt.rows = rlist(field(t, "rows", tp), tp + "/rows");
    pt.cols = rlist(field(t, "cols", tp), tp + "/cols");
    plan.points.push_back(pt);
  }
  return plan;
}

}  // namespace semistab
