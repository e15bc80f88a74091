// Command-line front end: one verb per analysis, JSON in, table on stdout, JSON report via --out.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "semistab/frames.hpp"
#include "semistab/radon.hpp"
#include "semistab/sublevel.hpp"

using namespace semistab;

namespace {

constexpr int kDecisive = 0, kInputError = 1, kUndetermined = 2;

struct Options {
  std::string input, out;
  std::string sigma, tau;
  uint64_t seed = 0;
  uint64_t samples = 100000;
  int restarts = 64;
  double scale_max = 0;
  int threads = 1;
  bool verify = false;
  bool exponents = false;
  int n = 0, n1 = 0, k = 0;
  int omegas = 1;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string pad(const std::string& s, size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

void row(const std::string& key, const std::string& value) { std::cout << pad(key, 16) << value << "\n"; }

Rational parse_flag_rational(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--") + flag, e.what());
  }
}

Rational require_sigma(const Options& o) {
  if (o.sigma.empty()) throw InputError("--sigma", "this verb needs --sigma");
  return parse_flag_rational(o.sigma, "sigma");
}

json load_input(const Options& o) {
  if (o.input.empty()) throw InputError("--input", "no input file given");
  return read_json_file(o.input);
}

// Accepts either a bare PolyMatrix or an object with a "P" member.
PolyMatrix load_polymatrix(const json& j) {
  if (j.is_object() && j.contains("P") && !j.contains("entries")) return polymatrix_from_json(j["P"], "/P");
  return polymatrix_from_json(j, "");
}

GitOptions git_options(const Options& o) {
  GitOptions g;
  g.restarts = o.restarts;
  g.seed = o.seed;
  g.threads = o.threads;
  return g;
}

void write_report(const Options& o, const json& report) {
  if (o.out.empty()) return;
  std::ofstream f(o.out);
  if (!f) throw InputError(o.out, "cannot open output file");
  f << report.dump(2) << "\n";
}

std::string vec_string(const RVector& v) {
  std::string s = "(";
  for (size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + to_string(v[k]);
  return s + ")";
}

void print_matrix(const PolyMatrix& P, const std::string& var) {
  std::vector<std::vector<std::string>> cells(P.rows(), std::vector<std::string>(P.cols()));
  size_t w = 1;
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j) {
      cells[i][j] = format_poly(P(i, j), var);
      w = std::max(w, cells[i][j].size());
    }
  for (const auto& r : cells) {
    std::cout << "  [";
    for (size_t j = 0; j < r.size(); ++j) std::cout << (j ? "  " : " ") << std::string(w - r[j].size(), ' ') << r[j];
    std::cout << " ]\n";
  }
}

void print_int_table(const std::vector<std::vector<int>>& D) {
  for (const auto& r : D) {
    std::cout << "  [";
    for (size_t j = 0; j < r.size(); ++j) std::cout << (j ? " " : "") << std::setw(3) << r[j];
    std::cout << " ]\n";
  }
}

std::string d_string(const std::vector<std::vector<int>>& D) {
  std::string s = "[";
  for (size_t i = 0; i < D.size(); ++i) {
    s += i ? ",[" : "[";
    for (size_t j = 0; j < D[i].size(); ++j) s += (j ? "," : "") + std::to_string(D[i][j]);
    s += "]";
  }
  return s + "]";
}

std::string tile_string(const Tile& t) {
  return "[" + std::to_string(t.iL) + "," + std::to_string(t.iR) + "]x[" + std::to_string(t.jL) + "," + std::to_string(t.jR) + "]";
}

int cmd_hsnorm(const Options& o) {
  PolyMatrix P = load_polymatrix(load_input(o));
  Rational sq = hs_norm_squared_exact(P);
  row("hs_norm", fmt("%.6f", hs_norm(P)));
  row("hs_norm^2", to_string(sq));
  write_report(o, {{"hs_norm", hs_norm(P)}, {"hs_norm_squared", rational_to_json(sq)}});
  return kDecisive;
}

int cmd_gitnorm(const Options& o) {
  PolyMatrix P = load_polymatrix(load_input(o));
  Rational sigma = require_sigma(o);
  GitEstimate est = git_norm(P, sigma, git_options(o));
  row("value", fmt("%.6f", est.value));
  row("status", to_string(est.status));
  row("residual", fmt("%.3e", est.foc_residual));
  row("sigma", to_string(sigma));
  json w;
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  w["rows"] = vec(est.w.wp);
  w["cols"] = vec(est.w.wq);
  w["vars"] = vec(est.w.wd);
  write_report(o, {{"value", est.value}, {"status", to_string(est.status)}, {"certificate", {{"log_weights", w}, {"foc_residual", est.foc_residual}}}});
  return est.status == GitStatus::BudgetExhausted ? kUndetermined : kDecisive;
}

int cmd_semistable(const Options& o) {
  PolyMatrix P = load_polymatrix(load_input(o));
  Rational sigma = o.sigma.empty() ? ratio(1, std::max(1, P.dim())) : parse_flag_rational(o.sigma, "sigma");
  VerdictOptions vo;
  vo.seed = o.seed;
  vo.git = git_options(o);
  SemistabilityVerdict v = semistability_verdict(P, sigma, vo);
  row("state", to_string(v.state));
  row("method", v.method);
  row("sigma", to_string(sigma));
  if (v.state == VerdictState::Unstable && v.destabilizer) {
    row("frame", v.frame_label);
    row("row weights", vec_string(v.destabilizer->w.wp));
    row("col weights", vec_string(v.destabilizer->w.wq));
    row("var weights", vec_string(v.destabilizer->w.wd));
    row("margin", to_string(v.destabilizer->margin));
    row("verified", verify_unstable_certificate(P, v) ? "yes" : "no");
  }
  if (v.method == "descent" || v.method == "none") {
    row("value", fmt("%.6f", v.value));
    row("residual", fmt("%.3e", v.residual));
  }
  write_report(o, verdict_to_json(v));
  return v.state == VerdictState::Undetermined ? kUndetermined : kDecisive;
}

json destabilizer_json(const Destabilizer& D) {
  auto vec = [](const RVector& x) {
    json a = json::array();
    for (const auto& r : x) a.push_back(rational_to_json(r));
    return a;
  };
  return {{"rows", vec(D.w.wp)}, {"cols", vec(D.w.wq)}, {"vars", vec(D.w.wd)}, {"margin", rational_to_json(D.margin)},
          {"special_linear", D.special_linear}};
}

int cmd_destabilize(const Options& o) {
  PolyMatrix P = load_polymatrix(load_input(o));
  Rational sigma = require_sigma(o);
  auto D = find_destabilizer(support_set(P), sigma);
  if (!D) {
    row("destabilizer", "none in this frame");
    write_report(o, {{"destabilizer", nullptr}});
    return kUndetermined;
  }
  row("row weights", vec_string(D->w.wp));
  row("col weights", vec_string(D->w.wq));
  row("var weights", vec_string(D->w.wd));
  row("margin", to_string(D->margin));
  row("special linear", D->special_linear ? "yes" : "no");
  write_report(o, {{"destabilizer", destabilizer_json(*D)}});
  return kDecisive;
}

int cmd_polytope(const Options& o) {
  PolyMatrix P = load_polymatrix(load_input(o));
  Rational sigma = require_sigma(o);
  SupportSet E = support_set(P);
  MembershipResult m = polytope_membership(E, sigma);
  json rep;
  row("support size", std::to_string(E.size()));
  row("member", m.member ? "yes" : "no");
  rep["member"] = m.member;
  if (m.member) {
    json coeffs = json::array();
    for (size_t e = 0; e < E.size(); ++e) {
      if (m.coefficients[e] == 0) continue;
      const auto& t = E.triples[e];
      std::cout << "  " << pad("(" + std::to_string(t.i) + "," + std::to_string(t.j) + "," + format_multiindex(t.alpha) + ")", 24)
                << to_string(m.coefficients[e]) << "\n";
      coeffs.push_back({{"i", t.i}, {"j", t.j}, {"alpha", multiindex_to_json(t.alpha)}, {"theta", rational_to_json(m.coefficients[e])}});
    }
    rep["coefficients"] = coeffs;
  } else if (m.separator) {
    row("separator", vec_string(m.separator->w.wp) + " " + vec_string(m.separator->w.wq) + " " + vec_string(m.separator->w.wd));
    row("margin", to_string(m.separator->margin));
    rep["separator"] = destabilizer_json(*m.separator);
  }
  if (E.d > 0 && !E.empty()) {
    SigmaInterval iv = feasible_sigma_interval(E);
    if (iv.feasible) {
      row("sigma range", "[" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]");
      rep["sigma_range"] = {rational_to_json(iv.lo), rational_to_json(iv.hi)};
    } else {
      row("sigma range", "empty");
    }
  }
  write_report(o, rep);
  return kDecisive;
}

struct Analysis {
  PolyMatrix M;
  BlockDecomposition dec;
  PolyMatrix R;
  bool supplied = false;
};

Analysis analyze(const json& j) {
  Analysis a;
  a.M = polymatrix_from_json(field(j, "M", ""), "/M");
  if (j.contains("decomposition")) {
    a.dec = decomposition_from_json(j["decomposition"], "/decomposition");
    a.R = reduced_matrix(a.M, a.dec.A, a.dec.B);
    a.supplied = true;
  } else {
    EliminationResult e = eliminate(a.M);
    a.dec = e.decomposition;
    a.R = e.R;
  }
  return a;
}

std::string groups_string(const std::vector<int>& g) {
  std::string s = "(";
  for (size_t k = 0; k < g.size(); ++k) s += (k ? "," : "") + std::to_string(g[k]);
  return s + ")";
}

int cmd_blockdecomp(const Options& o) {
  json j = load_input(o);
  if (o.verify) {
    if (!j.contains("decomposition")) throw InputError("/decomposition", "--verify needs a decomposition in the input");
    PolyMatrix M = polymatrix_from_json(field(j, "M", ""), "/M");
    BlockDecomposition dec = decomposition_from_json(j["decomposition"], "/decomposition");
    VerificationReport rep = verify_block_decomposition(M, dec);
    std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
    row("row groups", groups_string(dec.row_groups));
    row("col groups", groups_string(dec.col_groups));
    row("D", d_string(dec.D));
    print_int_table(dec.D);
    for (const auto& v : rep.violations) {
      std::string where = v.block_i >= 0 ? "block (" + std::to_string(v.block_i) + "," + std::to_string(v.block_j) + ") " : "";
      std::cout << "  violation: " << v.kind << " " << where << v.detail << "\n";
    }
    write_report(o, report_to_json(rep));
    return rep.pass ? kDecisive : kUndetermined;
  }
  Analysis a = analyze(j);
  row("row groups", groups_string(a.dec.row_groups));
  row("col groups", groups_string(a.dec.col_groups));
  row("D", d_string(a.dec.D));
  print_int_table(a.dec.D);
  std::cout << "reduced matrix (s, z = t - s):\n";
  print_matrix(a.R, "x");
  json rep = decomposition_to_json(a.dec);
  rep["R"] = polymatrix_to_json(a.R);
  write_report(o, rep);
  return kDecisive;
}

RVector base_point(const json& j, int d) {
  RVector t0(d);
  if (j.contains("t0")) {
    const json& a = j["t0"];
    if (!a.is_array() || static_cast<int>(a.size()) != d) throw InputError("/t0", "expected an array of length " + std::to_string(d));
    for (int k = 0; k < d; ++k) t0[k] = rational_from_json(a[k], "/t0/" + std::to_string(k));
  }
  return t0;
}

// Homogeneous tiles with their natural sigma (tile degree / d).
std::vector<TilePoint> homogeneous_points(const Analysis& a) {
  std::vector<TilePoint> pts;
  const int d = a.M.dim();
  for (const Tile& T : homogeneous_tiles(a.R, a.dec)) pts.push_back(tile_point(a.dec, T, ratio(a.dec.D[T.iL][T.jL], d)));
  return pts;
}

int cmd_tiles(const Options& o) {
  json j = load_input(o);
  Analysis a = analyze(j);
  RVector t0 = base_point(j, a.M.dim());
  json rep;
  json useful = json::array();
  std::cout << "useful tiles:\n";
  for (const Tile& T : useful_tiles(a.dec)) {
    std::cout << "  " << tile_string(T) << "\n";
    useful.push_back({T.iL, T.iR, T.jL, T.jR});
  }
  rep["useful"] = useful;
  json homog = json::array();
  std::cout << "homogeneous tiles:\n";
  for (const TilePoint& pt : homogeneous_points(a)) {
    PolyMatrix P = tile_map_from_reduced(a.R, a.dec, pt.tile, t0);
    SparseVerdict sv = sparse_criterion(P, pt.sigma);
    std::string verdict = !sv.applicable ? "not applicable" : sv.positive ? "positive" : "not certified";
    std::cout << "  " << pad(tile_string(pt.tile), 16) << "sigma " << pad(to_string(pt.sigma), 6) << "sparse " << verdict << "\n";
    print_matrix(P, "z");
    homog.push_back({{"tile", {pt.tile.iL, pt.tile.iR, pt.tile.jL, pt.tile.jR}},
                     {"sigma", rational_to_json(pt.sigma)},
                     {"sparse", verdict},
                     {"map", polymatrix_to_json(P)}});
  }
  rep["homogeneous"] = homog;
  write_report(o, rep);
  return kDecisive;
}

int cmd_plan(const Options& o) {
  json j = load_input(o);
  Analysis a = analyze(j);
  std::vector<TilePoint> pts = homogeneous_points(a);
  std::optional<TilePlan> plan = o.sigma.empty() ? solve_plan(pts, a.M.rows(), a.M.cols(), SigmaMode::Max)
                                                 : solve_plan(pts, a.M.rows(), a.M.cols(), SigmaMode::Pinned, parse_flag_rational(o.sigma, "sigma"));
  if (!plan) {
    std::cout << "no plan: target outside the convex hull of the tile points\n";
    write_report(o, {{"plan", nullptr}});
    return kUndetermined;
  }
  for (size_t k = 0; k < plan->points.size(); ++k)
    std::cout << "  " << pad(tile_string(plan->points[k].tile), 16) << "sigma " << pad(to_string(plan->points[k].sigma), 6) << "theta "
              << to_string(plan->theta[k]) << "\n";
  row("sigma", to_string(plan->sigma_total));
  row("sigma range", "[" + to_string(plan->sigma_lo) + ", " + to_string(plan->sigma_hi) + "]");
  row("tau", to_string(plan->tau));
  write_report(o, plan_to_json(*plan));
  return kDecisive;
}

Box load_box(const json& j, int d) {
  if (j.contains("box")) {
    const json& b = j["box"];
    Box box;
    const json& lo = field(b, "lo", "/box");
    const json& hi = field(b, "hi", "/box");
    if (!lo.is_array() || !hi.is_array() || static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
      throw InputError("/box", "lo and hi must be arrays of length " + std::to_string(d));
    for (int k = 0; k < d; ++k) {
      box.lo.push_back(rational_from_json(lo[k], "/box/lo/" + std::to_string(k)));
      box.hi.push_back(rational_from_json(hi[k], "/box/hi/" + std::to_string(k)));
      if (box.hi[k] <= box.lo[k]) throw InputError("/box", "empty box in coordinate " + std::to_string(k));
    }
    return box;
  }
  Rational half = j.contains("half_width") ? rational_from_json(j["half_width"], "/half_width") : Rational(10);
  return Box::cube(d, half);
}

int cmd_sublevel(const Options& o) {
  json j = load_input(o);
  PolyMatrix M = polymatrix_from_json(field(j, "M", ""), "/M");
  Rational tau;
  if (!o.tau.empty())
    tau = parse_flag_rational(o.tau, "tau");
  else if (j.contains("tau"))
    tau = rational_from_json(j["tau"], "/tau");
  else
    throw InputError("--tau", "this verb needs --tau (or a tau field)");
  if (tau <= 0) throw InputError("--tau", "tau must be positive");
  Box box = load_box(j, M.dim());
  std::string weight_kind = j.value("weight", std::string("constant"));
  std::unique_ptr<Weight> weight;
  if (weight_kind == "constant") {
    weight = std::make_unique<ConstantWeight>(1.0);
  } else if (weight_kind == "plan") {
    Analysis a = analyze(j);
    auto plan = solve_plan(homogeneous_points(a), M.rows(), M.cols(), SigmaMode::Max);
    if (!plan) throw InputError("/weight", "no tile plan exists for this matrix");
    weight = std::make_unique<TilePlanWeight>(a.M, a.dec, *plan, git_options(o));
  } else {
    throw InputError("/weight", "expected \"constant\" or \"plan\"");
  }
  EstimateOptions eo;
  eo.samples = o.samples;
  eo.seed = o.seed;
  eo.threads = o.threads;
  json omegas = json::array();
  double max_est = 0;
  std::cout << pad("omega", 8) << pad("estimate", 16) << pad("stderr", 14) << "flagged\n";
  for (int w = 0; w < o.omegas; ++w) {
    OmegaBasis om = sample_omega(M.cols(), derive_seed(o.seed, 1000 + w), o.scale_max);
    eo.seed = derive_seed(o.seed, w);
    IntegralEstimate est = estimate_integral(M, *weight, tau.get_d(), box, om, eo);
    max_est = std::max(max_est, est.value);
    std::cout << pad(std::to_string(w), 8) << pad(fmt("%.6e", est.value), 16) << pad(fmt("%.3e", est.std_error), 14) << est.flagged << "\n";
    omegas.push_back({{"log_scale", std::vector<double>(om.log_scale.data(), om.log_scale.data() + om.log_scale.size())},
                      {"estimate", est.value},
                      {"stderr", est.std_error}});
  }
  row("max estimate", fmt("%.6e", max_est));
  write_report(o, {{"tau", rational_to_json(tau)}, {"omegas", omegas}, {"max_estimate", max_est}});
  return kDecisive;
}

int cmd_radon_balanced(const Options& o, const json& j) {
  int type = int_field(j, "type", "");
  const json& set = field(j, "set", "");
  if (!set.is_array() || set.empty()) throw InputError("/set", "expected a nonempty array of multiindices");
  const int d = static_cast<int>(set[0].size());
  std::vector<Multiindex> A;
  for (size_t k = 0; k < set.size(); ++k) A.push_back(multiindex_from_json(set[k], d, "/set/" + std::to_string(k)));
  int param = type == 1 ? int_field(j, "k", "") : int_field(j, "d", "");
  BalancedResult b = balanced_check(A, type, param);
  json rep;
  rep["balanced"] = b.ok;
  row("balanced", b.ok ? "yes" : "no (" + b.reason + ")");
  if (!b.ok) {
    if (b.witness) rep["witness"] = multiindex_to_json(*b.witness);
    rep["reason"] = b.reason;
    write_report(o, rep);
    return kUndetermined;
  }
  row("sigma", to_string(b.sigma));
  row("N", std::to_string(b.N));
  row("r", to_string(b.r));
  row("target", to_string(b.target));
  RadonProblem prob = type == 1 ? type1_problem(A, param) : type2_problem(A);
  RadonDecomposition dec = type == 1 ? type1_decomposition(A, param) : type2_decomposition(A);
  RadonReport r = verify_radon_decomposition(prob, dec);
  row("decomposition", r.pass ? "PASS" : "FAIL");
  rep["sigma"] = rational_to_json(b.sigma);
  rep["N"] = b.N;
  rep["r"] = rational_to_json(b.r);
  rep["target"] = rational_to_json(b.target);
  rep["decomposition"] = radon_report_to_json(r);
  write_report(o, rep);
  return r.pass ? kDecisive : kUndetermined;
}

int cmd_radon(const Options& o) {
  if (o.exponents) {
    ModelExponents e;
    try {
      e = model_exponents(o.n, o.n1, o.k);
    } catch (const std::invalid_argument& ex) {
      throw InputError("--n/--n1/--k", ex.what());
    }
    std::cout << to_string(e.r_g) << " " << to_string(e.r_f) << "\n";
    row("1/p2", to_string(e.inv_p2));
    row("1/p1", to_string(e.inv_p1));
    row("identity", e.identity_holds ? "holds" : "fails");
    write_report(o, {{"exponents", {rational_to_json(e.r_g), rational_to_json(e.r_f)}},
                     {"inv_p2", rational_to_json(e.inv_p2)},
                     {"inv_p1", rational_to_json(e.inv_p1)},
                     {"identity", e.identity_holds}});
    return kDecisive;
  }
  json j = load_input(o);
  if (j.is_object() && j.contains("set")) return cmd_radon_balanced(o, j);
  RadonProblem prob = radon_problem_from_json(j);
  RVector z0(prob.vars());
  if (j.contains("z0")) {
    const json& a = j["z0"];
    if (!a.is_array() || static_cast<int>(a.size()) != prob.vars())
      throw InputError("/z0", "expected an array of length " + std::to_string(prob.vars()));
    for (int k = 0; k < prob.vars(); ++k) z0[k] = rational_from_json(a[k], "/z0/" + std::to_string(k));
  }
  PolyMatrix M = build_incidence(prob);
  std::cout << "incidence matrix (x then s):\n";
  print_matrix(M, "v");
  CurvatureForm Q = curvature_form(prob, z0);
  std::cout << "curvature form:\n";
  PolyMatrix QP = curvature_polymatrix(Q);
  print_matrix(QP, "z");
  VerdictOptions vo;
  vo.seed = o.seed;
  vo.git = git_options(o);
  SemistabilityVerdict v = semistability_verdict(Q, vo);
  row("verdict", to_string(v.state));
  row("method", v.method);
  if (prob.n > prob.k && prob.n1 > prob.k) {
    ModelExponents e = model_exponents(prob.n, prob.n1, prob.k);
    row("exponents", to_string(e.r_g) + " " + to_string(e.r_f));
  }
  json rep;
  rep["incidence"] = polymatrix_to_json(M);
  rep["curvature"] = polymatrix_to_json(QP);
  rep["verdict"] = verdict_to_json(v);
  write_report(o, rep);
  return v.state == VerdictState::Undetermined ? kUndetermined : kDecisive;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "input JSON file");
  sub->add_option("--out", o.out, "write the JSON report here");
  sub->add_option("--sigma", o.sigma, "sigma as num/den");
  sub->add_option("--tau", o.tau, "tau as num/den");
  sub->add_option("--seed", o.seed, "master seed (default 0)");
  sub->add_option("--samples", o.samples, "Monte-Carlo samples (default 100000)");
  sub->add_option("--restarts", o.restarts, "frame restarts (default 64)");
  sub->add_option("--scale-max", o.scale_max, "largest log-scale of sampled bases (default 0)");
  sub->add_option("--threads", o.threads, "worker threads (default 1)")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semistability, block decompositions, sublevel integrals and Radon-like exponents"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, std::function<int(const Options&)>> verbs = {
      {"hsnorm", cmd_hsnorm},   {"gitnorm", cmd_gitnorm}, {"semistable", cmd_semistable}, {"destabilize", cmd_destabilize},
      {"polytope", cmd_polytope}, {"blockdecomp", cmd_blockdecomp}, {"tiles", cmd_tiles}, {"plan", cmd_plan},
      {"sublevel", cmd_sublevel}, {"radon", cmd_radon}};
  const std::map<std::string, std::string> help = {
      {"hsnorm", "Hilbert-Schmidt norm of a polynomial matrix"},
      {"gitnorm", "infimum of the norm over the group orbit"},
      {"semistable", "decide semistability with a certificate"},
      {"destabilize", "find a destabilizing one-parameter subgroup"},
      {"polytope", "balanced-point membership in the Newton polytope"},
      {"blockdecomp", "eliminate an incidence matrix or verify a decomposition"},
      {"tiles", "useful and homogeneous tiles of a decomposition"},
      {"plan", "solve the tile plan for the critical exponent"},
      {"sublevel", "Monte-Carlo sublevel integrals over sampled bases"},
      {"radon", "incidence matrix, verdict and exponents for Radon-like problems"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& kv : verbs) {
    CLI::App* sub = app.add_subcommand(kv.first, help.at(kv.first));
    add_common(sub, o);
    subs[kv.first] = sub;
  }
  // blockdecomp --verify FILE is accepted as shorthand for --verify --input FILE.
  subs["blockdecomp"]->add_flag("--verify", o.verify, "verify the supplied decomposition");
  subs["blockdecomp"]->allow_extras(false);
  std::vector<std::string> positional;
  subs["blockdecomp"]->add_option("file", positional, "input JSON file");
  subs["radon"]->add_flag("--exponents", o.exponents, "print the model exponents for --n --n1 --k");
  subs["radon"]->add_option("--n", o.n, "ambient dimension");
  subs["radon"]->add_option("--n1", o.n1, "second ambient dimension");
  subs["radon"]->add_option("--k", o.k, "dimension of the incidence fibres");
  subs["sublevel"]->add_option("--omegas", o.omegas, "number of sampled bases (default 1)")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (!positional.empty()) {
    if (!o.input.empty() || positional.size() > 1) {
      std::cerr << "error: give the input either positionally or with --input\n";
      return kInputError;
    }
    o.input = positional[0];
  }
  for (const auto& kv : verbs) {
    if (!subs[kv.first]->parsed()) continue;
    try {
      return kv.second(o);
    } catch (const InputError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kInputError;
    } catch (const NotDerivativeClosed& e) {
      std::cerr << "error: " << e.what() << " (supply a decomposition)\n";
      return kInputError;
    } catch (const NonTransverse& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kInputError;
    } catch (const RankDeficient& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kInputError;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kInputError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUndetermined;
    }
  }
  return kInputError;
}
