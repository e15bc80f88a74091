#include "semistab/radon.hpp"

#include <algorithm>
#include <set>

namespace semistab {

namespace {

QMatrix eval_matrix(const PolyMatrix& M, const RVector& point) {
  QMatrix out(M.rows(), M.cols());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) out(i, j) = eval_exact(M(i, j), point);
  return out;
}

Poly monomial_over_factorial(int dim, int offset, const Multiindex& a, const Rational& scale) {
  Multiindex e(dim, 0);
  for (size_t k = 0; k < a.size(); ++k) e[offset + k] = a[k];
  Rational c = scale / factorial(a);
  return Poly::monomial(e, c);
}

// prod_k (v_k)^{a_k} / a!, with v_k given as polynomials.
Poly power_over_factorial(const std::vector<Poly>& v, const Multiindex& a, int dim) {
  Poly r = Poly::constant(dim, Rational(1) / factorial(a));
  for (size_t k = 0; k < a.size(); ++k)
    for (int e = 0; e < a[k]; ++e) r = r * v[k];
  return r;
}

Multiindex minus(const Multiindex& a, const Multiindex& b) {
  Multiindex r(a.size());
  for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
  return r;
}

void check_index_set(const std::vector<Multiindex>& A) {
  if (A.empty()) throw std::invalid_argument("index set is empty");
  const size_t d = A[0].size();
  if (d == 0) throw std::invalid_argument("multiindices must have at least one entry");
  std::set<Multiindex> seen;
  for (const auto& a : A) {
    if (a.size() != d) throw std::invalid_argument("multiindices have different lengths");
    for (int e : a)
      if (e < 0) throw std::invalid_argument("negative exponent in " + format_multiindex(a));
    if (order(a) == 0) throw std::invalid_argument("zero multiindex in index set");
    if (!seen.insert(a).second) throw std::invalid_argument("duplicate multiindex " + format_multiindex(a));
  }
}

void sort_by_degree(std::vector<Multiindex>& A) { std::sort(A.begin(), A.end(), GradedLex()); }

// Lowest total degree in variables [lo, hi); -1 for the zero polynomial.
int order_in(const Poly& P, int lo, int hi, int* top = nullptr) {
  int best = -1, mx = -1;
  for (const auto& kv : P.terms()) {
    int o = 0;
    for (int k = lo; k < hi; ++k) o += kv.first[k];
    best = best < 0 ? o : std::min(best, o);
    mx = std::max(mx, o);
  }
  if (top) *top = mx;
  return best;
}

}  // namespace

void RadonProblem::validate() const {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (n < k) throw std::invalid_argument("n must be at least k");
  if (n1 < k) throw std::invalid_argument("n1 must be at least k");
  if (static_cast<int>(phi.size()) != k)
    throw std::invalid_argument("expected " + std::to_string(k) + " defining functions, got " + std::to_string(phi.size()));
  for (size_t i = 0; i < phi.size(); ++i)
    if (phi[i].dim() != vars())
      throw std::invalid_argument("defining function " + std::to_string(i) + " has " + std::to_string(phi[i].dim()) + " variables, expected " +
                                  std::to_string(vars()));
  // Generic rank: one full-rank evaluation suffices.
  PolyMatrix M(k, n, vars());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) M.set(i, j, partial_derivative(phi[i], unit_index(vars(), j)));
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<int> coin(-9, 9);
  for (int attempt = 0; attempt < 8; ++attempt) {
    RVector pt(vars());
    for (auto& x : pt) x = ratio(coin(rng), 1 + attempt);
    if (eval_matrix(M, pt).rank() == k) return;
  }
  throw std::invalid_argument("dphi/dx has generic rank below k");
}

PolyMatrix build_incidence(const RadonProblem& prob, const std::optional<RVector>& base) {
  prob.validate();
  const int v = prob.vars();
  PolyMatrix M(prob.k, prob.n, v);
  for (int i = 0; i < prob.k; ++i)
    for (int j = 0; j < prob.n; ++j) M.set(i, j, partial_derivative(prob.phi[i], unit_index(v, j)));
  if (base) {
    if (static_cast<int>(base->size()) != v) throw std::invalid_argument("base point has wrong length");
    if (eval_matrix(M, *base).rank() < prob.k) throw RankDeficient("dphi/dx has rank below k at the base point");
  }
  return M;
}

PolyMatrix freeze_x(const PolyMatrix& M, const RVector& x0) {
  const int n = static_cast<int>(x0.size());
  const int d = M.dim() - n;
  if (d < 0) throw std::invalid_argument("base point longer than variable list");
  std::vector<Poly> images;
  for (int j = 0; j < n; ++j) images.push_back(Poly::constant(d, x0[j]));
  for (int l = 0; l < d; ++l) images.push_back(Poly::variable(d, l));
  return compose(M, images);
}

CurvatureForm CurvatureForm::zeros(int k, int b, int c) {
  CurvatureForm Q;
  Q.k = k;
  Q.b = b;
  Q.c = c;
  Q.g.assign(static_cast<size_t>(k) * b * c, Rational(0));
  return Q;
}

CurvatureForm curvature_form(const RadonProblem& prob, const RVector& z0) {
  prob.validate();
  const int v = prob.vars(), n = prob.n, k = prob.k, d = prob.d();
  if (static_cast<int>(z0.size()) != v) throw std::invalid_argument("base point has wrong length");
  QMatrix J(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) J(i, j) = eval_exact(partial_derivative(prob.phi[i], unit_index(v, j)), z0);
  if (J.rank() < k) throw NonTransverse("dphi/dx has rank " + std::to_string(J.rank()) + " < " + std::to_string(k) + " at the base point");
  QMatrix K = J.nullspace();
  CurvatureForm Q = CurvatureForm::zeros(k, n - k, d);
  for (int i = 0; i < k; ++i)
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < d; ++l) {
        Multiindex a(v, 0);
        a[m] = 1;
        a[n + l] = 1;
        Rational h = eval_exact(partial_derivative(prob.phi[i], a), z0);
        if (h == 0) continue;
        for (int j = 0; j < n - k; ++j) Q.at(i, j, l) += K(m, j) * h;
      }
  return Q;
}

PolyMatrix curvature_polymatrix(const CurvatureForm& Q) {
  PolyMatrix P(Q.k, Q.b, Q.c);
  for (int i = 0; i < Q.k; ++i)
    for (int j = 0; j < Q.b; ++j) {
      Poly e(Q.c);
      for (int l = 0; l < Q.c; ++l) e.add_term(unit_index(Q.c, l), Q.at(i, j, l));
      P.set(i, j, e);
    }
  return P;
}

CurvatureForm random_form(int k, int b, int c, std::mt19937_64& rng, int range) {
  std::uniform_int_distribution<int> dist(-range, range);
  CurvatureForm Q = CurvatureForm::zeros(k, b, c);
  for (auto& x : Q.g) x = dist(rng);
  return Q;
}

ModelExponents model_exponents(int n, int n1, int k) {
  if (k < 1 || n <= k || n1 <= k) throw std::invalid_argument("need 1 <= k < n and k < n1");
  ModelExponents e;
  e.r_g = ratio(k * (n1 - k), n1 * (n - k)) + 1;
  e.r_f = ratio(k * (n - k), n * (n1 - k)) + 1;
  const long den = static_cast<long>(n) * n1 - static_cast<long>(k) * k;
  e.inv_p2 = ratio(static_cast<long>(n1) * (n - k), den);
  e.inv_p1 = ratio(static_cast<long>(n) * (n1 - k), den);
  e.identity_holds = Rational(n1 + n) == Rational(n + k) * e.inv_p2 + Rational(n1 + k) * e.inv_p1;
  return e;
}

BalancedResult balanced_check(const std::vector<Multiindex>& A, int type, int k_or_d) {
  BalancedResult res;
  try {
    check_index_set(A);
  } catch (const std::invalid_argument& e) {
    res.reason = e.what();
    return res;
  }
  const int d = static_cast<int>(A[0].size());
  const int N = static_cast<int>(A.size());
  res.N = N;
  std::set<Multiindex> members(A.begin(), A.end());
  if (type != 1 && type != 2) {
    res.reason = "type must be 1 or 2";
    return res;
  }
  if (k_or_d < 1) {
    res.reason = "parameter must be positive";
    return res;
  }
  if (type == 2 && k_or_d != d) {
    res.reason = "multiindex length " + std::to_string(d) + " does not match d = " + std::to_string(k_or_d);
    return res;
  }
  // Closure: every proper sub-index (nonzero for type 1, order >= 2 for type 2) is present.
  for (const auto& a : A) {
    if (type == 2 && order(a) == 1) {
      res.reason = "first-order multiindex " + format_multiindex(a);
      res.witness = a;
      return res;
    }
    Multiindex b(d, 0);
    while (true) {
      int pos = 0;
      while (pos < d && b[pos] == a[pos]) b[pos++] = 0;
      if (pos == d) break;
      ++b[pos];
      if (b == a) continue;
      int ob = order(b);
      if (ob == 0 || (type == 2 && ob < 2)) continue;
      if (!members.count(b)) {
        res.reason = "missing sub-index " + format_multiindex(b) + " of " + format_multiindex(a);
        res.witness = b;
        return res;
      }
    }
  }
  RVector mean(d), dir(d);
  for (const auto& a : A)
    for (int k = 0; k < d; ++k) {
      mean[k] += ratio(a[k], N);
      dir[k] += ratio(a[k], static_cast<long>(N) * order(a));
    }
  for (auto& x : mean) x.canonicalize();
  for (auto& x : dir) x.canonicalize();
  for (int k = 1; k < d; ++k)
    if (mean[k] != mean[0]) {
      res.reason = "mean multiindex is not on the diagonal";
      return res;
    }
  if (type == 1) {
    const int kk = k_or_d;
    res.sigma = mean[0];
    res.r = ratio(static_cast<long>(N) * kk, N + 1) * res.sigma + 1;
    res.target = res.r * ratio(N + 1, N);
  } else {
    for (int k = 0; k < d; ++k)
      if (dir[k] != ratio(1, d)) {
        res.reason = "mean direction is not the barycentre";
        return res;
      }
    res.sigma = mean[0] - ratio(1, d);
    res.r = ratio(static_cast<long>(N) * d, N + d) * res.sigma + 1;
    res.target = res.r * ratio(N + d, N);
  }
  res.r.canonicalize();
  res.target.canonicalize();
  res.ok = true;
  return res;
}

RadonProblem type1_problem(std::vector<Multiindex> A, int k) {
  check_index_set(A);
  if (k < 1) throw std::invalid_argument("k must be positive");
  sort_by_degree(A);
  const int N = static_cast<int>(A.size()), d = static_cast<int>(A[0].size());
  RadonProblem prob;
  prob.k = N * k;
  prob.n = N * k + k;
  prob.n1 = N * k + d;
  const int v = prob.vars();
  for (int a = 0; a < N; ++a)
    for (int i = 0; i < k; ++i)
      prob.phi.push_back(Poly::variable(v, a * k + i) + monomial_over_factorial(v, prob.n, A[a], 1) * Poly::variable(v, N * k + i));
  return prob;
}

RadonDecomposition type1_decomposition(std::vector<Multiindex> A, int k) {
  RadonProblem prob = type1_problem(A, k);
  sort_by_degree(A);
  const int N = static_cast<int>(A.size()), d = static_cast<int>(A[0].size());
  const int n = prob.n, v = prob.vars(), w = n + 2 * d, Nk = N * k;
  RadonDecomposition dec;
  dec.A = identity_matrix(Nk, v);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      if (a == b || !divides(A[b], A[a])) continue;
      Multiindex beta = minus(A[a], A[b]);
      Rational sign = order(beta) % 2 ? -1 : 1;
      for (int i = 0; i < k; ++i) dec.A.set(a * k + i, b * k + i, monomial_over_factorial(v, n, beta, sign));
    }
  dec.B = identity_matrix(n, v);
  for (int b = 0; b < N; ++b)
    for (int i = 0; i < k; ++i) dec.B.set(b * k + i, Nk + i, monomial_over_factorial(v, n, A[b], -1));
  dec.P = PolyMatrix(Nk, n, w);
  for (int r = 0; r < Nk; ++r)
    for (int c = 0; c < Nk; ++c) dec.P.set(r, c, embed(dec.A(r, c), w, 0));
  for (int a = 0; a < N; ++a)
    for (int i = 0; i < k; ++i) dec.P.set(a * k + i, Nk + i, monomial_over_factorial(w, n + d, A[a], -1));
  return dec;
}

RadonProblem type2_problem(std::vector<Multiindex> A) {
  check_index_set(A);
  sort_by_degree(A);
  const int N = static_cast<int>(A.size()), d = static_cast<int>(A[0].size());
  RadonProblem prob;
  prob.k = N;
  prob.n = N + d;
  prob.n1 = N + d;
  const int v = prob.vars();
  std::vector<Poly> diff;
  for (int l = 0; l < d; ++l) diff.push_back(Poly::variable(v, N + l) - Poly::variable(v, prob.n + l));
  for (int a = 0; a < N; ++a) prob.phi.push_back(Poly::variable(v, a) + power_over_factorial(diff, A[a], v));
  return prob;
}

RadonDecomposition type2_decomposition(std::vector<Multiindex> A) {
  RadonProblem prob = type2_problem(A);
  sort_by_degree(A);
  const int N = static_cast<int>(A.size()), d = static_cast<int>(A[0].size());
  const int n = prob.n, v = prob.vars(), w = n + 2 * d;
  std::vector<Poly> x_minus_t, s_minus_x;
  for (int l = 0; l < d; ++l) {
    x_minus_t.push_back(Poly::variable(v, N + l) - Poly::variable(v, n + l));
    s_minus_x.push_back(Poly::variable(v, n + l) - Poly::variable(v, N + l));
  }
  RadonDecomposition dec;
  dec.A = identity_matrix(N, v);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      if (a == b || !divides(A[b], A[a]) || order(A[b]) < 2) continue;
      dec.A.set(a, b, power_over_factorial(s_minus_x, minus(A[a], A[b]), v));
    }
  dec.B = identity_matrix(n, v);
  for (int b = 0; b < N; ++b) {
    Poly r = power_over_factorial(x_minus_t, A[b], v);
    for (int l = 0; l < d; ++l) dec.B.set(b, N + l, -partial_derivative(r, unit_index(v, N + l)));
  }
  dec.P = PolyMatrix(N, n, w);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) dec.P.set(r, c, embed(dec.A(r, c), w, 0));
  for (int a = 0; a < N; ++a) {
    const Rational sign = order(A[a]) % 2 ? -1 : 1;
    for (int l = 0; l < d; ++l) {
      if (A[a][l] == 0) continue;
      Multiindex g = A[a];
      --g[l];
      dec.P.set(a, N + l, monomial_over_factorial(w, n + d, g, sign));
    }
  }
  return dec;
}

RadonReport verify_radon_decomposition(const RadonProblem& prob, const RadonDecomposition& dec) {
  RadonReport rep;
  const PolyMatrix M = build_incidence(prob);
  const int k = prob.k, n = prob.n, d = prob.d(), v = prob.vars(), w = n + 2 * d;
  if (dec.A.rows() != k || dec.A.cols() != k || dec.A.dim() != v) throw std::invalid_argument("A must be k x k in the problem variables");
  if (dec.B.rows() != n || dec.B.cols() != n || dec.B.dim() != v) throw std::invalid_argument("B must be n x n in the problem variables");
  if (dec.P.rows() != k || dec.P.cols() != n || dec.P.dim() != w) throw std::invalid_argument("P must be k x n in (x, s, z)");

  auto det_is_one = [](const PolyMatrix& X) { return determinant(X) == Poly::constant(X.dim(), 1); };
  rep.det_A_ok = det_is_one(dec.A);
  rep.det_B_ok = det_is_one(dec.B);
  if (!rep.det_A_ok) rep.violations.push_back({"determinant", -1, -1, -1, -1, {}, {}, "det A is not identically 1"});
  if (!rep.det_B_ok) rep.violations.push_back({"determinant", -1, -1, -1, -1, {}, {}, "det B is not identically 1"});

  // Degrees of P; zero entries inherit the larger of the neighbours above and to the left.
  rep.degrees.assign(k, std::vector<int>(n, 0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) {
      const Poly& e = dec.P(i, j);
      if (e.is_zero()) {
        int fill = 0;
        if (i > 0) fill = std::max(fill, rep.degrees[i - 1][j]);
        if (j > 0) fill = std::max(fill, rep.degrees[i][j - 1]);
        rep.degrees[i][j] = fill;
        continue;
      }
      int top = 0;
      int lo = order_in(e, n + d, w, &top);
      if (lo != top) {
        rep.degrees_ok = false;
        rep.violations.push_back({"homogeneity", -1, -1, i, j, {}, {}, "entry is not homogeneous in z"});
      }
      rep.degrees[i][j] = top;
    }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) {
      bool bad = (j + 1 < n && rep.degrees[i][j] > rep.degrees[i][j + 1]) || (i + 1 < k && rep.degrees[i][j] > rep.degrees[i + 1][j]);
      if (bad) {
        rep.degrees_ok = false;
        rep.violations.push_back({"monotonicity", -1, -1, i, j, {}, {}, "degrees of P decrease after this entry"});
      }
    }

  PolyMatrix AM = matmul(dec.A, M);
  PolyMatrix AMw(k, n, w);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) AMw.set(i, j, embed(AM(i, j), w, 0));
  std::vector<Poly> images;
  for (int j = 0; j < n; ++j) images.push_back(Poly::variable(w, j));
  for (int l = 0; l < d; ++l) images.push_back(Poly::variable(w, n + l) + Poly::variable(w, n + d + l));
  PolyMatrix R = matmul(AMw, compose(dec.B, images));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) {
      Poly E = R(i, j) - dec.P(i, j);
      const int D = rep.degrees[i][j];
      for (const auto& [a, c] : E.terms()) {
        int o = 0;
        for (int l = n + d; l < w; ++l) o += a[l];
        if (o > D) continue;
        Violation viol;
        viol.kind = "order";
        viol.row = i;
        viol.col = j;
        viol.alpha = Multiindex(a.begin() + n + d, a.end());
        viol.beta = Multiindex(a.begin(), a.begin() + n + d);
        viol.detail = "remainder has z-order " + std::to_string(o) + " <= " + std::to_string(D) + " (coefficient " + to_string(c) + ")";
        rep.violations.push_back(viol);
        break;
      }
    }
  rep.pass = rep.violations.empty();
  return rep;
}

json radon_report_to_json(const RadonReport& rep) {
  json j;
  j["pass"] = rep.pass;
  j["det_A"] = rep.det_A_ok;
  j["det_B"] = rep.det_B_ok;
  j["degrees_ok"] = rep.degrees_ok;
  j["degrees"] = rep.degrees;
  json viols = json::array();
  for (const auto& v : rep.violations) {
    json e;
    e["kind"] = v.kind;
    if (v.row >= 0) {
      e["row"] = v.row;
      e["col"] = v.col;
    }
    if (!v.alpha.empty()) e["z_exponent"] = multiindex_to_json(v.alpha);
    if (!v.beta.empty()) e["xs_exponent"] = multiindex_to_json(v.beta);
    e["detail"] = v.detail;
    viols.push_back(e);
  }
  j["violations"] = viols;
  return j;
}

json radon_problem_to_json(const RadonProblem& prob) {
  json j;
  j["n"] = prob.n;
  j["n1"] = prob.n1;
  j["k"] = prob.k;
  json phi = json::array();
  for (const auto& f : prob.phi) phi.push_back(poly_to_json(f));
  j["phi"] = phi;
  return j;
}

RadonProblem radon_problem_from_json(const json& j, const std::string& path) {
  RadonProblem prob;
  prob.n = int_field(j, "n", path);
  prob.n1 = int_field(j, "n1", path);
  prob.k = int_field(j, "k", path);
  if (prob.k < 1 || prob.n < prob.k || prob.n1 < prob.k) throw InputError(path, "need 1 <= k <= min(n, n1)");
  const json& phi = field(j, "phi", path);
  if (!phi.is_array()) throw InputError(path + "/phi", "expected an array");
  for (size_t i = 0; i < phi.size(); ++i) prob.phi.push_back(poly_from_json(phi[i], prob.vars(), path + "/phi/" + std::to_string(i)));
  try {
    prob.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(path.empty() ? "/" : path, e.what());
  }
  return prob;
}

}  // namespace semistab
