#include <algorithm>

#include "semistab/frames.hpp"
#include "semistab/radon.hpp"

namespace semistab {

namespace {

struct RationalFrame {
  QMatrix A, B, C;
  std::string label;
};

bool is_linear_form_matrix(const PolyMatrix& P) {
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j)
      for (const auto& kv : P(i, j).terms())
        if (order(kv.first) != 1) return false;
  return true;
}

// Row i holds the coefficients of P_{i,*}; column j*d + l is the z_l coefficient of P_ij.
QMatrix slice_matrix(const PolyMatrix& P) {
  const int d = P.dim();
  QMatrix S(P.rows(), P.cols() * d);
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j)
      for (int l = 0; l < d; ++l) S(i, j * d + l) = P(i, j).coeff(unit_index(d, l));
  return S;
}

// Invertible E with E X in reduced echelon form.
QMatrix row_reducer(const QMatrix& X) {
  const int r = X.rows(), c = X.cols();
  QMatrix aug(r, c + r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) aug(i, j) = X(i, j);
    aug(i, c + i) = 1;
  }
  QMatrix red = aug.rref();
  QMatrix E(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) E(i, j) = red(i, c + j);
  return E;
}

// Row transform echelonizing the slice matrix with columns visited in `order`.
QMatrix echelon_rows(const QMatrix& S, const std::vector<int>& order) {
  QMatrix perm(S.rows(), static_cast<int>(order.size()));
  for (int i = 0; i < S.rows(); ++i)
    for (size_t c = 0; c < order.size(); ++c) perm(i, static_cast<int>(c)) = S(i, order[c]);
  return row_reducer(perm);
}

// (B, C, rank) with B^{-T} N C^{-1} = [I_r 0; 0 0].
std::tuple<QMatrix, QMatrix, int> annihilator_normal_form(const QMatrix& N) {
  QMatrix E1 = row_reducer(N);
  QMatrix X = E1 * N;
  QMatrix E2t = row_reducer(X.transpose());
  return {E1.inverse().transpose(), E2t.transpose().inverse(), N.rank()};
}

std::vector<RationalFrame> structured_frames(const PolyMatrix& P) {
  const int p = P.rows(), q = P.cols(), d = P.dim();
  std::vector<RationalFrame> out;
  if (!is_linear_form_matrix(P) || p == 0 || q == 0 || d == 0) return out;
  const QMatrix S = slice_matrix(P);
  std::vector<int> natural(q * d);
  for (int c = 0; c < q * d; ++c) natural[c] = c;
  out.push_back({echelon_rows(S, natural), QMatrix::identity(q), QMatrix::identity(d), "echelon"});

  QMatrix ns = S.nullspace();
  for (int c = 0; c < std::min(ns.cols(), 4); ++c) {
    QMatrix N(q, d);
    for (int j = 0; j < q; ++j)
      for (int l = 0; l < d; ++l) N(j, l) = ns(j * d + l, c);
    auto [B, C, r] = annihilator_normal_form(N);
    PolyMatrix P1 = act_group_exact(P, QMatrix::identity(p), B, C);
    QMatrix S1 = slice_matrix(P1);
    // Visit the positions carrying the annihilator last so they end up as non-pivots.
    std::vector<int> order, last;
    for (int j = 0; j < q; ++j)
      for (int l = 0; l < d; ++l) (j == l && j < r ? last : order).push_back(j * d + l);
    order.insert(order.end(), last.begin(), last.end());
    out.push_back({echelon_rows(S1, order), B, C, "annihilator-" + std::to_string(c)});
    out.push_back({echelon_rows(S1, natural), B, C, "annihilator-echelon-" + std::to_string(c)});
  }
  return out;
}

std::optional<Destabilizer> try_frame(const PolyMatrix& P, const Rational& sigma, const RationalFrame& f) {
  PolyMatrix P1 = act_group_exact(P, f.A, f.B, f.C);
  SupportSet E = support_set(P1);
  if (polytope_membership(E, sigma).member) return std::nullopt;
  auto D = find_destabilizer(E, sigma);
  if (D && verify_destabilizer(E, sigma, *D)) return D;
  return std::nullopt;
}

QMatrix or_identity(const QMatrix& M, int n) { return M.rows() == 0 ? QMatrix::identity(n) : M; }

}  // namespace

std::string to_string(VerdictState s) {
  switch (s) {
    case VerdictState::Positive:
      return "positive";
    case VerdictState::Unstable:
      return "unstable";
    case VerdictState::Undetermined:
      return "undetermined";
  }
  return "?";
}

SemistabilityVerdict semistability_verdict(const PolyMatrix& P, const Rational& sigma, const VerdictOptions& opt) {
  const int p = P.rows(), q = P.cols(), d = P.dim();
  SemistabilityVerdict v;
  v.sigma = sigma;
  v.frame_A = QMatrix::identity(p);
  v.frame_B = QMatrix::identity(q);
  v.frame_C = QMatrix::identity(d);
  v.frame_label = "identity";
  if (P.is_zero()) {
    v.state = VerdictState::Unstable;
    v.method = "trivial";
    v.destabilizer = find_destabilizer(support_set(P), sigma);
    return v;
  }
  SparseVerdict sp = sparse_criterion(P, sigma);
  if (sp.applicable && sp.positive) {
    v.state = VerdictState::Positive;
    v.method = "sparse";
    v.sparse = sp;
    return v;
  }

  std::vector<RationalFrame> frames;
  frames.push_back({v.frame_A, v.frame_B, v.frame_C, "identity"});
  for (auto& f : structured_frames(P)) frames.push_back(std::move(f));
  const bool linear = is_linear_form_matrix(P);
  for (int f = 0; f < opt.frames; ++f) {
    std::mt19937_64 rng(derive_seed(opt.seed, 0x4652 + f));
    QMatrix B = random_rational_orthogonal(q, rng);
    QMatrix C = random_rational_orthogonal(d, rng);
    QMatrix A = random_rational_orthogonal(p, rng);
    if (linear) {
      std::vector<int> natural(q * d);
      for (int c = 0; c < q * d; ++c) natural[c] = c;
      A = echelon_rows(slice_matrix(act_group_exact(P, QMatrix::identity(p), B, C)), natural);
    }
    frames.push_back({A, B, C, "random-" + std::to_string(f)});
  }
  for (const auto& f : frames) {
    ++v.frames_tried;
    if (auto D = try_frame(P, sigma, f)) {
      v.state = VerdictState::Unstable;
      v.method = "frame";
      v.frame_A = f.A;
      v.frame_B = f.B;
      v.frame_C = f.C;
      v.frame_label = f.label;
      v.destabilizer = D;
      return v;
    }
  }

  GitEstimate est = git_norm(P, sigma, opt.git);
  v.value = est.value;
  v.residual = est.foc_residual;
  const double scale = hs_norm(P);
  if (est.status == GitStatus::Converged && est.value > 1e-6 * scale && est.foc_residual <= 1e-6 * est.value * est.value) {
    v.state = VerdictState::Positive;
    v.method = "descent";
  } else {
    v.state = VerdictState::Undetermined;
    v.method = "none";
    v.value = est.min_frame_value;
  }
  return v;
}

SemistabilityVerdict semistability_verdict(const CurvatureForm& Q, const VerdictOptions& opt) {
  if (Q.c < 1) throw std::invalid_argument("curvature form needs at least one t direction");
  return semistability_verdict(curvature_polymatrix(Q), ratio(1, Q.c), opt);
}

bool verify_unstable_certificate(const PolyMatrix& P, const SemistabilityVerdict& v) {
  if (v.state != VerdictState::Unstable || !v.destabilizer) return false;
  const QMatrix A = or_identity(v.frame_A, P.rows()), B = or_identity(v.frame_B, P.cols()), C = or_identity(v.frame_C, P.dim());
  if (A.rows() != P.rows() || B.rows() != P.cols() || C.rows() != P.dim()) return false;
  if (A.determinant() == 0 || B.determinant() == 0 || C.determinant() == 0) return false;
  PolyMatrix P1 = act_group_exact(P, A, B, C);
  if (v.destabilizer->trivial) return P1.is_zero();
  return verify_destabilizer(support_set(P1), v.sigma, *v.destabilizer);
}

SemistabilityVerdict transport_verdict(const SemistabilityVerdict& v, const QMatrix& A, const QMatrix& B, const QMatrix& C) {
  SemistabilityVerdict out = v;
  if (v.state == VerdictState::Unstable) {
    out.frame_A = or_identity(v.frame_A, A.rows()) * A.inverse();
    out.frame_B = or_identity(v.frame_B, B.rows()) * B.inverse();
    out.frame_C = or_identity(v.frame_C, C.rows()) * C.inverse();
    out.frame_label = v.frame_label + "-transported";
  }
  return out;
}

json verdict_to_json(const SemistabilityVerdict& v) {
  json j;
  j["state"] = to_string(v.state);
  j["method"] = v.method;
  j["sigma"] = rational_to_json(v.sigma);
  if (v.state == VerdictState::Unstable) {
    j["frame"] = {{"label", v.frame_label}, {"A", qmatrix_to_json(v.frame_A)}, {"B", qmatrix_to_json(v.frame_B)}, {"C", qmatrix_to_json(v.frame_C)}};
    if (v.destabilizer) {
      const auto& D = *v.destabilizer;
      json w;
      auto vec = [](const RVector& x) {
        json a = json::array();
        for (const auto& r : x) a.push_back(rational_to_json(r));
        return a;
      };
      w["rows"] = vec(D.w.wp);
      w["cols"] = vec(D.w.wq);
      w["vars"] = vec(D.w.wd);
      w["margin"] = rational_to_json(D.margin);
      w["special_linear"] = D.special_linear;
      w["trivial"] = D.trivial;
      j["destabilizer"] = w;
    }
  }
  if (v.sparse) {
    json th = json::array();
    for (const auto& [t, c] : v.sparse->theta)
      if (c != 0) th.push_back({{"i", t.i}, {"j", t.j}, {"alpha", multiindex_to_json(t.alpha)}, {"theta", rational_to_json(c)}});
    j["theta"] = th;
  }
  if (v.method == "descent" || v.method == "none") {
    j["value"] = v.value;
    j["residual"] = v.residual;
  }
  j["frames_tried"] = v.frames_tried;
  return j;
}

}  // namespace semistab
