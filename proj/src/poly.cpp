#include "semistab/poly.hpp"

#include <sstream>

namespace semistab {

int order(const Multiindex& a) {
  int s = 0;
  for (int e : a) s += e;
  return s;
}

Rational factorial(const Multiindex& a) {
  Rational f = 1;
  for (int e : a) f *= factorial(e);
  return f;
}

double factorial_d(const Multiindex& a) {
  double f = 1;
  for (int e : a)
    for (int k = 2; k <= e; ++k) f *= k;
  return f;
}

Multiindex unit_index(int d, int k) {
  Multiindex a(d, 0);
  a.at(k) = 1;
  return a;
}

Multiindex operator+(const Multiindex& a, const Multiindex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multiindex length mismatch");
  Multiindex r(a.size());
  for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] + b[k];
  return r;
}

bool divides(const Multiindex& a, const Multiindex& b) {
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

std::vector<Multiindex> monomials_of_degree(int d, int m) {
  std::vector<Multiindex> out;
  Multiindex cur(d, 0);
  // Lexicographically decreasing enumeration gives graded-lex order within a degree.
  auto rec = [&](auto&& self, int k, int left) -> void {
    if (k == d - 1) {
      cur[k] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[k] = e;
      self(self, k + 1, left - e);
    }
  };
  if (d == 0) {
    if (m == 0) out.push_back(cur);
    return out;
  }
  rec(rec, 0, m);
  return out;
}

std::string format_multiindex(const Multiindex& a) {
  std::ostringstream os;
  os << '(';
  for (size_t k = 0; k < a.size(); ++k) os << (k ? "," : "") << a[k];
  os << ')';
  return os.str();
}

void GroupElement::validate() const {
  if (A.rows() != A.cols() || B.rows() != B.cols() || C.rows() != C.cols())
    throw std::invalid_argument("group element factors must be square");
  if (volume_preserving) {
    if (std::abs(std::abs(A.determinant()) - 1) > 1e-9) throw std::invalid_argument("det A is not +-1");
    if (std::abs(std::abs(B.determinant()) - 1) > 1e-9) throw std::invalid_argument("det B is not +-1");
  }
  if (C.size() > 0 && std::abs(C.determinant()) <= 1e-12) throw std::invalid_argument("C is not invertible");
}

GroupElement GroupElement::identity(int p, int q, int d) {
  return {Eigen::MatrixXd::Identity(p, p), Eigen::MatrixXd::Identity(q, q), Eigen::MatrixXd::Identity(d, d), true};
}

GroupElement operator*(const GroupElement& g1, const GroupElement& g2) {
  return {g1.A * g2.A, g1.B * g2.B, g1.C * g2.C, g1.volume_preserving && g2.volume_preserving};
}

namespace {

template <class C>
double eval_impl(const PolyT<C>& P, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != P.dim()) throw std::invalid_argument("evaluation point has wrong dimension");
  double s = 0;
  for (const auto& [a, c] : P.terms()) {
    double m = 1;
    for (size_t k = 0; k < a.size(); ++k)
      for (int e = 0; e < a[k]; ++e) m *= x[k];
    if constexpr (std::is_same_v<C, Rational>)
      s += c.get_d() * m;
    else
      s += c * m;
  }
  return s;
}

// Expands P with variable k replaced by images[k]; powers are cached per variable.
template <class C>
PolyT<C> compose_impl(const PolyT<C>& P, const std::vector<PolyT<C>>& images, int out_dim) {
  if (static_cast<int>(images.size()) != P.dim()) throw std::invalid_argument("compose: wrong number of images");
  for (const auto& im : images)
    if (im.dim() != out_dim) throw std::invalid_argument("compose: image dimension mismatch");
  std::vector<std::vector<PolyT<C>>> powers(images.size());
  auto power = [&](size_t k, int e) -> const PolyT<C>& {
    auto& pw = powers[k];
    if (pw.empty()) pw.push_back(PolyT<C>::constant(out_dim, C(1)));
    while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * images[k]);
    return pw[e];
  };
  PolyT<C> out(out_dim);
  for (const auto& [a, c] : P.terms()) {
    PolyT<C> term = PolyT<C>::constant(out_dim, c);
    for (size_t k = 0; k < a.size(); ++k)
      if (a[k] > 0) term = term * power(k, a[k]);
    out += term;
  }
  return out;
}

template <class C>
PolyMatrixT<C> act_impl(const PolyMatrixT<C>& P, const std::vector<PolyT<C>>& subst, const std::vector<std::vector<C>>& A,
                        const std::vector<std::vector<C>>& B) {
  int p = P.rows(), q = P.cols(), d = P.dim();
  std::vector<PolyT<C>> sub(static_cast<size_t>(p) * q, PolyT<C>(d));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) sub[i * q + j] = compose_impl(P(i, j), subst, d);
  // Column mixing then row mixing: P' = A S B^T.
  std::vector<PolyT<C>> right(static_cast<size_t>(p) * q, PolyT<C>(d));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j)
      for (int jj = 0; jj < q; ++jj)
        if (!coeff_is_zero(B[j][jj]) && !sub[i * q + jj].is_zero()) right[i * q + j] += sub[i * q + jj] * B[j][jj];
  PolyMatrixT<C> out(p, q, d, P.has_explicit_cap() ? P.cap() : -1);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) {
      PolyT<C> acc(d);
      for (int ii = 0; ii < p; ++ii)
        if (!coeff_is_zero(A[i][ii]) && !right[ii * q + j].is_zero()) acc += right[ii * q + j] * A[i][ii];
      out.set(i, j, std::move(acc));
    }
  return out;
}

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& M) {
  std::vector<std::vector<double>> r(M.rows(), std::vector<double>(M.cols()));
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) r[i][j] = M(i, j);
  return r;
}

std::vector<std::vector<Rational>> to_rows(const QMatrix& M) {
  std::vector<std::vector<Rational>> r(M.rows(), std::vector<Rational>(M.cols()));
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) r[i][j] = M(i, j);
  return r;
}

template <class C>
double hs_impl(const PolyMatrixT<C>& P) {
  double s = 0;
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j)
      for (const auto& [a, c] : P(i, j).terms()) {
        double v;
        if constexpr (std::is_same_v<C, Rational>)
          v = c.get_d();
        else
          v = c;
        s += factorial_d(a) * v * v;
      }
  return std::sqrt(s);
}

template <class C>
SupportSet support_impl(const PolyMatrixT<C>& P) {
  SupportSet E;
  E.p = P.rows();
  E.q = P.cols();
  E.d = P.dim();
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j)
      for (const auto& kv : P(i, j).terms()) E.triples.push_back({i, j, kv.first});
  return E;
}

}  // namespace

double eval_poly(const Poly& P, const std::vector<double>& point) { return eval_impl(P, point); }
double eval_poly(const FPoly& P, const std::vector<double>& point) { return eval_impl(P, point); }

Rational eval_exact(const Poly& P, const RVector& x) {
  if (static_cast<int>(x.size()) != P.dim()) throw std::invalid_argument("evaluation point has wrong dimension");
  Rational s = 0;
  for (const auto& [a, c] : P.terms()) {
    Rational m = c;
    for (size_t k = 0; k < a.size(); ++k)
      for (int e = 0; e < a[k]; ++e) m *= x[k];
    s += m;
  }
  return s;
}

Poly partial_derivative(const Poly& P, const Multiindex& alpha) {
  if (static_cast<int>(alpha.size()) != P.dim()) throw std::invalid_argument("derivative multiindex has wrong length");
  Poly out(P.dim());
  for (const auto& [a, c] : P.terms()) {
    if (!divides(alpha, a)) continue;
    Multiindex b = a;
    Rational f = c;
    for (size_t k = 0; k < a.size(); ++k)
      for (int e = 0; e < alpha[k]; ++e) f *= (a[k] - e);
    for (size_t k = 0; k < a.size(); ++k) b[k] -= alpha[k];
    out.add_term(b, f);
  }
  return out;
}

Rational taylor_coeff(const Poly& P, const Multiindex& alpha) {
  return eval_exact(partial_derivative(P, alpha), RVector(P.dim(), Rational(0)));
}

Poly homogeneous_part(const Poly& P, int m) {
  Poly out(P.dim());
  for (const auto& [a, c] : P.terms())
    if (order(a) == m) out.add_term(a, c);
  return out;
}

FPoly to_float(const Poly& P) {
  FPoly out(P.dim());
  for (const auto& [a, c] : P.terms()) out.add_term(a, c.get_d());
  return out;
}

FPolyMatrix to_float(const PolyMatrix& P) {
  FPolyMatrix out(P.rows(), P.cols(), P.dim(), P.has_explicit_cap() ? P.cap() : -1);
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j) out.set(i, j, to_float(P(i, j)));
  return out;
}

Poly compose(const Poly& P, const std::vector<Poly>& images) {
  int out_dim = images.empty() ? 0 : images[0].dim();
  return compose_impl(P, images, out_dim);
}

PolyMatrix compose(const PolyMatrix& P, const std::vector<Poly>& images) {
  int out_dim = images.empty() ? 0 : images[0].dim();
  PolyMatrix out(P.rows(), P.cols(), out_dim);
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j) out.set(i, j, compose_impl(P(i, j), images, out_dim));
  return out;
}

Poly embed(const Poly& P, int dim, int offset) {
  if (offset < 0 || offset + P.dim() > dim) throw std::invalid_argument("embed: target too small");
  Poly out(dim);
  for (const auto& [a, c] : P.terms()) {
    Multiindex b(dim, 0);
    for (size_t k = 0; k < a.size(); ++k) b[offset + k] = a[k];
    out.add_term(b, c);
  }
  return out;
}

Poly substitute_linear(const Poly& P, const QMatrix& C) {
  int d = P.dim();
  if (C.rows() != d || C.cols() != d) throw std::invalid_argument("substitution matrix has wrong size");
  std::vector<Poly> images(d, Poly(d));
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      if (C(l, k) != 0) images[k].add_term(unit_index(d, l), C(l, k));
  return compose_impl(P, images, d);
}

FPoly substitute_linear(const FPoly& P, const Eigen::MatrixXd& C) {
  int d = P.dim();
  if (C.rows() != d || C.cols() != d) throw std::invalid_argument("substitution matrix has wrong size");
  std::vector<FPoly> images(d, FPoly(d));
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      if (C(l, k) != 0) images[k].add_term(unit_index(d, l), C(l, k));
  FPoly out = compose_impl(P, images, d);
  out.prune_relative(kFloatPrune);
  return out;
}

Poly diagonal_shift(const Poly& P, const RVector& s0) {
  int d = P.dim();
  if (static_cast<int>(s0.size()) != d) throw std::invalid_argument("shift point has wrong dimension");
  std::vector<Poly> images;
  for (int k = 0; k < d; ++k) images.push_back(Poly::constant(d, s0[k]) + Poly::variable(d, k));
  return compose_impl(P, images, d);
}

FPolyMatrix act_group(const FPolyMatrix& P, const GroupElement& g) {
  if (g.A.rows() != P.rows() || g.B.rows() != P.cols() || g.C.rows() != P.dim())
    throw std::invalid_argument("group element shape does not match matrix");
  g.validate();
  int d = P.dim();
  std::vector<FPoly> images(d, FPoly(d));
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      if (g.C(l, k) != 0) images[k].add_term(unit_index(d, l), g.C(l, k));
  FPolyMatrix out = act_impl(P, images, to_rows(g.A), to_rows(g.B));
  double mx = 0;
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j)
      for (const auto& kv : out(i, j).terms()) mx = std::max(mx, std::abs(kv.second));
  FPolyMatrix pruned(out.rows(), out.cols(), d, P.has_explicit_cap() ? P.cap() : -1);
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) {
      FPoly e(d);
      for (const auto& [a, c] : out(i, j).terms())
        if (std::abs(c) > kFloatPrune * mx) e.add_term(a, c);
      pruned.set(i, j, std::move(e));
    }
  return pruned;
}

FPolyMatrix act_group(const PolyMatrix& P, const GroupElement& g) { return act_group(to_float(P), g); }

PolyMatrix act_group_exact(const PolyMatrix& P, const QMatrix& A, const QMatrix& B, const QMatrix& C) {
  if (A.rows() != P.rows() || A.cols() != P.rows() || B.rows() != P.cols() || B.cols() != P.cols() || C.rows() != P.dim() ||
      C.cols() != P.dim())
    throw std::invalid_argument("group element shape does not match matrix");
  int d = P.dim();
  std::vector<Poly> images(d, Poly(d));
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      if (C(l, k) != 0) images[k].add_term(unit_index(d, l), C(l, k));
  return act_impl(P, images, to_rows(A), to_rows(B));
}

double hs_norm(const PolyMatrix& P) { return hs_impl(P); }
double hs_norm(const FPolyMatrix& P) { return hs_impl(P); }

Rational hs_norm_squared_exact(const PolyMatrix& P) {
  Rational s = 0;
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j)
      for (const auto& [a, c] : P(i, j).terms()) s += factorial(a) * c * c;
  return s;
}

PolyMatrix matmul(const PolyMatrix& X, const PolyMatrix& Y) {
  if (X.cols() != Y.rows() || X.dim() != Y.dim()) throw std::invalid_argument("matmul shape mismatch");
  PolyMatrix out(X.rows(), Y.cols(), X.dim());
  for (int i = 0; i < X.rows(); ++i)
    for (int j = 0; j < Y.cols(); ++j) {
      Poly acc(X.dim());
      for (int k = 0; k < X.cols(); ++k)
        if (!X(i, k).is_zero() && !Y(k, j).is_zero()) acc += X(i, k) * Y(k, j);
      out.set(i, j, std::move(acc));
    }
  return out;
}

PolyMatrix identity_matrix(int n, int d) {
  PolyMatrix I(n, n, d);
  for (int i = 0; i < n; ++i) I.set(i, i, Poly::constant(d, 1));
  return I;
}

Poly exact_divide(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw std::domain_error("division by zero polynomial");
  Poly q(num.dim()), r = num;
  const auto& [lm, lc] = *den.terms().rbegin();
  while (!r.is_zero()) {
    const auto& [a, c] = *r.terms().rbegin();
    if (!divides(lm, a)) throw std::domain_error("polynomial division is not exact");
    Multiindex b = a;
    for (size_t k = 0; k < b.size(); ++k) b[k] -= lm[k];
    Poly t = Poly::monomial(b, c / lc);
    q += t;
    r -= t * den;
  }
  return q;
}

Poly determinant(const PolyMatrix& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("determinant of non-square matrix");
  int n = M.rows(), d = M.dim();
  if (n == 0) return Poly::constant(d, 1);
  std::vector<std::vector<Poly>> a(n, std::vector<Poly>(n, Poly(d)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = M(i, j);
  Poly prev = Poly::constant(d, 1);
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (!a[i][k].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) return Poly(d);
    if (piv != k) {
      std::swap(a[piv], a[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = exact_divide(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev);
    prev = a[k][k];
  }
  Poly det = a[n - 1][n - 1];
  if (sign < 0) det = -det;
  return det;
}

RVector SupportSet::weight_point(size_t k) const {
  const SupportTriple& t = triples.at(k);
  RVector v(p + q + d);
  v[t.i] = 1;
  v[p + t.j] = 1;
  for (int l = 0; l < d; ++l) v[p + q + l] = t.alpha[l];
  return v;
}

SupportSet support_set(const PolyMatrix& P) { return support_impl(P); }
SupportSet support_set(const FPolyMatrix& P) { return support_impl(P); }

std::string format_poly(const Poly& P, const std::string& var) {
  if (P.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, c] : P.terms()) {
    Rational mag = abs(c);
    bool neg = c < 0;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    bool constant = order(a) == 0;
    if (constant || mag != 1) os << to_string(mag);
    for (size_t k = 0; k < a.size(); ++k) {
      if (a[k] == 0) continue;
      os << var << (k + 1);
      if (a[k] > 1) os << '^' << a[k];
    }
  }
  return os.str();
}

std::string format_matrix(const PolyMatrix& M, const std::string& var) {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < M.rows(); ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < M.cols(); ++j) os << (j ? ", " : "") << format_poly(M(i, j), var);
  }
  os << ']';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& P) { return os << format_poly(P); }
std::ostream& operator<<(std::ostream& os, const PolyMatrix& M) { return os << format_matrix(M); }

}  // namespace semistab
