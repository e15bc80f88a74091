#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "semistab/rational.hpp"

namespace semistab {

using Multiindex = std::vector<int>;

int order(const Multiindex& a);
Rational factorial(const Multiindex& a);
double factorial_d(const Multiindex& a);
Multiindex unit_index(int d, int k);
Multiindex operator+(const Multiindex& a, const Multiindex& b);
// True when a <= b entrywise.
bool divides(const Multiindex& a, const Multiindex& b);
// All multiindices of length d with |alpha| == m, in graded-lex order.
std::vector<Multiindex> monomials_of_degree(int d, int m);
std::string format_multiindex(const Multiindex& a);

// Graded lexicographic: lower degree first; within a degree, lexicographically
// larger exponent vectors first (z1^2 < z1 z2 < z2^2).
struct GradedLex {
  bool operator()(const Multiindex& a, const Multiindex& b) const {
    int oa = order(a), ob = order(b);
    if (oa != ob) return oa < ob;
    return a > b;
  }
};

template <class C>
inline bool coeff_is_zero(const C& c) {
  return c == 0;
}

template <class C>
class PolyT {
 public:
  using Terms = std::map<Multiindex, C, GradedLex>;

  explicit PolyT(int dim = 0) : dim_(dim) {}

  static PolyT constant(int dim, const C& c) {
    PolyT p(dim);
    p.add_term(Multiindex(dim, 0), c);
    return p;
  }
  static PolyT monomial(const Multiindex& a, const C& c) {
    PolyT p(static_cast<int>(a.size()));
    p.add_term(a, c);
    return p;
  }
  static PolyT variable(int dim, int k) { return monomial(unit_index(dim, k), C(1)); }

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const { return terms_.empty() ? -1 : order(terms_.rbegin()->first); }
  // Lowest total degree of a stored term; -1 for the zero polynomial.
  int lowest_degree() const { return terms_.empty() ? -1 : order(terms_.begin()->first); }

  C coeff(const Multiindex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(const Multiindex& a, const C& c) {
    if (static_cast<int>(a.size()) != dim_) throw std::invalid_argument("multiindex length does not match polynomial dimension");
    for (int e : a)
      if (e < 0) throw std::invalid_argument("negative exponent");
    if (coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(a, c);
    if (!inserted) {
      it->second += c;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  PolyT& operator+=(const PolyT& o) {
    check_dim(o);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  PolyT& operator-=(const PolyT& o) {
    check_dim(o);
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }
  PolyT& operator*=(const C& s) {
    if (coeff_is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& kv : terms_) kv.second *= s;
    return *this;
  }
  friend PolyT operator+(PolyT a, const PolyT& b) { return a += b; }
  friend PolyT operator-(PolyT a, const PolyT& b) { return a -= b; }
  friend PolyT operator*(PolyT a, const C& s) { return a *= s; }
  friend PolyT operator*(const C& s, PolyT a) { return a *= s; }
  PolyT operator-() const {
    PolyT r = *this;
    for (auto& kv : r.terms_) kv.second = -kv.second;
    return r;
  }
  friend PolyT operator*(const PolyT& a, const PolyT& b) {
    a.check_dim(b);
    PolyT r(a.dim_);
    for (const auto& [x, cx] : a.terms_)
      for (const auto& [y, cy] : b.terms_) r.add_term(x + y, cx * cy);
    return r;
  }
  bool operator==(const PolyT& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
  bool operator!=(const PolyT& o) const { return !(*this == o); }

  // Drops terms with |c| <= rel * max|c|.
  void prune_relative(double rel) {
    double mx = 0;
    for (const auto& kv : terms_) mx = std::max(mx, std::abs(to_d(kv.second)));
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(to_d(it->second)) <= rel * mx)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

 private:
  static double to_d(const C& c) {
    if constexpr (std::is_same_v<C, Rational>)
      return c.get_d();
    else
      return static_cast<double>(c);
  }
  void check_dim(const PolyT& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("polynomial dimension mismatch");
  }

  int dim_;
  Terms terms_;
};

using Poly = PolyT<Rational>;
using FPoly = PolyT<double>;

constexpr double kFloatPrune = 1e-14;

template <class C>
class PolyMatrixT {
 public:
  PolyMatrixT() = default;
  // cap < 0 means "max entry degree".
  PolyMatrixT(int p, int q, int d, int cap = -1) : p_(p), q_(q), d_(d), cap_(cap), e_(static_cast<size_t>(p) * q, PolyT<C>(d)) {
    if (p < 0 || q < 0 || d < 0) throw std::invalid_argument("negative matrix shape");
  }

  int rows() const { return p_; }
  int cols() const { return q_; }
  int dim() const { return d_; }
  int cap() const { return cap_ >= 0 ? cap_ : max_degree(); }
  bool has_explicit_cap() const { return cap_ >= 0; }

  const PolyT<C>& operator()(int i, int j) const { return e_[idx(i, j)]; }
  const PolyT<C>& at(int i, int j) const { return e_[idx(i, j)]; }
  void set(int i, int j, PolyT<C> v) {
    if (v.dim() != d_) throw std::invalid_argument("entry dimension does not match matrix");
    if (cap_ >= 0 && v.degree() > cap_) throw std::invalid_argument("entry degree exceeds declared cap");
    e_[idx(i, j)] = std::move(v);
  }
  int max_degree() const {
    int m = -1;
    for (const auto& e : e_) m = std::max(m, e.degree());
    return m;
  }
  bool is_zero() const {
    for (const auto& e : e_)
      if (!e.is_zero()) return false;
    return true;
  }
  bool operator==(const PolyMatrixT& o) const { return p_ == o.p_ && q_ == o.q_ && d_ == o.d_ && e_ == o.e_; }
  bool operator!=(const PolyMatrixT& o) const { return !(*this == o); }

 private:
  size_t idx(int i, int j) const {
    if (i < 0 || i >= p_ || j < 0 || j >= q_) throw std::out_of_range("matrix index out of range");
    return static_cast<size_t>(i) * q_ + j;
  }
  int p_ = 0, q_ = 0, d_ = 0, cap_ = -1;
  std::vector<PolyT<C>> e_;
};

using PolyMatrix = PolyMatrixT<Rational>;
using FPolyMatrix = PolyMatrixT<double>;

struct GroupElement {
  Eigen::MatrixXd A, B, C;
  bool volume_preserving = false;
  // Throws std::invalid_argument when the declared invariants fail.
  void validate() const;
  static GroupElement identity(int p, int q, int d);
};
GroupElement operator*(const GroupElement& g1, const GroupElement& g2);

// Evaluation and calculus.
double eval_poly(const Poly& P, const std::vector<double>& point);
double eval_poly(const FPoly& P, const std::vector<double>& point);
Rational eval_exact(const Poly& P, const RVector& point);
Poly partial_derivative(const Poly& P, const Multiindex& alpha);
Rational taylor_coeff(const Poly& P, const Multiindex& alpha);
Poly homogeneous_part(const Poly& P, int m);
FPoly to_float(const Poly& P);
FPolyMatrix to_float(const PolyMatrix& P);

// Composition: variable k of P is replaced by images[k]; all images share one dimension.
Poly compose(const Poly& P, const std::vector<Poly>& images);
PolyMatrix compose(const PolyMatrix& P, const std::vector<Poly>& images);
// Embeds P into `dim` variables, sending variable k to variable offset + k.
Poly embed(const Poly& P, int dim, int offset);

Poly substitute_linear(const Poly& P, const QMatrix& C);
FPoly substitute_linear(const FPoly& P, const Eigen::MatrixXd& C);
Poly diagonal_shift(const Poly& P, const RVector& s0);

FPolyMatrix act_group(const FPolyMatrix& P, const GroupElement& g);
FPolyMatrix act_group(const PolyMatrix& P, const GroupElement& g);
PolyMatrix act_group_exact(const PolyMatrix& P, const QMatrix& A, const QMatrix& B, const QMatrix& C);

double hs_norm(const PolyMatrix& P);
double hs_norm(const FPolyMatrix& P);
Rational hs_norm_squared_exact(const PolyMatrix& P);

// Matrix algebra over polynomial entries.
PolyMatrix matmul(const PolyMatrix& X, const PolyMatrix& Y);
PolyMatrix identity_matrix(int n, int d);
// Exact determinant of a square polynomial matrix (fraction-free elimination).
Poly determinant(const PolyMatrix& M);
// Exact division; throws std::domain_error when the divisor does not divide.
Poly exact_divide(const Poly& num, const Poly& den);

struct SupportTriple {
  int i = 0, j = 0;
  Multiindex alpha;
  bool operator==(const SupportTriple& o) const = default;
};

struct SupportSet {
  int p = 0, q = 0, d = 0;
  std::vector<SupportTriple> triples;
  bool empty() const { return triples.empty(); }
  size_t size() const { return triples.size(); }
  // (e^i; e^j; alpha) in Q^{p+q+d}.
  RVector weight_point(size_t k) const;
};

SupportSet support_set(const PolyMatrix& P);
SupportSet support_set(const FPolyMatrix& P);

std::string format_poly(const Poly& P, const std::string& var = "z");
std::string format_matrix(const PolyMatrix& M, const std::string& var = "z");
std::ostream& operator<<(std::ostream& os, const Poly& P);
std::ostream& operator<<(std::ostream& os, const PolyMatrix& M);

}  // namespace semistab
