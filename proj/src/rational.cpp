#include "semistab/rational.hpp"

#include <stdexcept>

namespace semistab {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto valid_int = [](const std::string& t) {
    size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den)) throw std::invalid_argument("malformed rational '" + text + "'");
  if (num[0] == '+') num = num.substr(1);
  if (den[0] == '+') den = den.substr(1);
  mpz_class n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

Rational factorial(int n) {
  mpz_class f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return Rational(f);
}

Rational ratio(long num, long den) { return ratio(mpz_class(num), mpz_class(den)); }

Rational ratio(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("QMatrix product shape mismatch");
  QMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("QMatrix sum shape mismatch");
  QMatrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("QMatrix difference shape mismatch");
  QMatrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

QMatrix QMatrix::transpose() const {
  QMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

QMatrix QMatrix::rref(std::vector<int>* pivots) const {
  QMatrix m = *this;
  if (pivots) pivots->clear();
  int row = 0;
  for (int col = 0; col < cols_ && row < rows_; ++col) {
    int piv = -1;
    for (int i = row; i < rows_; ++i)
      if (m(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < cols_; ++j) std::swap(m(piv, j), m(row, j));
    Rational inv = 1 / m(row, col);
    for (int j = col; j < cols_; ++j) m(row, j) *= inv;
    for (int i = 0; i < rows_; ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rational f = m(i, col);
      for (int j = col; j < cols_; ++j) m(i, j) -= f * m(row, j);
    }
    if (pivots) pivots->push_back(col);
    ++row;
  }
  return m;
}

int QMatrix::rank() const {
  std::vector<int> piv;
  rref(&piv);
  return static_cast<int>(piv.size());
}

Rational QMatrix::determinant() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
  QMatrix m = *this;
  Rational det = 1;
  for (int col = 0; col < cols_; ++col) {
    int piv = -1;
    for (int i = col; i < rows_; ++i)
      if (m(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      for (int j = 0; j < cols_; ++j) std::swap(m(piv, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    for (int i = col + 1; i < rows_; ++i) {
      if (m(i, col) == 0) continue;
      Rational f = m(i, col) / m(col, col);
      for (int j = col; j < cols_; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

QMatrix QMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
  int n = rows_;
  QMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  std::vector<int> piv;
  QMatrix r = aug.rref(&piv);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] >= n) throw std::domain_error("singular matrix");
  QMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
  return inv;
}

QMatrix QMatrix::nullspace() const {
  std::vector<int> piv;
  QMatrix r = rref(&piv);
  std::vector<bool> is_pivot(cols_, false);
  for (int c : piv) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < cols_; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  QMatrix ns(cols_, static_cast<int>(free_cols.size()));
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int f = free_cols[k];
    ns(f, static_cast<int>(k)) = 1;
    for (size_t i = 0; i < piv.size(); ++i) ns(piv[i], static_cast<int>(k)) = -r(static_cast<int>(i), f);
  }
  return ns;
}

RVector RowReducer::reduce(RVector& v) const {
  RVector combo(n_gen_);
  for (const Row& row : rows_) {
    if (v[row.pivot] == 0) continue;
    Rational f = v[row.pivot];
    for (int j = row.pivot; j < dim_; ++j)
      if (row.v[j] != 0) v[j] -= f * row.v[j];
    for (size_t g = 0; g < row.combo.size(); ++g)
      if (row.combo[g] != 0) combo[g] += f * row.combo[g];
  }
  return combo;
}

bool RowReducer::insert(RVector v) {
  if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("RowReducer dimension mismatch");
  int id = n_gen_++;
  for (Row& row : rows_) row.combo.resize(n_gen_);
  RVector sub = reduce(v);
  sub.resize(n_gen_);
  RVector combo(n_gen_);
  for (int g = 0; g < n_gen_; ++g) combo[g] = -sub[g];
  combo[id] += 1;
  int pivot = -1;
  for (int j = 0; j < dim_; ++j)
    if (v[j] != 0) {
      pivot = j;
      break;
    }
  if (pivot < 0) return false;
  Rational inv = 1 / v[pivot];
  for (int j = pivot; j < dim_; ++j) v[j] *= inv;
  for (auto& c : combo) c *= inv;
  for (Row& row : rows_) {
    if (row.v[pivot] == 0) continue;
    Rational f = row.v[pivot];
    for (int j = pivot; j < dim_; ++j)
      if (v[j] != 0) row.v[j] -= f * v[j];
    for (int g = 0; g < n_gen_; ++g)
      if (combo[g] != 0) row.combo[g] -= f * combo[g];
  }
  Row nr{std::move(v), std::move(combo), pivot};
  auto it = rows_.begin();
  while (it != rows_.end() && it->pivot < pivot) ++it;
  rows_.insert(it, std::move(nr));
  return true;
}

}  // namespace semistab
