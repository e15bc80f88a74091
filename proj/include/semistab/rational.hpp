#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace semistab {

using Rational = mpq_class;
using RVector = std::vector<Rational>;

// Parses "a", "-a/b" or "a/b"; throws std::invalid_argument.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);
Rational factorial(int n);
// num/den in lowest terms; den must be nonzero.
Rational ratio(long num, long den);
Rational ratio(const mpz_class& num, const mpz_class& den);

// Dense row-major rational matrix.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static QMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  QMatrix operator*(const QMatrix& o) const;
  QMatrix operator+(const QMatrix& o) const;
  QMatrix operator-(const QMatrix& o) const;
  bool operator==(const QMatrix& o) const = default;
  QMatrix transpose() const;

  Rational determinant() const;
  int rank() const;
  // Throws std::domain_error when singular.
  QMatrix inverse() const;
  // Reduced row echelon form; pivots receives the pivot column of each nonzero row.
  QMatrix rref(std::vector<int>* pivots = nullptr) const;
  // Columns of the returned matrix span the right null space.
  QMatrix nullspace() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> a_;
};

// Incremental RREF over Q that tracks, for every stored row, the combination of
// inserted generators producing it. Used for canonical normal forms.
class RowReducer {
 public:
  explicit RowReducer(int dim) : dim_(dim) {}

  // Inserts generator number `id` (ids must be 0,1,2,...). Returns false if dependent.
  bool insert(RVector v);
  // Reduces v in place against the stored basis. Returns the combination of generators
  // (indexed by generator id) that was subtracted.
  RVector reduce(RVector& v) const;
  int generators() const { return n_gen_; }

 private:
  struct Row {
    RVector v;
    RVector combo;
    int pivot;
  };
  int dim_;
  int n_gen_ = 0;
  std::vector<Row> rows_;
};

}  // namespace semistab
