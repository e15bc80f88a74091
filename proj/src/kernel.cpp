#include "semistab/blockdecomp.hpp"

namespace semistab {

namespace {

void combinations(int n, int r, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int k = start; k < n; ++k) {
      cur.push_back(k);
      self(self, k + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

bool odd_permutation(std::vector<int> perm) {
  bool odd = false;
  for (size_t i = 0; i < perm.size(); ++i)
    while (perm[i] != static_cast<int>(i)) {
      std::swap(perm[i], perm[perm[i]]);
      odd = !odd;
    }
  return odd;
}

}  // namespace

KernelParametrization parametrize_kernel(const Eigen::MatrixXd& M, const Eigen::MatrixXd& basis) {
  const int p = static_cast<int>(M.rows()), q = static_cast<int>(M.cols());
  if (basis.rows() != q || basis.cols() != q) throw std::invalid_argument("basis must be q x q");
  Eigen::MatrixXd N = M * basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(N);
  Eigen::VectorXd sv = svd.singularValues();
  KernelParametrization out;
  const int k = static_cast<int>(sv.size());
  double top = k > 0 ? sv(0) : 0.0;
  // Rank: first singular value gap above 1e6, or the first value at the noise floor.
  int r = 0;
  double gap = std::numeric_limits<double>::infinity();
  if (top > 0) {
    r = k;
    for (int i = 0; i + 1 < k; ++i) {
      double ratio = sv(i + 1) > 0 ? sv(i) / sv(i + 1) : std::numeric_limits<double>::infinity();
      if (sv(i + 1) <= 1e-14 * top || ratio > 1e6) {
        r = i + 1;
        gap = ratio;
        break;
      }
    }
    // Full rank is only trusted when the smallest value is not itself near the noise floor.
    if (r == k && sv(k - 1) < 1e-6 * top) throw AmbiguousRank(top / sv(k - 1));
  }
  out.rank = r;
  out.gap = gap;
  std::vector<std::vector<int>> row_sets, col_sets;
  combinations(p, r, row_sets);
  combinations(q, r, col_sets);
  double best = -1;
  for (const auto& rs : row_sets)
    for (const auto& cs : col_sets) {
      Eigen::MatrixXd sub(r, r);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) sub(a, b) = N(rs[a], cs[b]);
      double det = r ? std::abs(sub.determinant()) : 1.0;
      if (det > best * (1 + 1e-12)) {
        best = det;
        out.minor_rows = rs;
        out.minor_cols = cs;
      }
    }
  std::vector<int> rest;
  for (int c = 0; c < q; ++c)
    if (std::find(out.minor_cols.begin(), out.minor_cols.end(), c) == out.minor_cols.end()) rest.push_back(c);
  Eigen::MatrixXd m(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) m(a, b) = N(out.minor_rows[a], out.minor_cols[b]);
  out.coefficients.resize(q - r, r);
  for (size_t kk = 0; kk < rest.size(); ++kk) {
    Eigen::VectorXd rhs(r);
    for (int a = 0; a < r; ++a) rhs(a) = N(out.minor_rows[a], rest[kk]);
    Eigen::VectorXd c = r ? Eigen::VectorXd(m.partialPivLu().solve(rhs)) : Eigen::VectorXd();
    out.coefficients.row(kk) = c.transpose();
    Eigen::VectorXd x = basis.col(rest[kk]);
    for (int a = 0; a < r; ++a) x -= c(a) * basis.col(out.minor_cols[a]);
    out.kernel.push_back(x);
  }
  std::vector<int> perm = out.minor_cols;
  perm.insert(perm.end(), rest.begin(), rest.end());
  if (!out.kernel.empty() && odd_permutation(perm)) out.kernel[0] = -out.kernel[0];
  return out;
}

}  // namespace semistab
