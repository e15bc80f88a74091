#include "semistab/blockdecomp.hpp"

#include <numeric>
#include <sstream>

namespace semistab {

namespace {

constexpr int kInf = 1 << 20;

// Splits a 2d multiindex into (first half, second half).
std::pair<Multiindex, Multiindex> split(const Multiindex& a, int d) {
  return {Multiindex(a.begin(), a.begin() + d), Multiindex(a.begin() + d, a.end())};
}

// Lowest total degree in the second block of variables; kInf for zero.
int z_order(const Poly& P, int d) {
  int best = kInf;
  for (const auto& kv : P.terms()) {
    int o = 0;
    for (int k = d; k < 2 * d; ++k) o += kv.first[k];
    best = std::min(best, o);
  }
  return best;
}

int z_degree(const Poly& P, int d) {
  int best = -1;
  for (const auto& kv : P.terms()) {
    int o = 0;
    for (int k = d; k < 2 * d; ++k) o += kv.first[k];
    best = std::max(best, o);
  }
  return best;
}

struct Coord {
  int slot;
  Multiindex z, o;
};

struct CoordLess {
  bool operator()(const Coord& a, const Coord& b) const {
    if (a.slot != b.slot) return a.slot < b.slot;
    GradedLex g;
    if (a.z != b.z) return g(a.z, b.z);
    return g(a.o, b.o);
  }
};

using SparseVec = std::map<Coord, Rational, CoordLess>;

// Order-m part (in the second variable block) of one polynomial, keyed by slot.
void add_order_part(SparseVec& v, const Poly& P, int slot, int m, int d) {
  for (const auto& [a, c] : P.terms()) {
    auto [o, z] = split(a, d);
    if (order(z) == m) v[{slot, z, o}] += c;
  }
}

// Canonical normal form of h modulo the span of gens. Returns the combination subtracted.
RVector normal_form(SparseVec& h, const std::vector<SparseVec>& gens) {
  std::map<Coord, int, CoordLess> index;
  for (const auto& kv : h) index.emplace(kv.first, 0);
  for (const auto& g : gens)
    for (const auto& kv : g) index.emplace(kv.first, 0);
  int n = 0;
  for (auto& kv : index) kv.second = n++;
  RowReducer rr(n);
  for (const auto& g : gens) {
    RVector v(n);
    for (const auto& kv : g) v[index[kv.first]] = kv.second;
    rr.insert(std::move(v));
  }
  RVector hv(n);
  for (const auto& kv : h) hv[index[kv.first]] = kv.second;
  RVector combo = rr.reduce(hv);
  combo.resize(gens.size());
  h.clear();
  for (const auto& kv : index)
    if (hv[kv.second] != 0) h[kv.first] = hv[kv.second];
  return combo;
}

int max_other_degree(const SparseVec& v) {
  int m = 0;
  for (const auto& kv : v) m = std::max(m, order(kv.first.o));
  return m;
}

std::vector<Multiindex> monomials_up_to(int d, int deg) {
  std::vector<Multiindex> out;
  for (int m = 0; m <= deg; ++m)
    for (auto& a : monomials_of_degree(d, m)) out.push_back(a);
  return out;
}

SparseVec shifted(const SparseVec& v, const Multiindex& gamma) {
  SparseVec out;
  for (const auto& [c, x] : v) out[{c.slot, c.z, c.o + gamma}] = x;
  return out;
}

std::vector<int> group_runs(const std::vector<std::vector<int>>& keys) {
  std::vector<int> sizes;
  for (size_t k = 0; k < keys.size(); ++k) {
    if (k > 0 && keys[k] == keys[k - 1])
      ++sizes.back();
    else
      sizes.push_back(1);
  }
  return sizes;
}

}  // namespace

int reduced_dim(int d) { return 2 * d; }

int BlockDecomposition::row_start(int g) const { return std::accumulate(row_groups.begin(), row_groups.begin() + g, 0); }
int BlockDecomposition::col_start(int g) const { return std::accumulate(col_groups.begin(), col_groups.begin() + g, 0); }
int BlockDecomposition::row_group_of(int r) const {
  for (int g = 0, acc = 0; g < row_group_count(); ++g) {
    acc += row_groups[g];
    if (r < acc) return g;
  }
  throw std::out_of_range("row outside decomposition");
}
int BlockDecomposition::col_group_of(int c) const {
  for (int g = 0, acc = 0; g < col_group_count(); ++g) {
    acc += col_groups[g];
    if (c < acc) return g;
  }
  throw std::out_of_range("column outside decomposition");
}

void check_derivative_closed(const PolyMatrix& M) {
  const int p = M.rows(), q = M.cols(), d = M.dim();
  for (int j = 0; j < q; ++j) {
    int deg = 0;
    for (int i = 0; i < p; ++i) deg = std::max(deg, M(i, j).degree());
    auto gammas = monomials_up_to(d, deg);
    for (int k = 0; k < d; ++k) {
      SparseVec h;
      for (int i = 0; i < p; ++i) {
        Poly dp = partial_derivative(M(i, j), unit_index(d, k));
        for (const auto& [a, c] : dp.terms()) h[{i, {}, a}] += c;
      }
      if (h.empty()) continue;
      std::vector<SparseVec> gens;
      for (int jj = 0; jj < j; ++jj) {
        SparseVec col;
        for (int i = 0; i < p; ++i)
          for (const auto& [a, c] : M(i, jj).terms()) col[{i, {}, a}] = c;
        for (const auto& g : gammas) gens.push_back(shifted(col, g));
      }
      normal_form(h, gens);
      if (!h.empty()) throw NotDerivativeClosed(j, k);
    }
  }
}

PolyMatrix in_s_coordinates(const PolyMatrix& M) {
  const int d = M.dim();
  PolyMatrix out(M.rows(), M.cols(), 2 * d);
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) out.set(i, j, embed(M(i, j), 2 * d, 0));
  return out;
}

PolyMatrix reduced_matrix(const PolyMatrix& M, const PolyMatrix& A, const PolyMatrix& B) {
  const int d = M.dim();
  if (A.rows() != M.rows() || A.cols() != M.rows() || B.rows() != M.cols() || B.cols() != M.cols())
    throw std::invalid_argument("witness shapes do not match incidence matrix");
  if (A.dim() != d || B.dim() != d) throw std::invalid_argument("witness variable count does not match");
  PolyMatrix AM = in_s_coordinates(matmul(A, M));
  std::vector<Poly> t_images;
  for (int k = 0; k < d; ++k) t_images.push_back(Poly::variable(2 * d, k) + Poly::variable(2 * d, d + k));
  PolyMatrix Bsz = d > 0 ? compose(B, t_images) : in_s_coordinates(B);
  return matmul(AM, Bsz);
}

PolyMatrix flip_z(const PolyMatrix& R) {
  const int d = R.dim() / 2;
  std::vector<Poly> images;
  for (int k = 0; k < d; ++k) images.push_back(Poly::variable(2 * d, k));
  for (int k = 0; k < d; ++k) images.push_back(-Poly::variable(2 * d, d + k));
  return compose(R, images);
}

EliminationResult eliminate(const PolyMatrix& M) {
  check_derivative_closed(M);
  const int p = M.rows(), q = M.cols(), d = M.dim(), n2 = 2 * d;

  // Column phase in (t, z) with s = t - z.
  std::vector<Poly> s_images;
  for (int k = 0; k < d; ++k) s_images.push_back(Poly::variable(n2, k) - Poly::variable(n2, d + k));
  std::vector<std::vector<Poly>> W(p, std::vector<Poly>(q, Poly(n2)));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) W[i][j] = d > 0 ? compose(M(i, j), s_images) : M(i, j);
  PolyMatrix B = identity_matrix(q, d);
  std::vector<int> col_ord(q, kInf);

  auto column_part = [&](int j, int m) {
    SparseVec v;
    for (int i = 0; i < p; ++i) add_order_part(v, W[i][j], i, m, d);
    return v;
  };

  for (int j = 0; j < q; ++j) {
    auto col_top = [&] {
      int top = -1;
      for (int i = 0; i < p; ++i) top = std::max(top, z_degree(W[i][j], d));
      return top;
    };
    for (int m = 0; m <= col_top(); ++m) {
      SparseVec h = column_part(j, m);
      if (h.empty()) continue;
      std::vector<int> cands;
      for (int jj = 0; jj < j; ++jj)
        if (col_ord[jj] == m) cands.push_back(jj);
      auto gammas = monomials_up_to(d, max_other_degree(h));
      std::vector<SparseVec> gens;
      std::vector<std::pair<int, Multiindex>> labels;
      for (int jj : cands) {
        SparseVec lead = column_part(jj, m);
        for (const auto& g : gammas) {
          gens.push_back(shifted(lead, g));
          labels.push_back({jj, g});
        }
      }
      RVector combo = normal_form(h, gens);
      std::map<int, Poly> coef;
      for (size_t g = 0; g < combo.size(); ++g)
        if (combo[g] != 0) {
          auto [jj, gamma] = labels[g];
          coef.emplace(jj, Poly(d)).first->second.add_term(gamma, combo[g]);
        }
      for (const auto& [jj, c] : coef) {
        Poly c2 = embed(c, n2, 0);
        for (int i = 0; i < p; ++i)
          if (!W[i][jj].is_zero()) W[i][j] -= c2 * W[i][jj];
        for (int r = 0; r < q; ++r)
          if (!B(r, jj).is_zero()) B.set(r, j, B(r, j) - c * B(r, jj));
      }
      if (!h.empty()) {
        col_ord[j] = m;
        break;
      }
    }
  }

  // Column groups: consecutive runs of equal orders.
  std::vector<std::vector<int>> col_keys;
  for (int j = 0; j < q; ++j) col_keys.push_back({col_ord[j]});
  std::vector<int> col_groups = group_runs(col_keys);
  const int ncg = static_cast<int>(col_groups.size());
  std::vector<int> gstart(ncg + 1, 0);
  for (int g = 0; g < ncg; ++g) gstart[g + 1] = gstart[g] + col_groups[g];

  // Row phase in (s, z) with t = s + z.
  std::vector<Poly> t_images;
  for (int k = 0; k < d; ++k) t_images.push_back(Poly::variable(n2, k) + Poly::variable(n2, d + k));
  for (int k = 0; k < d; ++k) t_images.push_back(Poly::variable(n2, d + k));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) W[i][j] = d > 0 ? compose(W[i][j], t_images) : W[i][j];
  PolyMatrix A = identity_matrix(p, d);

  auto block_order = [&](const std::vector<Poly>& row, int g) {
    int o = kInf;
    for (int c = gstart[g]; c < gstart[g + 1]; ++c) o = std::min(o, z_order(row[c], d));
    return o;
  };
  auto row_part = [&](const std::vector<Poly>& row, int g, int m) {
    SparseVec v;
    for (int c = gstart[g]; c < gstart[g + 1]; ++c) add_order_part(v, row[c], c, m, d);
    return v;
  };

  std::vector<std::vector<int>> profile(p, std::vector<int>(ncg, kInf));
  for (int g = ncg - 1; g >= 0; --g) {
    for (int i = 0; i < p; ++i) {
      auto row_top = [&] {
        int top = -1;
        for (int c = gstart[g]; c < gstart[g + 1]; ++c) top = std::max(top, z_degree(W[i][c], d));
        return top;
      };
      int ord = kInf;
      for (int m = 0; m <= row_top(); ++m) {
        SparseVec h = row_part(W[i], g, m);
        if (h.empty()) continue;
        std::vector<int> cands;
        for (int ii = 0; ii < i; ++ii)
          if (profile[ii][g] == m) cands.push_back(ii);
        auto gammas = monomials_up_to(d, max_other_degree(h));
        std::vector<SparseVec> gens;
        std::vector<std::pair<int, Multiindex>> labels;
        for (int ii : cands) {
          SparseVec lead = row_part(W[ii], g, m);
          for (const auto& gm : gammas) {
            gens.push_back(shifted(lead, gm));
            labels.push_back({ii, gm});
          }
        }
        RVector combo = normal_form(h, gens);
        std::map<int, Poly> coef;
        for (size_t k = 0; k < combo.size(); ++k)
          if (combo[k] != 0) {
            auto [ii, gamma] = labels[k];
            coef.emplace(ii, Poly(d)).first->second.add_term(gamma, combo[k]);
          }
        if (coef.empty()) {
          ord = m;
          break;
        }
        std::vector<Poly> row = W[i];
        for (const auto& [ii, c] : coef) {
          Poly c2 = embed(c, n2, 0);
          for (int col = 0; col < q; ++col)
            if (!W[ii][col].is_zero()) row[col] -= c2 * W[ii][col];
        }
        bool harms = false;
        for (int g2 = g + 1; g2 < ncg; ++g2)
          if (block_order(row, g2) < profile[i][g2]) harms = true;
        if (harms) {
          ord = m;
          break;
        }
        W[i] = std::move(row);
        for (const auto& [ii, c] : coef)
          for (int col = 0; col < p; ++col)
            if (!A(ii, col).is_zero()) A.set(i, col, A(i, col) - c * A(ii, col));
        if (!h.empty()) {
          ord = m;
          break;
        }
      }
      profile[i][g] = std::min(ord, block_order(W[i], g));
    }
  }

  std::vector<int> row_groups = group_runs(profile);
  EliminationResult res;
  res.A = A;
  res.B = B;
  res.R = PolyMatrix(p, q, n2);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) res.R.set(i, j, W[i][j]);
  res.decomposition.row_groups = row_groups;
  res.decomposition.col_groups = col_groups;
  res.decomposition.A = A;
  res.decomposition.B = B;
  res.decomposition.D = vanishing_degrees(res.R, row_groups, col_groups, &res.decomposition.zero_block);
  return res;
}

std::vector<std::vector<int>> vanishing_degrees(const PolyMatrix& R, const std::vector<int>& row_groups, const std::vector<int>& col_groups,
                                                std::vector<std::vector<bool>>* zero_flags) {
  const int d = R.dim() / 2;
  if (std::accumulate(row_groups.begin(), row_groups.end(), 0) != R.rows() ||
      std::accumulate(col_groups.begin(), col_groups.end(), 0) != R.cols())
    throw std::invalid_argument("groups do not partition the matrix");
  const int nr = static_cast<int>(row_groups.size()), nc = static_cast<int>(col_groups.size());
  std::vector<std::vector<int>> D(nr, std::vector<int>(nc, kInf));
  std::vector<std::vector<int>> top(nr, std::vector<int>(nc, -1));
  for (int bi = 0, r0 = 0; bi < nr; r0 += row_groups[bi], ++bi)
    for (int bj = 0, c0 = 0; bj < nc; c0 += col_groups[bj], ++bj)
      for (int r = r0; r < r0 + row_groups[bi]; ++r)
        for (int c = c0; c < c0 + col_groups[bj]; ++c) {
          D[bi][bj] = std::min(D[bi][bj], z_order(R(r, c), d));
          top[bi][bj] = std::max(top[bi][bj], z_degree(R(r, c), d));
        }
  std::vector<std::vector<bool>> flags(nr, std::vector<bool>(nc, false));
  for (int bi = 0; bi < nr; ++bi)
    for (int bj = 0; bj < nc; ++bj) {
      if (D[bi][bj] != kInf) continue;
      flags[bi][bj] = true;
      int mx = -1;
      for (int k = 0; k < nc; ++k) mx = std::max(mx, top[bi][k]);
      for (int k = 0; k < nr; ++k) mx = std::max(mx, top[k][bj]);
      D[bi][bj] = 1 + std::max(mx, 0);
    }
  if (zero_flags) *zero_flags = flags;
  return D;
}

VerificationReport verify_block_decomposition(const PolyMatrix& M, const BlockDecomposition& dec) {
  VerificationReport rep;
  const int p = M.rows(), q = M.cols(), d = M.dim();
  const int nr = dec.row_group_count(), nc = dec.col_group_count();
  auto add = [&](Violation v) {
    rep.pass = false;
    rep.violations.push_back(std::move(v));
  };
  if (std::accumulate(dec.row_groups.begin(), dec.row_groups.end(), 0) != p ||
      std::accumulate(dec.col_groups.begin(), dec.col_groups.end(), 0) != q)
    throw std::invalid_argument("groups do not partition the matrix");
  if (static_cast<int>(dec.D.size()) != nr) throw std::invalid_argument("formal degree matrix has wrong row count");
  for (const auto& row : dec.D)
    if (static_cast<int>(row.size()) != nc) throw std::invalid_argument("formal degree matrix has wrong column count");

  Poly one = Poly::constant(d, 1);
  if (determinant(dec.A) != one) {
    rep.det_A_ok = false;
    add({"determinant", -1, -1, -1, -1, {}, {}, "det A = " + format_poly(determinant(dec.A), "s")});
  }
  if (determinant(dec.B) != one) {
    rep.det_B_ok = false;
    add({"determinant", -1, -1, -1, -1, {}, {}, "det B = " + format_poly(determinant(dec.B), "t")});
  }
  for (int bi = 0; bi < nr; ++bi)
    for (int bj = 0; bj < nc; ++bj) {
      if ((bi > 0 && dec.D[bi][bj] < dec.D[bi - 1][bj]) || (bj > 0 && dec.D[bi][bj] < dec.D[bi][bj - 1])) {
        rep.monotone = false;
        add({"monotonicity", bi, bj, -1, -1, {}, {}, "formal degrees decrease at this block"});
      }
    }
  PolyMatrix R = reduced_matrix(M, dec.A, dec.B);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < q; ++c) {
      int bi = dec.row_group_of(r), bj = dec.col_group_of(c);
      int o = z_order(R(r, c), d);
      if (o >= dec.D[bi][bj]) continue;
      // Witness: lowest z-monomial, with its coefficient polynomial in s.
      Multiindex beta;
      Poly part(2 * d);
      for (const auto& [a, coef] : R(r, c).terms()) {
        auto [sa, za] = split(a, d);
        if (order(za) != o) continue;
        if (beta.empty() || GradedLex()(za, beta)) beta = za;
        part.add_term(a, coef);
      }
      std::string detail = "order-" + std::to_string(o) + " term ";
      // Format with s and z names.
      std::ostringstream os;
      bool first = true;
      for (const auto& [a, coef] : part.terms()) {
        auto [sa, za] = split(a, d);
        Rational mag = abs(coef);
        os << (first ? (coef < 0 ? "-" : "") : (coef < 0 ? " - " : " + "));
        first = false;
        bool bare = order(sa) + order(za) == 0;
        if (bare || mag != 1) os << (mag.get_den() != 1 && !bare ? "(" + to_string(mag) + ")" : to_string(mag));
        auto var = [&](const char* nm, const Multiindex& m) {
          for (int k = 0; k < d; ++k) {
            if (m[k] == 0) continue;
            os << nm;
            if (d > 1) os << (k + 1);
            if (m[k] > 1) os << '^' << m[k];
          }
        };
        var("s", sa);
        var("z", za);
      }
      detail += os.str();
      add({"order", bi, bj, r, c, Multiindex(d, 0), beta, detail});
    }
  return rep;
}

PolyMatrix tile_map_from_reduced(const PolyMatrix& R, const BlockDecomposition& dec, const Tile& T, const RVector& t0) {
  const int d = R.dim() / 2;
  if (static_cast<int>(t0.size()) != d) throw std::invalid_argument("base point has wrong dimension");
  if (T.iL < 0 || T.iR >= dec.row_group_count() || T.iL > T.iR || T.jL < 0 || T.jR >= dec.col_group_count() || T.jL > T.jR)
    throw std::invalid_argument("tile outside decomposition");
  int r0 = dec.row_start(T.iL), r1 = dec.row_start(T.iR + 1);
  int c0 = dec.col_start(T.jL), c1 = dec.col_start(T.jR + 1);
  PolyMatrix out(r1 - r0, c1 - c0, d);
  for (int r = r0; r < r1; ++r)
    for (int c = c0; c < c1; ++c) {
      int D = dec.D[dec.row_group_of(r)][dec.col_group_of(c)];
      Poly e(d);
      for (const auto& [a, coef] : R(r, c).terms()) {
        auto [sa, za] = split(a, d);
        if (order(za) != D) continue;
        Rational v = coef;
        for (int k = 0; k < d; ++k)
          for (int x = 0; x < sa[k]; ++x) v *= t0[k];
        e.add_term(za, v);
      }
      out.set(r - r0, c - c0, std::move(e));
    }
  return out;
}

PolyMatrix tile_map(const PolyMatrix& M, const BlockDecomposition& dec, const Tile& T, const RVector& t0) {
  if (static_cast<int>(t0.size()) != M.dim()) throw std::invalid_argument("base point has wrong dimension");
  return tile_map_from_reduced(reduced_matrix(M, dec.A, dec.B), dec, T, t0);
}

bool is_useful(const BlockDecomposition& dec, const Tile& T) {
  const int ms = dec.row_group_count() - 1, m = dec.col_group_count() - 1;
  int iP = std::min(T.iR + 1, ms), jP = std::min(T.jR + 1, m);
  auto inside = [&](int i, int j) { return i >= T.iL && i <= T.iR && j >= T.jL && j <= T.jR; };
  for (int i = T.iL; i <= iP; ++i)
    for (int j = T.jL; j <= jP; ++j) {
      if (inside(i, j)) continue;
      if (inside(i - 1, j) && !(dec.D[i][j] > dec.D[i - 1][j])) return false;
      if (inside(i, j - 1) && !(dec.D[i][j] > dec.D[i][j - 1])) return false;
    }
  return true;
}

std::vector<Tile> useful_tiles(const BlockDecomposition& dec) {
  std::vector<Tile> out;
  const int nr = dec.row_group_count(), nc = dec.col_group_count();
  for (int iL = 0; iL < nr; ++iL)
    for (int iR = iL; iR < nr; ++iR)
      for (int jL = 0; jL < nc; ++jL)
        for (int jR = jL; jR < nc; ++jR) {
          Tile T{iL, iR, jL, jR, 0};
          if (is_useful(dec, T)) out.push_back(T);
        }
  return out;
}

std::vector<Tile> homogeneous_tiles(const PolyMatrix& R, const BlockDecomposition& dec) {
  const int d = R.dim() / 2;
  auto homogeneous = [&](const Tile& T) {
    int D = dec.D[T.iL][T.jL];
    for (int i = T.iL; i <= T.iR; ++i)
      for (int j = T.jL; j <= T.jR; ++j) {
        if (dec.D[i][j] != D) return false;
        for (int r = dec.row_start(i); r < dec.row_start(i + 1); ++r)
          for (int c = dec.col_start(j); c < dec.col_start(j + 1); ++c)
            if (!R(r, c).is_zero() && (z_order(R(r, c), d) != D || z_degree(R(r, c), d) != D)) return false;
      }
    return true;
  };
  std::vector<Tile> cands;
  for (const Tile& T : useful_tiles(dec))
    if (homogeneous(T)) cands.push_back(T);
  std::vector<Tile> out;
  for (const Tile& T : cands) {
    bool maximal = true;
    for (const Tile& U : cands)
      if (!(U == T) && U.iL <= T.iL && U.iR >= T.iR && U.jL <= T.jL && U.jR >= T.jR) maximal = false;
    if (maximal) out.push_back(T);
  }
  return out;
}

json decomposition_to_json(const BlockDecomposition& dec) {
  json j;
  j["row_groups"] = dec.row_groups;
  j["col_groups"] = dec.col_groups;
  j["D"] = dec.D;
  j["A"] = polymatrix_to_json(dec.A);
  j["B"] = polymatrix_to_json(dec.B);
  return j;
}

BlockDecomposition decomposition_from_json(const json& j, const std::string& path) {
  BlockDecomposition dec;
  auto int_list = [&](const char* key) {
    const json& a = field(j, key, path);
    if (!a.is_array()) throw InputError(path + "/" + key, "expected an array of integers");
    std::vector<int> v;
    for (size_t k = 0; k < a.size(); ++k) {
      if (!a[k].is_number_integer() || a[k].get<long long>() < 0)
        throw InputError(path + "/" + key + "/" + std::to_string(k), "expected a nonnegative integer");
      v.push_back(static_cast<int>(a[k].get<long long>()));
    }
    return v;
  };
  dec.row_groups = int_list("row_groups");
  dec.col_groups = int_list("col_groups");
  const json& D = field(j, "D", path);
  if (!D.is_array() || D.size() != dec.row_groups.size()) throw InputError(path + "/D", "expected one row per row group");
  for (size_t i = 0; i < D.size(); ++i) {
    std::string rp = path + "/D/" + std::to_string(i);
    if (!D[i].is_array() || D[i].size() != dec.col_groups.size()) throw InputError(rp, "expected one entry per column group");
    std::vector<int> row;
    for (size_t k = 0; k < D[i].size(); ++k) {
      if (!D[i][k].is_number_integer()) throw InputError(rp + "/" + std::to_string(k), "expected an integer");
      row.push_back(static_cast<int>(D[i][k].get<long long>()));
    }
    dec.D.push_back(row);
  }
  dec.A = polymatrix_from_json(field(j, "A", path), path + "/A");
  dec.B = polymatrix_from_json(field(j, "B", path), path + "/B");
  dec.zero_block.assign(dec.row_groups.size(), std::vector<bool>(dec.col_groups.size(), false));
  return dec;
}

json report_to_json(const VerificationReport& rep) {
  json j;
  j["pass"] = rep.pass;
  j["det_A"] = rep.det_A_ok;
  j["det_B"] = rep.det_B_ok;
  j["monotone"] = rep.monotone;
  json vs = json::array();
  for (const auto& v : rep.violations) {
    json x;
    x["kind"] = v.kind;
    if (v.block_i >= 0) x["block"] = {v.block_i, v.block_j};
    if (!v.alpha.empty()) x["alpha"] = multiindex_to_json(v.alpha);
    if (!v.beta.empty()) x["beta"] = multiindex_to_json(v.beta);
    if (v.row >= 0) x["entry"] = {v.row, v.col};
    x["detail"] = v.detail;
    vs.push_back(x);
  }
  j["violations"] = vs;
  return j;
}

}  // namespace semistab
