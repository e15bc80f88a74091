#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

#include "semistab/json_io.hpp"
#include "semistab/poly.hpp"

namespace semistab {

// Reduced matrices R(s,z) use 2d variables: s_1..s_d then z_1..z_d, with z = t - s.
int reduced_dim(int d);

class NotDerivativeClosed : public std::runtime_error {
 public:
  NotDerivativeClosed(int column, int variable)
      : std::runtime_error("column " + std::to_string(column) + " is not derivative-closed in variable " + std::to_string(variable)),
        column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

struct BlockDecomposition {
  std::vector<int> row_groups;  // sizes p_0..p_{m*}
  std::vector<int> col_groups;  // sizes q_0..q_m
  std::vector<std::vector<int>> D;
  PolyMatrix A;  // p x p in s
  PolyMatrix B;  // q x q in t
  std::vector<std::vector<bool>> zero_block;

  int row_group_count() const { return static_cast<int>(row_groups.size()); }
  int col_group_count() const { return static_cast<int>(col_groups.size()); }
  int row_start(int g) const;
  int col_start(int g) const;
  int row_group_of(int r) const;
  int col_group_of(int c) const;
};

struct Tile {
  int iL = 0, iR = 0, jL = 0, jR = 0;
  Rational sigma = 0;
  bool operator==(const Tile& o) const { return iL == o.iL && iR == o.iR && jL == o.jL && jR == o.jR; }
};

struct EliminationResult {
  PolyMatrix A, B, R;
  BlockDecomposition decomposition;
};

struct Violation {
  std::string kind;  // "order", "determinant", "monotonicity"
  int block_i = -1, block_j = -1;
  int row = -1, col = -1;
  Multiindex alpha, beta;
  std::string detail;
};

struct VerificationReport {
  bool pass = true;
  bool det_A_ok = true, det_B_ok = true, monotone = true;
  std::vector<Violation> violations;
};

// Every s-partial of column j lies in the Q[s]-span of columns 0..j-1.
void check_derivative_closed(const PolyMatrix& M);

// R(s,z) = A(s) M(s) B(s+z).
PolyMatrix reduced_matrix(const PolyMatrix& M, const PolyMatrix& A, const PolyMatrix& B);
EliminationResult eliminate(const PolyMatrix& M);

// Flags: set when the block is identically zero.
std::vector<std::vector<int>> vanishing_degrees(const PolyMatrix& R, const std::vector<int>& row_groups, const std::vector<int>& col_groups,
                                                std::vector<std::vector<bool>>* zero_flags = nullptr);

VerificationReport verify_block_decomposition(const PolyMatrix& M, const BlockDecomposition& dec);

// Degree-D_ij z-part of the tile's blocks of R at s = t0, as a polynomial matrix in z.
PolyMatrix tile_map(const PolyMatrix& M, const BlockDecomposition& dec, const Tile& T, const RVector& t0);
PolyMatrix tile_map_from_reduced(const PolyMatrix& R, const BlockDecomposition& dec, const Tile& T, const RVector& t0);
std::vector<Tile> useful_tiles(const BlockDecomposition& dec);
bool is_useful(const BlockDecomposition& dec, const Tile& T);
// Useful tiles on which D is constant and every entry of R is homogeneous of that
// z-degree, keeping only those maximal under inclusion.
std::vector<Tile> homogeneous_tiles(const PolyMatrix& R, const BlockDecomposition& dec);

// z -> -z on the second half of the variables; converts between z = t - s and z = s - t.
PolyMatrix flip_z(const PolyMatrix& R);
// Embeds a matrix in s (d variables) into (s,z) and vice versa helpers.
PolyMatrix in_s_coordinates(const PolyMatrix& M);

struct KernelParametrization {
  std::vector<Eigen::VectorXd> kernel;
  std::vector<int> minor_rows, minor_cols;
  int rank = 0;
  double gap = 0;
  Eigen::MatrixXd coefficients;  // Cramer coefficients, (q - r) x r
};

class AmbiguousRank : public std::runtime_error {
 public:
  explicit AmbiguousRank(double gap) : std::runtime_error("numerical rank is ambiguous (singular value gap " + std::to_string(gap) + ")"), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

// Kernel of M expressed in the given basis (columns of `basis`).
KernelParametrization parametrize_kernel(const Eigen::MatrixXd& M, const Eigen::MatrixXd& basis);

json decomposition_to_json(const BlockDecomposition& dec);
BlockDecomposition decomposition_from_json(const json& j, const std::string& path = "");
json report_to_json(const VerificationReport& rep);

}  // namespace semistab
