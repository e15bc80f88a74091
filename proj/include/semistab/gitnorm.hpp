#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semistab/poly.hpp"

namespace semistab {

struct LogWeights {
  Eigen::VectorXd wp, wq, wd;
  static LogWeights zero(int p, int q, int d);
};

enum class GitStatus { Converged, DriftToZero, BudgetExhausted };
std::string to_string(GitStatus s);

// Orthogonal frame (O1, O2, O3) acting on rows, columns and variables.
struct Frame {
  Eigen::MatrixXd O1, O2, O3;
  static Frame identity(int p, int q, int d);
  GroupElement group() const { return {O1, O2, O3, true}; }
};

struct DiagonalResult {
  double value = 0;
  LogWeights w;
  GitStatus status = GitStatus::Converged;
  int iterations = 0;
  double gradient_norm = 0;
};

struct GitEstimate {
  double value = 0;
  GitStatus status = GitStatus::Converged;
  LogWeights w;
  Frame frame;
  double foc_residual = 0;
  int best_restart = 0;
  // Smallest inner value seen over all frames (equals value unless descent improved it).
  double min_frame_value = 0;
};

struct GitOptions {
  int restarts = 64;
  int budget = 30;  // Cayley coordinate-descent sweeps
  uint64_t seed = 0;
  int threads = 1;
  double tol = 1e-10;
  int max_iter = 200;
};

// (sum_E e^{2 w.(e^i;e^j;alpha - sigma 1)} alpha! c^2)^{1/2}.
double scaled_norm(const FPolyMatrix& P, const LogWeights& w, double sigma);
double scaled_norm(const PolyMatrix& P, const LogWeights& w, const Rational& sigma);

DiagonalResult minimize_diagonal(const FPolyMatrix& P, double sigma, double tol = 1e-10, int max_iter = 200);
DiagonalResult minimize_diagonal(const PolyMatrix& P, const Rational& sigma, double tol = 1e-10, int max_iter = 200);

GitEstimate git_norm(const FPolyMatrix& P, double sigma, const GitOptions& opt = {});
GitEstimate git_norm(const PolyMatrix& P, const Rational& sigma, const GitOptions& opt = {});

// Applies the frame and then the diagonal scaling (including |det C|^{-sigma}) of an estimate.
FPolyMatrix rescaled_matrix(const FPolyMatrix& P, const Frame& f, const LogWeights& w, double sigma);

double criticality_residual(const FPolyMatrix& P, double sigma);
double criticality_residual(const PolyMatrix& P, const Rational& sigma);
Rational criticality_residual_squared_exact(const PolyMatrix& P, const Rational& sigma);

// Exact-LP layer on support sets.
struct RationalWeights {
  RVector wp, wq, wd;
  LogWeights to_log() const;
};

struct Destabilizer {
  RationalWeights w;
  Rational margin;
  // Sum of w_d is zero: destabilizing for every sigma.
  bool special_linear = false;
  // Support was empty; w = 0.
  bool trivial = false;
};

struct MembershipResult {
  bool member = false;
  RVector coefficients;  // one per support triple
  std::optional<Destabilizer> separator;
};

struct SparseVerdict {
  bool applicable = false;
  bool positive = false;
  std::vector<std::pair<SupportTriple, Rational>> theta;
  bool strictly_positive_theta = false;
  std::string reason;
};

struct SigmaInterval {
  bool feasible = false;
  Rational lo, hi;
};

RVector balanced_target(int p, int q, int d, const Rational& sigma);
MembershipResult polytope_membership(const SupportSet& E, const Rational& sigma);
std::optional<Destabilizer> find_destabilizer(const SupportSet& E, const Rational& sigma);
// Exact check of w.(e^i;e^j;alpha - sigma 1) <= -margin, tracelessness and margin > 0.
bool verify_destabilizer(const SupportSet& E, const Rational& sigma, const Destabilizer& D);
SparseVerdict sparse_criterion(const PolyMatrix& P, const Rational& sigma);
// Hypotheses 1 and 2 of the sparse criterion; reason filled on failure.
bool sparse_hypotheses(const PolyMatrix& P, std::string* reason = nullptr);
// Range of sigma for which the balanced target lies in the Newton polytope.
SigmaInterval feasible_sigma_interval(const SupportSet& E);

}  // namespace semistab
