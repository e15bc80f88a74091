#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "semistab/blockdecomp.hpp"
#include "semistab/gitnorm.hpp"
#include "semistab/json_io.hpp"

namespace semistab {

// phi: k polynomials in n + (n1 - k) variables, x first, then t.
struct RadonProblem {
  int n = 0, n1 = 0, k = 0;
  std::vector<Poly> phi;
  int d() const { return n1 - k; }
  int vars() const { return n + n1 - k; }
  // Throws std::invalid_argument on shape errors or when dphi/dx has generic rank < k.
  void validate() const;
};

class NonTransverse : public std::runtime_error {
 public:
  explicit NonTransverse(const std::string& what) : std::runtime_error(what) {}
};

class RankDeficient : public std::runtime_error {
 public:
  explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

// M(x,s) = dphi/dx as a k x n matrix in the problem's variables (s in the t slots).
// When base is given (length n + d), the rank at that point must be k.
PolyMatrix build_incidence(const RadonProblem& prob, const std::optional<RVector>& base = std::nullopt);
// Freezes x = x0 and returns a matrix in the d active variables.
PolyMatrix freeze_x(const PolyMatrix& M, const RVector& x0);

struct CurvatureForm {
  int k = 0, b = 0, c = 0;   // outputs, x-kernel directions, t directions
  std::vector<Rational> g;   // g[(i * b + j) * c + l]
  bool exact = true;         // normalization ran in exact arithmetic
  Rational& at(int i, int j, int l) { return g[(static_cast<size_t>(i) * b + j) * c + l]; }
  const Rational& at(int i, int j, int l) const { return g[(static_cast<size_t>(i) * b + j) * c + l]; }
  static CurvatureForm zeros(int k, int b, int c);
};

CurvatureForm curvature_form(const RadonProblem& prob, const RVector& z0);
// Q encoded as a k x b matrix of linear forms in c variables.
PolyMatrix curvature_polymatrix(const CurvatureForm& Q);
CurvatureForm random_form(int k, int b, int c, std::mt19937_64& rng, int range = 5);

enum class VerdictState { Positive, Unstable, Undetermined };
std::string to_string(VerdictState s);

struct SemistabilityVerdict {
  VerdictState state = VerdictState::Undetermined;
  std::string method;  // "trivial", "sparse", "frame", "descent", "none"
  Rational sigma;
  std::optional<SparseVerdict> sparse;
  // Rational frame (A, B, C) in which the destabilizer applies to act_group_exact(P, A, B, C).
  QMatrix frame_A, frame_B, frame_C;
  std::string frame_label;
  std::optional<Destabilizer> destabilizer;
  double value = 0;     // descent value (positive) or best lower-bound evidence (undetermined)
  double residual = 0;  // criticality residual at the descent minimizer
  int frames_tried = 0;
};

struct VerdictOptions {
  int frames = 64;
  uint64_t seed = 0;
  GitOptions git;
};

SemistabilityVerdict semistability_verdict(const PolyMatrix& P, const Rational& sigma, const VerdictOptions& opt = {});
// Q at sigma = 1/(n1 - k).
SemistabilityVerdict semistability_verdict(const CurvatureForm& Q, const VerdictOptions& opt = {});
// Exact re-check of an unstable certificate (frame invertible, destabilizer valid on the transformed support).
bool verify_unstable_certificate(const PolyMatrix& P, const SemistabilityVerdict& v);
// Verdict for g.P obtained from the verdict for P: the frame becomes frame * g^{-1}.
SemistabilityVerdict transport_verdict(const SemistabilityVerdict& v, const QMatrix& A, const QMatrix& B, const QMatrix& C);
json verdict_to_json(const SemistabilityVerdict& v);

struct ModelExponents {
  Rational r_g, r_f;        // exponents on g (functions on R^{n1}) and f
  Rational inv_p2, inv_p1;  // dual exponents of the Knapp family
  bool identity_holds = false;
};
ModelExponents model_exponents(int n, int n1, int k);

struct BalancedResult {
  bool ok = false;
  Rational sigma;
  int N = 0;
  Rational r, target;
  std::string reason;
  std::optional<Multiindex> witness;
};
// type 1 takes k (the fibre dimension), type 2 takes d (the number of variables).
BalancedResult balanced_check(const std::vector<Multiindex>& A, int type, int k_or_d);

// Decomposition data for a problem: A(x,s) and B(x,t) in the problem's variables,
// P in n + 2d variables (x, s, z) with z = t - s.
struct RadonDecomposition {
  PolyMatrix A, B, P;
};

struct RadonReport {
  bool pass = true;
  bool det_A_ok = true, det_B_ok = true, degrees_ok = true;
  std::vector<std::vector<int>> degrees;
  std::vector<Violation> violations;
};

RadonReport verify_radon_decomposition(const RadonProblem& prob, const RadonDecomposition& dec);
json radon_report_to_json(const RadonReport& rep);

// Balanced-set constructions. Multiindices are sorted by degree first.
RadonProblem type1_problem(std::vector<Multiindex> A, int k);
RadonDecomposition type1_decomposition(std::vector<Multiindex> A, int k);
RadonProblem type2_problem(std::vector<Multiindex> A);
RadonDecomposition type2_decomposition(std::vector<Multiindex> A);

json radon_problem_to_json(const RadonProblem& prob);
RadonProblem radon_problem_from_json(const json& j, const std::string& path = "");

}  // namespace semistab
