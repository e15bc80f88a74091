#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "semistab/gitnorm.hpp"
#include "semistab/tileplan.hpp"

namespace semistab {

struct OmegaBasis {
  Eigen::MatrixXd columns;  // q x q, column j is omega^j
  Eigen::VectorXd log_scale;
};

// sqrt of the sum of squared p x p minors of the pairing matrix U * Omega, via QR.
double wedge_norm(const Eigen::MatrixXd& U, const OmegaBasis& omega);
// Same quantity by explicit enumeration of increasing column tuples.
double wedge_norm_minors(const Eigen::MatrixXd& U, const OmegaBasis& omega);
// Sum of squared maximal minors of a p x q matrix, by enumeration.
double minor_square_sum(const Eigen::MatrixXd& X);

OmegaBasis sample_omega(int q, uint64_t seed, double scale_max);

struct Box {
  RVector lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  static Box cube(int d, const Rational& half_width);
};

struct IntegralEstimate {
  double value = 0;
  double std_error = 0;
  uint64_t samples = 0;
  uint64_t flagged = 0;
  int strata = 1;
  Box domain;
  uint64_t seed = 0;
};

// Row vectors u^1(t)..u^p(t) of an incidence matrix, evaluated in double precision.
class IncidenceEvaluator {
 public:
  explicit IncidenceEvaluator(const PolyMatrix& M);
  int rows() const { return p_; }
  int cols() const { return q_; }
  int dim() const { return d_; }
  void evaluate(const double* t, Eigen::MatrixXd& out) const;

 private:
  struct Term {
    int row, col;
    double coeff;
    std::vector<int> exps;
  };
  int p_, q_, d_;
  std::vector<Term> terms_;
};

class Weight {
 public:
  virtual ~Weight() = default;
  virtual double operator()(const std::vector<double>& t) const = 0;
};

class ConstantWeight : public Weight {
 public:
  explicit ConstantWeight(double v) : v_(v) {}
  double operator()(const std::vector<double>&) const override { return v_; }

 private:
  double v_;
};

// w(t) = (prod_k |||P_{T_k,t}|||_{sigma_k}^{theta_k})^{1/sigma}.
class TilePlanWeight : public Weight {
 public:
  // lattice > 0 snaps t to a lattice of that spacing before caching (diagnostics only).
  TilePlanWeight(PolyMatrix M, BlockDecomposition dec, TilePlan plan, GitOptions opt = {}, double lattice = 0);
  double operator()(const std::vector<double>& t) const override;
  // Individual tile norms at t (exact rational base point).
  std::vector<double> tile_norms(const RVector& t) const;
  double at(const RVector& t) const;

 private:
  PolyMatrix R_;
  BlockDecomposition dec_;
  TilePlan plan_;
  GitOptions opt_;
  double lattice_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<long long>, double> cache_;
};

struct EstimateOptions {
  uint64_t samples = 100000;
  uint64_t seed = 0;
  int threads = 1;
  bool stratified = false;  // recursive bisection toward high-variance strata
  uint64_t chunk = 4096;
};

IntegralEstimate estimate_integral(const PolyMatrix& M, const Weight& w, double tau, const Box& box, const OmegaBasis& omega,
                                   const EstimateOptions& opt = {});

struct ProbeMap {
  Eigen::MatrixXd A, B, C;  // row, column and variable maps; C plays the role of the invertible matrix M
  std::string label;
};

struct ProbeReport {
  double min_ratio = 0;
  std::vector<double> ratios;
  std::vector<std::string> labels;
};

// Compares ||A P(C^T z) B^T|| with |det C|^sigma * w^sigma for each map.
ProbeReport probe_nondegeneracy(const PolyMatrix& P, double sigma, double w_value, const std::vector<ProbeMap>& maps);
// Full-tile map at t0 from the decomposition, identity plus `random` seeded random invertible maps.
ProbeReport probe_nondegeneracy(const PolyMatrix& M, const BlockDecomposition& dec, const RVector& t0, double sigma, double w_value,
                                int random, uint64_t seed, const std::vector<ProbeMap>& extra = {});
// exp(k * w) for k = 1..steps along a destabilizing direction.
std::vector<ProbeMap> destabilizer_maps(const Destabilizer& D, int steps);

}  // namespace semistab
