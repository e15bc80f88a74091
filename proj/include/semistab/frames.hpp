#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "semistab/rational.hpp"

namespace semistab {

// Deterministic stream derivation: splitmix64 mixing of (seed, stream).
uint64_t derive_seed(uint64_t seed, uint64_t stream);

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with R's diagonal made positive.
Eigen::MatrixXd haar_orthogonal(int n, std::mt19937_64& rng);

// (I - S)^{-1}(I + S) for skew-symmetric S.
Eigen::MatrixXd cayley(const Eigen::MatrixXd& S);
QMatrix cayley(const QMatrix& S);

// Exact rational orthogonal matrix from the Cayley transform of a random skew matrix with
// entries in {-k/den, ..., k/den}.
QMatrix random_rational_orthogonal(int n, std::mt19937_64& rng, int k = 4, int den = 4);

Eigen::MatrixXd to_eigen(const QMatrix& M);

}  // namespace semistab
