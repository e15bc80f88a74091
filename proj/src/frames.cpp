#include "semistab/frames.hpp"

namespace semistab {

uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Eigen::MatrixXd haar_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (R(j, j) < 0) Q.col(j) *= -1;
  return Q;
}

Eigen::MatrixXd cayley(const Eigen::MatrixXd& S) {
  const auto I = Eigen::MatrixXd::Identity(S.rows(), S.cols());
  return (I - S).partialPivLu().solve(I + S);
}

QMatrix cayley(const QMatrix& S) {
  QMatrix I = QMatrix::identity(S.rows());
  return (I - S).inverse() * (I + S);
}

QMatrix random_rational_orthogonal(int n, std::mt19937_64& rng, int k, int den) {
  std::uniform_int_distribution<int> u(-k, k);
  QMatrix S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Rational v(u(rng), den);
      v.canonicalize();
      S(i, j) = v;
      S(j, i) = -v;
    }
  return cayley(S);
}

Eigen::MatrixXd to_eigen(const QMatrix& M) {
  Eigen::MatrixXd E(M.rows(), M.cols());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) E(i, j) = M(i, j).get_d();
  return E;
}

}  // namespace semistab
