#include "semistab/gitnorm.hpp"

#include <limits>
#include <thread>

#include "semistab/frames.hpp"

namespace semistab {

LogWeights LogWeights::zero(int p, int q, int d) {
  return {Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(q), Eigen::VectorXd::Zero(d)};
}

std::string to_string(GitStatus s) {
  switch (s) {
    case GitStatus::Converged:
      return "converged";
    case GitStatus::DriftToZero:
      return "drift-to-zero";
    case GitStatus::BudgetExhausted:
      return "budget-exhausted";
  }
  return "unknown";
}

Frame Frame::identity(int p, int q, int d) {
  return {Eigen::MatrixXd::Identity(p, p), Eigen::MatrixXd::Identity(q, q), Eigen::MatrixXd::Identity(d, d)};
}

namespace {

struct Term {
  int i, j;
  Multiindex alpha;
  double log_mass;  // log(alpha! c^2)
};

std::vector<Term> weighted_terms(const FPolyMatrix& P) {
  std::vector<Term> out;
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j)
      for (const auto& [a, c] : P(i, j).terms()) out.push_back({i, j, a, std::log(factorial_d(a) * c * c)});
  return out;
}

double pairing(const Term& t, const LogWeights& w, double sigma) {
  double s = w.wp(t.i) + w.wq(t.j);
  for (size_t k = 0; k < t.alpha.size(); ++k) s += w.wd(k) * (t.alpha[k] - sigma);
  return s;
}

double log_sum_exp(const Eigen::VectorXd& x) {
  double mx = x.maxCoeff();
  return mx + std::log((x.array() - mx).exp().sum());
}

// Orthonormal basis of the sum-zero hyperplane in R^n (Helmert columns).
Eigen::MatrixXd helmert(int n) {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) {
    double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) H(i, k - 1) = s;
    H(k, k - 1) = -k * s;
  }
  return H;
}

void check_weights(int p, int q, int d, const LogWeights& w) {
  if (w.wp.size() != p || w.wq.size() != q || w.wd.size() != d) throw std::invalid_argument("log-weight dimensions do not match matrix");
  double scale = 1.0;
  for (const auto* v : {&w.wp, &w.wq, &w.wd})
    if (v->size() > 0) scale = std::max(scale, v->cwiseAbs().maxCoeff());
  if (std::abs(w.wp.sum()) > 1e-10 * scale || std::abs(w.wq.sum()) > 1e-10 * scale)
    throw std::invalid_argument("row and column log-weights must sum to zero");
}

}  // namespace

double scaled_norm(const FPolyMatrix& P, const LogWeights& w, double sigma) {
  check_weights(P.rows(), P.cols(), P.dim(), w);
  auto terms = weighted_terms(P);
  if (terms.empty()) return 0.0;
  Eigen::VectorXd x(terms.size());
  for (size_t e = 0; e < terms.size(); ++e) x(e) = terms[e].log_mass + 2 * pairing(terms[e], w, sigma);
  return std::exp(0.5 * log_sum_exp(x));
}

double scaled_norm(const PolyMatrix& P, const LogWeights& w, const Rational& sigma) {
  return scaled_norm(to_float(P), w, sigma.get_d());
}

DiagonalResult minimize_diagonal(const FPolyMatrix& P, double sigma, double tol, int max_iter) {
  const int p = P.rows(), q = P.cols(), d = P.dim();
  DiagonalResult res;
  res.w = LogWeights::zero(p, q, d);
  auto terms = weighted_terms(P);
  if (terms.empty()) return res;
  const double norm0 = hs_norm(P);

  // w = Z u with Z block-diagonal orthonormal over the traceless space.
  const int mp = std::max(p - 1, 0), mq = std::max(q - 1, 0), m = mp + mq + d;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(p + q + d, m);
  if (mp) Z.block(0, 0, p, mp) = helmert(p);
  if (mq) Z.block(p, mp, q, mq) = helmert(q);
  if (d) Z.block(p + q, mp + mq, d, d) = Eigen::MatrixXd::Identity(d, d);

  const int E = static_cast<int>(terms.size());
  Eigen::MatrixXd Amat(E, m);
  Eigen::VectorXd ell(E);
  for (int e = 0; e < E; ++e) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(p + q + d);
    v(terms[e].i) = 1;
    v(p + terms[e].j) = 1;
    for (int k = 0; k < d; ++k) v(p + q + k) = terms[e].alpha[k] - sigma;
    Amat.row(e) = 2.0 * (Z.transpose() * v).transpose();
    ell(e) = terms[e].log_mass;
  }

  auto objective = [&](const Eigen::VectorXd& u) { return log_sum_exp(ell + Amat * u); };

  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  double f = objective(u);
  bool drift = false;
  bool converged = false;
  int it = 0;
  double gnorm = 0;
  for (; it <= max_iter; ++it) {
    Eigen::VectorXd x = ell + Amat * u;
    Eigen::VectorXd pi = (x.array() - x.maxCoeff()).exp();
    pi /= pi.sum();
    Eigen::VectorXd g = Amat.transpose() * pi;
    gnorm = m ? (Z * g).cwiseAbs().maxCoeff() : 0.0;
    if (gnorm <= tol) {
      converged = true;
      break;
    }
    if (std::exp(0.5 * f) < 1e-12 * norm0) break;
    if (it == max_iter) break;
    Eigen::MatrixXd H = Amat.transpose() * pi.asDiagonal() * Amat - g * g.transpose();
    double ridge = 1e-12 * std::max(1.0, H.trace() / std::max(m, 1));
    H.diagonal().array() += ridge;
    Eigen::VectorXd step = H.ldlt().solve(-g);
    if (!step.allFinite() || g.dot(step) >= 0) step = -g;
    double cap = step.cwiseAbs().maxCoeff();
    if (cap > 10.0) step *= 10.0 / cap;
    double t = 1.0, slope = g.dot(step);
    double fn = objective(u + step);
    int halvings = 0;
    while (!(fn <= f + 1e-4 * t * slope) && halvings < 60) {
      t *= 0.5;
      fn = objective(u + t * step);
      ++halvings;
    }
    if (!(fn < f)) break;  // no further progress representable
    u += t * step;
    f = fn;
    Eigen::VectorXd w = Z * u;
    if (w.cwiseAbs().maxCoeff() > 50.0) drift = true;
  }
  Eigen::VectorXd w = Z * u;
  res.w.wp = w.head(p);
  res.w.wq = w.segment(p, q);
  res.w.wd = w.tail(d);
  res.value = std::exp(0.5 * f);
  res.iterations = it;
  res.gradient_norm = gnorm;
  if (converged)
    res.status = GitStatus::Converged;
  else if (drift || res.value < 1e-12 * norm0)
    res.status = GitStatus::DriftToZero;
  else
    res.status = GitStatus::BudgetExhausted;
  return res;
}

DiagonalResult minimize_diagonal(const PolyMatrix& P, const Rational& sigma, double tol, int max_iter) {
  return minimize_diagonal(to_float(P), sigma.get_d(), tol, max_iter);
}

FPolyMatrix rescaled_matrix(const FPolyMatrix& P, const Frame& f, const LogWeights& w, double sigma) {
  // Orthogonal part through the group action, diagonal part applied per monomial.
  FPolyMatrix rotated = act_group(P, f.group());
  FPolyMatrix scaled(rotated.rows(), rotated.cols(), rotated.dim());
  for (int i = 0; i < rotated.rows(); ++i)
    for (int j = 0; j < rotated.cols(); ++j) {
      FPoly e(rotated.dim());
      for (const auto& [a, c] : rotated(i, j).terms()) {
        double x = w.wp(i) + w.wq(j);
        for (size_t k = 0; k < a.size(); ++k) x += w.wd(k) * (a[k] - sigma);
        e.add_term(a, c * std::exp(x));
      }
      scaled.set(i, j, e);
    }
  return scaled;
}

namespace {

struct FrameRun {
  Frame frame;
  DiagonalResult result;
};

FrameRun run_frame(const FPolyMatrix& P, const Frame& f, double sigma, const GitOptions& opt) {
  return {f, minimize_diagonal(act_group(P, f.group()), sigma, opt.tol, opt.max_iter)};
}

Frame random_frame(int p, int q, int d, uint64_t seed, int restart) {
  std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(restart)));
  return {haar_orthogonal(p, rng), haar_orthogonal(q, rng), haar_orthogonal(d, rng)};
}

}  // namespace

GitEstimate git_norm(const FPolyMatrix& P, double sigma, const GitOptions& opt) {
  const int p = P.rows(), q = P.cols(), d = P.dim();
  GitEstimate est;
  est.frame = Frame::identity(p, q, d);
  est.w = LogWeights::zero(p, q, d);
  if (P.is_zero()) return est;
  const double norm0 = hs_norm(P);
  const int R = std::max(opt.restarts, 1);

  std::vector<FrameRun> runs(R);
  auto work = [&](int start, int stride) {
    for (int r = start; r < R; r += stride) runs[r] = run_frame(P, r == 0 ? Frame::identity(p, q, d) : random_frame(p, q, d, opt.seed, r), sigma, opt);
  };
  int nthreads = std::clamp(opt.threads, 1, R);
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t, nthreads);
    for (auto& th : pool) th.join();
  }
  int best = 0;
  for (int r = 1; r < R; ++r)
    if (runs[r].result.value < runs[best].result.value) best = r;
  bool drift = runs[best].result.value < 1e-6 * norm0;
  FrameRun cur = runs[best];

  if (!drift) {
    // Cayley coordinate descent on the three orthogonal factors, step halving.
    double h = 0.5;
    for (int sweep = 0; sweep < opt.budget && h > 1e-6; ++sweep) {
      bool improved = false;
      for (int factor = 0; factor < 3; ++factor) {
        int n = factor == 0 ? p : factor == 1 ? q : d;
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b)
            for (int sgn : {1, -1}) {
              Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
              S(a, b) = sgn * h;
              S(b, a) = -sgn * h;
              Frame f = cur.frame;
              Eigen::MatrixXd& O = factor == 0 ? f.O1 : factor == 1 ? f.O2 : f.O3;
              O = cayley(S) * O;
              FrameRun cand = run_frame(P, f, sigma, opt);
              if (cand.result.value < cur.result.value * (1 - 1e-12)) {
                cur = cand;
                improved = true;
              }
            }
      }
      if (cur.result.value < 1e-6 * norm0) {
        drift = true;
        break;
      }
      if (!improved) h *= 0.5;
    }
  }

  est.value = cur.result.value;
  est.w = cur.result.w;
  est.frame = cur.frame;
  est.best_restart = best;
  est.min_frame_value = runs[best].result.value;
  if (drift)
    est.status = GitStatus::DriftToZero;
  else if (cur.result.status == GitStatus::Converged)
    est.status = GitStatus::Converged;
  else
    est.status = GitStatus::BudgetExhausted;
  est.foc_residual = criticality_residual(rescaled_matrix(P, est.frame, est.w, sigma), sigma);
  return est;
}

GitEstimate git_norm(const PolyMatrix& P, const Rational& sigma, const GitOptions& opt) {
  return git_norm(to_float(P), sigma.get_d(), opt);
}

namespace {

// Stacked first-order residual blocks; C is double or Rational.
template <class C, class Mat>
C residual_squared(const Mat& P, const C& sigma) {
  const int p = P.rows(), q = P.cols(), d = P.dim();
  auto fact = [](const Multiindex& a) -> C {
    if constexpr (std::is_same_v<C, Rational>)
      return factorial(a);
    else
      return factorial_d(a);
  };
  C norm2 = 0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j)
      for (const auto& [a, c] : P(i, j).terms()) norm2 += fact(a) * c * c;
  C total = 0;
  auto pair_entries = [&](const auto& X, const auto& Y) {
    C s = 0;
    for (const auto& [a, c] : X.terms()) {
      auto it = Y.terms().find(a);
      if (it != Y.terms().end()) s += fact(a) * c * it->second;
    }
    return s;
  };
  for (int i = 0; i < p; ++i)
    for (int i2 = 0; i2 < p; ++i2) {
      C s = 0;
      for (int j = 0; j < q; ++j) s += pair_entries(P(i, j), P(i2, j));
      if (i == i2) s -= norm2 / C(p);
      total += s * s;
    }
  for (int j = 0; j < q; ++j)
    for (int j2 = 0; j2 < q; ++j2) {
      C s = 0;
      for (int i = 0; i < p; ++i) s += pair_entries(P(i, j), P(i, j2));
      if (j == j2) s -= norm2 / C(q);
      total += s * s;
    }
  for (int k = 0; k < d; ++k)
    for (int k2 = 0; k2 < d; ++k2) {
      C s = 0;
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j) {
          const auto& terms = P(i, j).terms();
          for (const auto& [a, c] : terms) {
            if (a[k] == 0) continue;
            Multiindex beta = a;
            beta[k] -= 1;
            Multiindex a2 = beta;
            a2[k2] += 1;
            auto it = terms.find(a2);
            if (it == terms.end()) continue;
            s += fact(a) * fact(a2) / fact(beta) * c * it->second;
          }
        }
      if (k == k2) s -= sigma * norm2;
      total += s * s;
    }
  return total;
}

}  // namespace

double criticality_residual(const FPolyMatrix& P, double sigma) { return std::sqrt(residual_squared<double>(P, sigma)); }

Rational criticality_residual_squared_exact(const PolyMatrix& P, const Rational& sigma) {
  return residual_squared<Rational>(P, sigma);
}

double criticality_residual(const PolyMatrix& P, const Rational& sigma) {
  return std::sqrt(criticality_residual_squared_exact(P, sigma).get_d());
}

}  // namespace semistab
