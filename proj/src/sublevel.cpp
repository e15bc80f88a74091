#include "semistab/sublevel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <thread>

#include "semistab/frames.hpp"

namespace semistab {

namespace {

struct Neumaier {
  double sum = 0, comp = 0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

void increasing_tuples(int n, int r, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(r);
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == r) {
      out.push_back(cur);
      return;
    }
    for (int c = start; c <= n - (r - pos); ++c) {
      cur[pos] = c;
      rec(pos + 1, c + 1);
    }
  };
  rec(0, 0);
}

}  // namespace

double minor_square_sum(const Eigen::MatrixXd& X) {
  const int p = static_cast<int>(X.rows()), q = static_cast<int>(X.cols());
  if (p > q) throw std::invalid_argument("more rows than columns");
  std::vector<std::vector<int>> tuples;
  increasing_tuples(q, p, tuples);
  double s = 0;
  Eigen::MatrixXd sub(p, p);
  for (const auto& cols : tuples) {
    for (int k = 0; k < p; ++k) sub.col(k) = X.col(cols[k]);
    double det = sub.determinant();
    s += det * det;
  }
  return s;
}

double wedge_norm(const Eigen::MatrixXd& U, const OmegaBasis& omega) {
  if (U.rows() > U.cols()) throw std::invalid_argument("wedge_norm needs p <= q");
  if (omega.columns.rows() != U.cols()) throw std::invalid_argument("basis dimension does not match");
  // |det R| from a QR of the transposed pairing matrix; the Gram determinant loses
  // everything to cancellation for strongly anisotropic bases.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr((U * omega.columns).transpose());
  double v = 1;
  for (int i = 0; i < U.rows(); ++i) v *= std::abs(qr.matrixQR()(i, i));
  return v;
}

double wedge_norm_minors(const Eigen::MatrixXd& U, const OmegaBasis& omega) {
  if (U.rows() > U.cols()) throw std::invalid_argument("wedge_norm needs p <= q");
  return std::sqrt(minor_square_sum(U * omega.columns));
}

OmegaBasis sample_omega(int q, uint64_t seed, double scale_max) {
  if (scale_max < 0) throw std::invalid_argument("scale_max must be nonnegative");
  std::mt19937_64 rng(derive_seed(seed, 0));
  Eigen::MatrixXd O1 = haar_orthogonal(q, rng);
  Eigen::MatrixXd O2 = haar_orthogonal(q, rng);
  std::uniform_real_distribution<double> U(-scale_max, scale_max);
  Eigen::VectorXd w(q);
  for (int k = 0; k < q; ++k) w(k) = U(rng);
  w.array() -= w.mean();
  double mx = w.cwiseAbs().maxCoeff();
  if (mx > scale_max && mx > 0) w *= scale_max / mx;
  OmegaBasis om;
  om.log_scale = w;
  om.columns = O1 * w.array().exp().matrix().asDiagonal() * O2;
  double det = std::abs(om.columns.determinant());
  om.columns /= std::pow(det, 1.0 / q);
  return om;
}

double Box::volume() const {
  double v = 1;
  for (size_t k = 0; k < lo.size(); ++k) v *= Rational(hi[k] - lo[k]).get_d();
  return v;
}

Box Box::cube(int d, const Rational& half_width) {
  Box b;
  b.lo.assign(d, -half_width);
  b.hi.assign(d, half_width);
  return b;
}

IncidenceEvaluator::IncidenceEvaluator(const PolyMatrix& M) : p_(M.rows()), q_(M.cols()), d_(M.dim()) {
  for (int i = 0; i < p_; ++i)
    for (int j = 0; j < q_; ++j)
      for (const auto& [a, c] : M(i, j).terms()) terms_.push_back({i, j, c.get_d(), a});
}

void IncidenceEvaluator::evaluate(const double* t, Eigen::MatrixXd& out) const {
  out.setZero(p_, q_);
  for (const auto& term : terms_) {
    double v = term.coeff;
    for (int k = 0; k < d_; ++k)
      for (int e = 0; e < term.exps[k]; ++e) v *= t[k];
    out(term.row, term.col) += v;
  }
}

TilePlanWeight::TilePlanWeight(PolyMatrix M, BlockDecomposition dec, TilePlan plan, GitOptions opt, double lattice)
    : R_(reduced_matrix(M, dec.A, dec.B)), dec_(std::move(dec)), plan_(std::move(plan)), opt_(opt), lattice_(lattice) {
  if (plan_.sigma_total <= 0) throw std::invalid_argument("tile plan weight needs sigma > 0");
}

std::vector<double> TilePlanWeight::tile_norms(const RVector& t) const {
  std::vector<double> out;
  for (const auto& pt : plan_.points) {
    PolyMatrix P = tile_map_from_reduced(R_, dec_, pt.tile, t);
    out.push_back(git_norm(P, pt.sigma, opt_).value);
  }
  return out;
}

double TilePlanWeight::at(const RVector& t) const {
  std::vector<double> norms = tile_norms(t);
  double logw = 0;
  for (size_t k = 0; k < norms.size(); ++k) {
    if (plan_.theta[k] == 0) continue;
    if (norms[k] <= 0) return 0;
    logw += plan_.theta[k].get_d() * std::log(norms[k]);
  }
  return std::exp(logw / plan_.sigma_total.get_d());
}

double TilePlanWeight::operator()(const std::vector<double>& t) const {
  RVector tr(t.size());
  std::vector<long long> key;
  for (size_t k = 0; k < t.size(); ++k) {
    if (lattice_ > 0) {
      long long idx = std::llround(t[k] / lattice_);
      key.push_back(idx);
      tr[k] = Rational(static_cast<long>(idx)) * Rational(lattice_);
    } else {
      tr[k] = Rational(t[k]);
    }
  }
  if (lattice_ > 0) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  double v = at(tr);
  if (lattice_ > 0) {
    std::lock_guard<std::mutex> lock(mu_);
    cache_[key] = v;
  }
  return v;
}

namespace {

struct ChunkResult {
  Neumaier sum, sumsq;
  uint64_t n = 0, flagged = 0;
};

IntegralEstimate plain_estimate(const IncidenceEvaluator& ev, const Weight& w, double tau, const Box& box, const OmegaBasis& omega,
                                uint64_t samples, uint64_t seed, int threads, uint64_t chunk) {
  const int d = box.dim();
  if (ev.dim() != d) throw std::invalid_argument("box dimension does not match incidence matrix");
  std::vector<double> lo(d), width(d);
  for (int k = 0; k < d; ++k) {
    lo[k] = box.lo[k].get_d();
    width[k] = Rational(box.hi[k] - box.lo[k]).get_d();
  }
  chunk = std::max<uint64_t>(chunk, 1);
  const uint64_t nchunks = (samples + chunk - 1) / chunk;
  std::vector<ChunkResult> res(nchunks);
  auto work = [&](int tid, int nt) {
    Eigen::MatrixXd U;
    std::vector<double> t(d);
    for (uint64_t c = tid; c < nchunks; c += nt) {
      std::mt19937_64 rng(derive_seed(seed, c));
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      uint64_t n = std::min(chunk, samples - c * chunk);
      ChunkResult& r = res[c];
      for (uint64_t s = 0; s < n; ++s) {
        for (int k = 0; k < d; ++k) t[k] = lo[k] + width[k] * unif(rng);
        double wt = w(t);
        double f = 0;
        if (wt != 0) {
          ev.evaluate(t.data(), U);
          double nrm = wedge_norm(U, omega);
          f = wt / std::pow(nrm, tau);
          if (!(nrm > 0) || !std::isfinite(f)) {
            ++r.flagged;
            continue;
          }
        }
        r.sum.add(f);
        r.sumsq.add(f * f);
        ++r.n;
      }
    }
  };
  int nt = std::max(1, threads);
  if (nt == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < nt; ++k) pool.emplace_back(work, k, nt);
    for (auto& th : pool) th.join();
  }
  Neumaier sum, sumsq;
  uint64_t n = 0, flagged = 0;
  for (const auto& r : res) {
    sum.add(r.sum.value());
    sumsq.add(r.sumsq.value());
    n += r.n;
    flagged += r.flagged;
  }
  IntegralEstimate est;
  est.domain = box;
  est.seed = seed;
  est.samples = n;
  est.flagged = flagged;
  if (n > 0) {
    double vol = box.volume();
    double mean = sum.value() / n;
    double var = n > 1 ? std::max(0.0, (sumsq.value() - n * mean * mean) / (n - 1)) : 0.0;
    est.value = vol * mean;
    est.std_error = vol * std::sqrt(var / n);
  }
  return est;
}

}  // namespace

IntegralEstimate estimate_integral(const PolyMatrix& M, const Weight& w, double tau, const Box& box, const OmegaBasis& omega,
                                   const EstimateOptions& opt) {
  if (!(tau > 0)) throw std::invalid_argument("tau must be positive");
  if (static_cast<int>(box.hi.size()) != box.dim()) throw std::invalid_argument("malformed box");
  IncidenceEvaluator ev(M);
  if (!opt.stratified) return plain_estimate(ev, w, tau, box, omega, opt.samples, opt.seed, opt.threads, opt.chunk);

  // Recursive stratification: repeatedly bisect the stratum with the largest
  // standard error and resample both halves with fresh derived seeds.
  const int d = box.dim();
  const uint64_t n0 = std::clamp<uint64_t>(opt.samples / 1024, 32, 4096);
  struct Stratum {
    Box box;
    IntegralEstimate est;
    uint64_t id;
    int depth;
  };
  uint64_t next_id = 0;
  auto sample = [&](const Box& b, int depth) {
    uint64_t id = next_id++;
    return Stratum{b, plain_estimate(ev, w, tau, b, omega, n0, derive_seed(opt.seed, id), opt.threads, opt.chunk), id, depth};
  };
  auto worse = [](const Stratum& a, const Stratum& b) {
    if (a.est.std_error != b.est.std_error) return a.est.std_error < b.est.std_error;
    return a.id > b.id;
  };
  std::priority_queue<Stratum, std::vector<Stratum>, decltype(worse)> heap(worse);
  heap.push(sample(box, 0));
  uint64_t used = n0;
  while (used + 2 * n0 <= opt.samples && heap.top().est.std_error > 0) {
    Stratum top = heap.top();
    heap.pop();
    const int axis = top.depth % d;
    Rational mid = (top.box.lo[axis] + top.box.hi[axis]) / 2;
    Box left = top.box, right = top.box;
    left.hi[axis] = mid;
    right.lo[axis] = mid;
    heap.push(sample(left, top.depth + 1));
    heap.push(sample(right, top.depth + 1));
    used += 2 * n0;
  }
  IntegralEstimate total;
  total.domain = box;
  total.seed = opt.seed;
  total.strata = static_cast<int>(heap.size());
  // Sum in id order so the result does not depend on heap layout.
  std::vector<Stratum> leaves;
  while (!heap.empty()) {
    leaves.push_back(heap.top());
    heap.pop();
  }
  std::sort(leaves.begin(), leaves.end(), [](const Stratum& a, const Stratum& b) { return a.id < b.id; });
  Neumaier value, var;
  for (const auto& l : leaves) {
    value.add(l.est.value);
    var.add(l.est.std_error * l.est.std_error);
    total.samples += l.est.samples;
    total.flagged += l.est.flagged;
  }
  total.value = value.value();
  total.std_error = std::sqrt(var.value());
  return total;
}

ProbeReport probe_nondegeneracy(const PolyMatrix& P, double sigma, double w_value, const std::vector<ProbeMap>& maps) {
  ProbeReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  FPolyMatrix F = to_float(P);
  for (const auto& m : maps) {
    GroupElement g{m.A, m.B, m.C, false};
    double rhs = hs_norm(act_group(F, g));
    double lhs = std::pow(std::abs(m.C.determinant()), sigma) * std::pow(w_value, sigma);
    double ratio = lhs > 0 ? rhs / lhs : std::numeric_limits<double>::infinity();
    rep.ratios.push_back(ratio);
    rep.labels.push_back(m.label);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
  }
  return rep;
}

ProbeReport probe_nondegeneracy(const PolyMatrix& M, const BlockDecomposition& dec, const RVector& t0, double sigma, double w_value,
                                int random, uint64_t seed, const std::vector<ProbeMap>& extra) {
  Tile full{0, dec.row_group_count() - 1, 0, dec.col_group_count() - 1, 0};
  PolyMatrix P = tile_map(M, dec, full, t0);
  const int p = P.rows(), q = P.cols(), d = P.dim();
  std::vector<ProbeMap> maps;
  maps.push_back({Eigen::MatrixXd::Identity(p, p), Eigen::MatrixXd::Identity(q, q), Eigen::MatrixXd::Identity(d, d), "identity"});
  std::mt19937_64 rng(derive_seed(seed, 7));
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int r = 0; r < random; ++r) {
    Eigen::VectorXd w(d);
    for (int k = 0; k < d; ++k) w(k) = U(rng);
    Eigen::MatrixXd C = haar_orthogonal(d, rng) * w.array().exp().matrix().asDiagonal() * haar_orthogonal(d, rng);
    maps.push_back({Eigen::MatrixXd::Identity(p, p), Eigen::MatrixXd::Identity(q, q), C, "random " + std::to_string(r)});
  }
  maps.insert(maps.end(), extra.begin(), extra.end());
  return probe_nondegeneracy(P, sigma, w_value, maps);
}

std::vector<ProbeMap> destabilizer_maps(const Destabilizer& D, int steps) {
  LogWeights w = D.w.to_log();
  std::vector<ProbeMap> out;
  for (int k = 1; k <= steps; ++k) {
    ProbeMap m;
    m.A = (k * w.wp).array().exp().matrix().asDiagonal();
    m.B = (k * w.wq).array().exp().matrix().asDiagonal();
    m.C = (k * w.wd).array().exp().matrix().asDiagonal();
    m.label = "destabilizer k=" + std::to_string(k);
    out.push_back(m);
  }
  return out;
}

}  // namespace semistab
