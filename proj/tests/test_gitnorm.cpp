#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "semistab/frames.hpp"
#include "semistab/gitnorm.hpp"
#include "semistab/json_io.hpp"

using namespace semistab;

namespace {

Poly z(int d, int k) { return Poly::variable(d, k); }

PolyMatrix fixture(const std::string& name) { return polymatrix_from_json(read_json_file(std::string(SEMISTAB_FIXTURES) + "/" + name)); }

PolyMatrix single(const Poly& p) {
  PolyMatrix P(1, 1, p.dim());
  P.set(0, 0, p);
  return P;
}

PolyMatrix diag_linear() {
  PolyMatrix P(2, 2, 2);
  P.set(0, 0, z(2, 0));
  P.set(1, 1, z(2, 1));
  return P;
}

SupportSet support(int p, int q, int d, std::vector<SupportTriple> t) {
  SupportSet E;
  E.p = p;
  E.q = q;
  E.d = d;
  E.triples = std::move(t);
  return E;
}

LogWeights weights(std::vector<double> p, std::vector<double> q, std::vector<double> d) {
  LogWeights w;
  w.wp = Eigen::Map<Eigen::VectorXd>(p.data(), p.size());
  w.wq = Eigen::Map<Eigen::VectorXd>(q.data(), q.size());
  w.wd = Eigen::Map<Eigen::VectorXd>(d.data(), d.size());
  return w;
}

}  // namespace

TEST(ScaledNorm, Examples) {
  PolyMatrix t2 = fixture("t2.json");
  EXPECT_NEAR(scaled_norm(t2, LogWeights::zero(2, 1, 2), Rational(1)), 2.0, 1e-14);
  double expect = std::sqrt(2 * std::exp(2.0) + 2 * std::exp(-2.0));
  EXPECT_NEAR(scaled_norm(t2, weights({1, -1}, {0}, {0, 0}), Rational(1)), expect, 1e-12 * expect);
  PolyMatrix u = single(z(1, 0));
  for (double b : {-3.0, 0.5, 7.0}) EXPECT_NEAR(scaled_norm(u, weights({0}, {0}, {b}), Rational(1)), 1.0, 1e-12);
  EXPECT_THROW(scaled_norm(t2, weights({1}, {0}, {0, 0}), Rational(1)), std::invalid_argument);
}

TEST(ScaledNorm, MatchesGroupAction) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1, 1);
  PolyMatrix P = fixture("sec63_subtile.json");
  for (int trial = 0; trial < 20; ++trial) {
    LogWeights w = weights({U(rng), U(rng), U(rng), 0}, {U(rng), U(rng), U(rng), 0}, {U(rng), U(rng), U(rng)});
    w.wp(3) = -w.wp.head(3).sum();
    w.wq(3) = -w.wq.head(3).sum();
    double sigma = 0.25;
    GroupElement g{w.wp.array().exp().matrix().asDiagonal().toDenseMatrix(), w.wq.array().exp().matrix().asDiagonal().toDenseMatrix(),
                   w.wd.array().exp().matrix().asDiagonal().toDenseMatrix(), false};
    double direct = std::exp(-sigma * w.wd.sum()) * hs_norm(act_group(P, g));
    EXPECT_NEAR(scaled_norm(to_float(P), w, sigma), direct, 1e-10 * direct);
  }
}

TEST(MinimizeDiagonal, Examples) {
  DiagonalResult r = minimize_diagonal(fixture("t2.json"), Rational(1));
  EXPECT_EQ(r.status, GitStatus::Converged);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  EXPECT_NEAR(r.w.wp.norm() + r.w.wd.norm(), 0.0, 1e-6);
  DiagonalResult id = minimize_diagonal(fixture("identity2.json"), Rational(0));
  EXPECT_NEAR(id.value, std::sqrt(2.0), 1e-12);
}

TEST(MinimizeDiagonal, HomogeneousDriftAwayFromBalancedSigma) {
  PolyMatrix sq = fixture("square.json");
  for (Rational sigma : {Rational(1), Rational(3)}) {
    DiagonalResult r = minimize_diagonal(sq, sigma);
    EXPECT_EQ(r.status, GitStatus::DriftToZero) << sigma;
    EXPECT_LT(r.value, 1e-6);
  }
  // At sigma = D/d the scaled objective is constant.
  DiagonalResult flat = minimize_diagonal(sq, Rational(2));
  EXPECT_EQ(flat.status, GitStatus::Converged);
  EXPECT_NEAR(flat.value, std::sqrt(2.0), 1e-12);
}

TEST(MinimizeDiagonal, ZeroMatrix) {
  DiagonalResult r = minimize_diagonal(PolyMatrix(2, 2, 1), Rational(1));
  EXPECT_EQ(r.value, 0);
  EXPECT_EQ(r.status, GitStatus::Converged);
}

TEST(GitNorm, Examples) {
  GitOptions opt;
  opt.restarts = 16;
  EXPECT_NEAR(git_norm(fixture("identity2.json"), Rational(0), opt).value, std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(git_norm(fixture("t2.json"), Rational(1), opt).value, 2.0, 1e-8);
  EXPECT_NEAR(git_norm(fixture("unit111.json"), Rational(1), opt).value, 1.0, 1e-8);
}

TEST(GitNorm, ValueIsReproducedAtMinimizer) {
  GitOptions opt;
  opt.restarts = 8;
  for (auto [P, sigma] : {std::pair{fixture("t2.json"), Rational(1)}, {diag_linear(), ratio(1, 2)}, {fixture("sec63_subtile.json"), ratio(1, 4)}}) {
    GitEstimate est = git_norm(P, sigma, opt);
    double again = hs_norm(rescaled_matrix(to_float(P), est.frame, est.w, sigma.get_d()));
    EXPECT_NEAR(again, est.value, 1e-8 * est.value + 1e-12 * hs_norm(P));
    EXPECT_LE(est.value, hs_norm(P) + 1e-12);
  }
}

TEST(GitNorm, DeterministicAcrossThreads) {
  GitOptions a, b;
  a.restarts = b.restarts = 8;
  b.threads = 3;
  PolyMatrix P = fixture("sec63_subtile.json");
  EXPECT_EQ(git_norm(P, ratio(1, 3), a).value, git_norm(P, ratio(1, 3), b).value);
}

TEST(GitNorm, DegenerateSubtileDrifts) {
  GitOptions opt;
  opt.restarts = 4;
  GitEstimate est = git_norm(fixture("sec63_subtile.json"), ratio(1, 3), opt);
  EXPECT_EQ(est.status, GitStatus::DriftToZero);
  EXPECT_LT(est.value, 1e-6 * hs_norm(fixture("sec63_subtile.json")));
}

TEST(CriticalityResidual, Examples) {
  EXPECT_EQ(criticality_residual_squared_exact(fixture("t2.json"), Rational(1)), 0);
  EXPECT_EQ(criticality_residual_squared_exact(fixture("identity2.json"), Rational(0)), 0);
  PolyMatrix P(2, 1, 2);
  P.set(0, 0, z(2, 0));
  for (Rational s : {Rational(0), ratio(1, 2), Rational(1)}) EXPECT_GT(criticality_residual(P, s), 0);
}

TEST(PolytopeMembership, Examples) {
  SupportSet mid = support(2, 1, 2, {{0, 0, {1, 0}}, {1, 0, {0, 1}}});
  MembershipResult m = polytope_membership(mid, ratio(1, 2));
  ASSERT_TRUE(m.member);
  EXPECT_EQ(m.coefficients, (RVector{ratio(1, 2), ratio(1, 2)}));

  SupportSet one = support(1, 1, 1, {{0, 0, {1}}});
  MembershipResult n = polytope_membership(one, Rational(2));
  EXPECT_FALSE(n.member);
  ASSERT_TRUE(n.separator);
  EXPECT_EQ(n.separator->w.wd, RVector{1});
  EXPECT_EQ(n.separator->margin, 1);
  EXPECT_TRUE(verify_destabilizer(one, Rational(2), *n.separator));

  SupportSet sub = support_set(fixture("sec63_subtile.json"));
  for (Rational s : {Rational(0), ratio(3, 16), ratio(1, 3), Rational(2)}) EXPECT_FALSE(polytope_membership(sub, s).member) << s;

  MembershipResult e = polytope_membership(support(1, 1, 1, {}), Rational(0));
  EXPECT_FALSE(e.member);
  ASSERT_TRUE(e.separator);
  EXPECT_TRUE(e.separator->trivial);
}

TEST(FindDestabilizer, DegenerateSubtileDirection) {
  json fx = read_json_file(std::string(SEMISTAB_FIXTURES) + "/sec63.json");
  SupportSet sub = support_set(fixture("sec63_subtile.json"));
  auto D = find_destabilizer(sub, Rational(0));
  ASSERT_TRUE(D);
  EXPECT_GT(D->margin, 0);
  EXPECT_TRUE(verify_destabilizer(sub, Rational(0), *D));
  RVector reference;
  for (const char* k : {"rows", "cols", "vars"})
    for (const auto& x : fx["destabilizer_direction"][k]) reference.push_back(Rational(x.get<int>()));
  RVector found = D->w.wp;
  found.insert(found.end(), D->w.wq.begin(), D->w.wq.end());
  found.insert(found.end(), D->w.wd.begin(), D->w.wd.end());
  // Same line; the recorded vector pairs positively with the support, so the certificate is its negative.
  Rational scale = found[0] / reference[0];
  EXPECT_LT(scale, 0);
  for (size_t k = 0; k < reference.size(); ++k) EXPECT_EQ(found[k], scale * reference[k]) << k;
}

TEST(FindDestabilizer, Examples) {
  SupportSet E = support(1, 1, 2, {{0, 0, {1, 1}}});
  auto D = find_destabilizer(E, Rational(2));
  ASSERT_TRUE(D);
  EXPECT_EQ(D->w.wd, (RVector{1, 1}));
  EXPECT_EQ(D->margin, 2);
  SupportSet mid = support(2, 1, 2, {{0, 0, {1, 0}}, {1, 0, {0, 1}}});
  EXPECT_FALSE(find_destabilizer(mid, ratio(1, 2)));
}

TEST(VerifyDestabilizer, RejectsBadCertificates) {
  SupportSet E = support(1, 1, 2, {{0, 0, {1, 1}}});
  Destabilizer D = *find_destabilizer(E, Rational(2));
  Destabilizer weak = D;
  weak.margin = 3;
  EXPECT_FALSE(verify_destabilizer(E, Rational(2), weak));
  Destabilizer traced = D;
  traced.w.wp = {1};
  EXPECT_FALSE(verify_destabilizer(E, Rational(2), traced));
}

TEST(SparseCriterion, Examples) {
  SparseVerdict v = sparse_criterion(fixture("t2.json"), Rational(1));
  EXPECT_TRUE(v.applicable);
  EXPECT_TRUE(v.positive);
  EXPECT_TRUE(v.strictly_positive_theta);
  ASSERT_EQ(v.theta.size(), 2u);
  EXPECT_EQ(v.theta[0].second, ratio(1, 2));
  EXPECT_EQ(v.theta[1].second, ratio(1, 2));

  PolyMatrix P = polymatrix_from_json(read_json_file(std::string(SEMISTAB_FIXTURES) + "/sec63.json")["P"], "/P");
  for (Rational s : {ratio(3, 16), ratio(5, 24)}) {
    SparseVerdict w = sparse_criterion(P, s);
    EXPECT_TRUE(w.applicable) << w.reason;
    EXPECT_TRUE(w.positive) << s;
    Rational total = 0;
    for (const auto& t : w.theta) total += t.second;
    EXPECT_EQ(total, 1);
  }
  EXPECT_FALSE(sparse_criterion(P, ratio(1, 2)).positive);

  PolyMatrix bad = single(z(2, 0) + z(2, 1));
  EXPECT_FALSE(sparse_criterion(bad, ratio(1, 2)).applicable);
}

TEST(SparseCriterion, ThetaSatisfiesConvexIdentityExactly) {
  PolyMatrix P = polymatrix_from_json(read_json_file(std::string(SEMISTAB_FIXTURES) + "/sec63.json")["P"], "/P");
  Rational sigma(1, 5);
  SparseVerdict v = sparse_criterion(P, sigma);
  ASSERT_TRUE(v.positive);
  RVector acc(4 + 8 + 3);
  for (const auto& [t, th] : v.theta) {
    acc[t.i] += th;
    acc[4 + t.j] += th;
    for (int k = 0; k < 3; ++k) acc[12 + k] += th * t.alpha[k];
  }
  EXPECT_EQ(acc, balanced_target(4, 8, 3, sigma));
}

TEST(FeasibleSigma, DegenerateExampleInterval) {
  PolyMatrix P = polymatrix_from_json(read_json_file(std::string(SEMISTAB_FIXTURES) + "/sec63.json")["P"], "/P");
  SigmaInterval iv = feasible_sigma_interval(support_set(P));
  ASSERT_TRUE(iv.feasible);
  EXPECT_LE(iv.lo, ratio(3, 16));
  EXPECT_GE(iv.hi, ratio(5, 24));
}

namespace {

// Any theta on the grid with common denominator <= 24 hitting the target.
bool grid_member(const SupportSet& E, const RVector& target) {
  const int n = static_cast<int>(E.size());
  std::vector<RVector> pts;
  for (int e = 0; e < n; ++e) pts.push_back(E.weight_point(e));
  std::vector<int> k(n);
  for (int den = 1; den <= 24; ++den) {
    std::function<bool(int, int)> rec = [&](int pos, int left) {
      if (pos == n - 1) {
        k[pos] = left;
        for (size_t c = 0; c < target.size(); ++c) {
          Rational s = 0;
          for (int e = 0; e < n; ++e) s += ratio(k[e], den) * pts[e][c];
          if (s != target[c]) return false;
        }
        return true;
      }
      for (int v = 0; v <= left; ++v) {
        k[pos] = v;
        if (rec(pos + 1, left - v)) return true;
      }
      return false;
    };
    if (rec(0, den)) return true;
  }
  return false;
}

}  // namespace

TEST(Properties, LpAgreesWithGridEnumeration) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> dim(1, 3), size(1, 6), expo(0, 2);
  int found_both = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int p = dim(rng), q = dim(rng), d = dim(rng);
    SupportSet E;
    E.p = p;
    E.q = q;
    E.d = d;
    int n = size(rng);
    for (int e = 0; e < n; ++e) {
      SupportTriple t{static_cast<int>(rng() % p), static_cast<int>(rng() % q), Multiindex(d)};
      for (auto& a : t.alpha) a = expo(rng);
      E.triples.push_back(t);
    }
    Rational sigma = ratio(static_cast<long>(rng() % 5), 2);
    MembershipResult m = polytope_membership(E, sigma);
    bool grid = grid_member(E, balanced_target(p, q, d, sigma));
    if (grid) {
      EXPECT_TRUE(m.member) << "trial " << trial;
    }
    if (m.member && !grid) {
      mpz_class lcm = 1;
      for (const auto& c : m.coefficients) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
      EXPECT_GT(lcm, 24) << "trial " << trial;
    }
    if (!m.member) {
      ASSERT_TRUE(m.separator);
      EXPECT_TRUE(verify_destabilizer(E, sigma, *m.separator));
    }
    found_both += grid && m.member;
  }
  EXPECT_GT(found_both, 0);
}

TEST(Properties, SparsePositiveImpliesMembershipInRandomFrames) {
  std::mt19937_64 rng(31);
  for (auto [P, sigma] : {std::pair{fixture("t2.json"), Rational(1)}, {diag_linear(), ratio(1, 2)}}) {
    ASSERT_TRUE(sparse_criterion(P, sigma).positive);
    EXPECT_TRUE(polytope_membership(support_set(P), sigma).member);
    for (int f = 0; f < 100; ++f) {
      PolyMatrix Q = act_group_exact(P, random_rational_orthogonal(P.rows(), rng), random_rational_orthogonal(P.cols(), rng),
                                     random_rational_orthogonal(P.dim(), rng));
      EXPECT_TRUE(polytope_membership(support_set(Q), sigma).member) << f;
    }
  }
}

TEST(Properties, SparsePositiveAttainsDiagonalValue) {
  GitOptions opt;
  for (auto [P, sigma] : {std::pair{fixture("t2.json"), Rational(1)}, {diag_linear(), ratio(1, 2)}, {fixture("identity2.json"), Rational(0)}}) {
    SparseVerdict v = sparse_criterion(P, sigma);
    ASSERT_TRUE(v.strictly_positive_theta);
    GitEstimate est = git_norm(P, sigma, opt);
    DiagonalResult diag = minimize_diagonal(P, sigma);
    EXPECT_GT(est.value, (1 - 1e-3) * diag.value);
    double n2 = std::pow(hs_norm(P), 2);
    EXPECT_LE(est.foc_residual, 1e-6 * n2);
  }
}

TEST(Properties, OrbitTransportOfMinimizer) {
  std::mt19937_64 rng(41);
  GitOptions opt;
  opt.restarts = 8;
  PolyMatrix P = diag_linear();
  Rational sigma(1, 2);
  GitEstimate est = git_norm(P, sigma, opt);
  for (int trial = 0; trial < 10; ++trial) {
    QMatrix A = random_rational_orthogonal(2, rng), B = random_rational_orthogonal(2, rng);
    QMatrix C = QMatrix::identity(2);
    C(0, 1) = ratio(static_cast<long>(rng() % 7) - 3, 2);  // unimodular shear
    PolyMatrix gP = act_group_exact(P, A, B, C);
    GroupElement ginv{to_eigen(A.inverse()), to_eigen(B.inverse()), to_eigen(C.inverse()), false};
    GroupElement h = GroupElement{est.frame.O1, est.frame.O2, est.frame.O3, false} * ginv;
    Frame f{h.A, h.B, h.C};
    double moved = hs_norm(rescaled_matrix(to_float(gP), f, est.w, 0.5));
    EXPECT_NEAR(moved, est.value, 1e-9 * est.value);
  }
}

TEST(Properties, ContinuityUnderSmallPerturbation) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> U(-1, 1);
  GitOptions opt;
  opt.restarts = 8;
  PolyMatrix P = fixture("t2.json");
  double base = git_norm(P, Rational(1), opt).value;
  for (int trial = 0; trial < 5; ++trial) {
    FPolyMatrix F = to_float(P);
    FPolyMatrix G(F.rows(), F.cols(), F.dim());
    for (int i = 0; i < F.rows(); ++i) {
      FPoly e(F.dim());
      for (const auto& [a, c] : F(i, 0).terms()) e.add_term(a, c * (1 + 1e-6 * U(rng)));
      e.add_term({1, 1}, 1e-6 * U(rng));
      G.set(i, 0, e);
    }
    EXPECT_NEAR(git_norm(G, 1.0, opt).value, base, 1e-3 * base);
  }
}
