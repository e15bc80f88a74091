#include <gtest/gtest.h>

#include <random>

#include "semistab/blockdecomp.hpp"
#include "semistab/frames.hpp"
#include "semistab/json_io.hpp"
#include "semistab/radon.hpp"
#include "semistab/tileplan.hpp"

using namespace semistab;

namespace {

json load(const std::string& name) { return read_json_file(std::string(SEMISTAB_FIXTURES) + "/" + name); }

RVector base_point(const json& j) {
  RVector z;
  for (const auto& x : j["z0"]) z.push_back(rational_from_json(x, "/z0"));
  return z;
}

Poly var(int d, int k) { return Poly::variable(d, k); }
Poly cst(int d, Rational c) { return Poly::constant(d, c); }

RadonProblem problem(int n, int n1, int k, std::vector<Poly> phi) {
  RadonProblem p;
  p.n = n;
  p.n1 = n1;
  p.k = k;
  p.phi = std::move(phi);
  return p;
}

QMatrix random_unimodular(int n, std::mt19937_64& rng) {
  QMatrix S = QMatrix::identity(n);
  for (int step = 0; step < 2 * n; ++step) {
    int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    if (a == b) continue;
    QMatrix E = QMatrix::identity(n);
    E(a, b) = ratio(static_cast<long>(rng() % 5) - 2, 2);
    S = S * E;
  }
  return random_rational_orthogonal(n, rng) * S;
}

}  // namespace

TEST(BuildIncidence, Examples) {
  // Variables: x1, x2, x3, s.
  const int v = 4;
  Poly s = var(v, 3);
  RadonProblem a = problem(3, 2, 1, {var(v, 0) * s + var(v, 1) * s * s * ratio(1, 2) + var(v, 2)});
  PolyMatrix Ma = build_incidence(a);
  EXPECT_EQ(Ma(0, 0), s);
  EXPECT_EQ(Ma(0, 1), s * s * ratio(1, 2));
  EXPECT_EQ(Ma(0, 2), cst(v, 1));

  // x2 - (x1 - t)^2 / 2 with variables x1, x2, t.
  Poly x1 = var(3, 0), x2 = var(3, 1), t = var(3, 2);
  RadonProblem b = problem(2, 2, 1, {x2 - (x1 - t) * (x1 - t) * ratio(1, 2)});
  PolyMatrix Mb = build_incidence(b);
  EXPECT_EQ(Mb(0, 0), -(x1 - t));
  EXPECT_EQ(Mb(0, 1), cst(3, 1));

  RadonProblem moment = radon_problem_from_json(load("moment.json"));
  PolyMatrix Mm = build_incidence(moment);
  EXPECT_EQ(Mm(0, 0), var(4, 3));
  EXPECT_EQ(Mm(0, 1), var(4, 3) * var(4, 3) * ratio(1, 2));
  EXPECT_EQ(Mm(0, 2), cst(4, 1));
}

TEST(BuildIncidence, BalancedParabolaMatchesConstruction) {
  RadonProblem p = type2_problem({{2}});
  ASSERT_EQ(p.n, 2);
  ASSERT_EQ(p.k, 1);
  PolyMatrix M = build_incidence(p);
  Poly x1 = var(3, 1), t = var(3, 2);
  EXPECT_EQ(M(0, 0), cst(3, 1));
  EXPECT_EQ(M(0, 1), x1 - t);
}

TEST(BuildIncidence, Errors) {
  Poly x1 = var(3, 0), x2 = var(3, 1), t = var(3, 2);
  RadonProblem sq = problem(2, 2, 1, {x1 * x1 + x2 * x2 + t});
  EXPECT_THROW(build_incidence(sq, RVector{0, 0, 0}), RankDeficient);
  EXPECT_NO_THROW(build_incidence(sq, RVector{1, 0, 0}));
  RadonProblem flat = problem(2, 2, 1, {t * t});
  EXPECT_THROW(flat.validate(), std::invalid_argument);
  RadonProblem shape = problem(2, 2, 2, {x1, x2});
  EXPECT_THROW(shape.validate(), std::invalid_argument);
}

TEST(CurvatureForm, Examples) {
  json par = load("parabola.json");
  CurvatureForm Q = curvature_form(radon_problem_from_json(par), base_point(par));
  ASSERT_EQ(Q.g.size(), 1u);
  EXPECT_EQ(std::abs(Q.g[0].get_d()), 1.0);
  EXPECT_TRUE(Q.exact);

  json flat = load("flat.json");
  CurvatureForm Z = curvature_form(radon_problem_from_json(flat), base_point(flat));
  ASSERT_EQ(Z.g.size(), 1u);
  EXPECT_EQ(Z.g[0], 0);

  Poly x1 = var(3, 0), x2 = var(3, 1), t = var(3, 2);
  RadonProblem sq = problem(2, 2, 1, {x1 * x1 + x2 * x2 + t});
  EXPECT_THROW(curvature_form(sq, RVector{0, 0, 0}), NonTransverse);

  std::mt19937_64 rng(1);
  CurvatureForm R = random_form(5, 2, 3, rng);
  EXPECT_EQ(R.g.size(), 30u);
  PolyMatrix P = curvature_polymatrix(R);
  EXPECT_EQ(P.rows(), 5);
  EXPECT_EQ(P.cols(), 2);
  EXPECT_EQ(P.dim(), 3);
}

TEST(Verdict, Examples) {
  json par = load("parabola.json");
  SemistabilityVerdict pos = semistability_verdict(curvature_form(radon_problem_from_json(par), base_point(par)));
  EXPECT_EQ(pos.state, VerdictState::Positive);
  EXPECT_EQ(pos.method, "sparse");
  EXPECT_EQ(pos.sigma, 1);

  CurvatureForm unit = CurvatureForm::zeros(1, 1, 1);
  unit.g[0] = 1;
  EXPECT_EQ(semistability_verdict(unit).state, VerdictState::Positive);

  SemistabilityVerdict zero = semistability_verdict(CurvatureForm::zeros(2, 2, 2));
  EXPECT_EQ(zero.state, VerdictState::Unstable);
  EXPECT_EQ(zero.method, "trivial");
  ASSERT_TRUE(zero.destabilizer);
  EXPECT_TRUE(zero.destabilizer->trivial);
}

TEST(Verdict, RandomFiveTwoThreeFormsAreUnstable) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    CurvatureForm Q = random_form(5, 2, 3, rng);
    SemistabilityVerdict v = semistability_verdict(Q);
    EXPECT_EQ(v.state, VerdictState::Unstable) << trial;
    EXPECT_TRUE(verify_unstable_certificate(curvature_polymatrix(Q), v)) << trial;
  }
}

TEST(Verdict, CertificateRejectsTampering) {
  std::mt19937_64 rng(8);
  PolyMatrix P = curvature_polymatrix(random_form(5, 2, 3, rng));
  SemistabilityVerdict v = semistability_verdict(P, ratio(1, 3));
  ASSERT_EQ(v.state, VerdictState::Unstable);
  ASSERT_TRUE(verify_unstable_certificate(P, v));
  SemistabilityVerdict inflated = v;
  inflated.destabilizer->margin *= 1000;
  EXPECT_FALSE(verify_unstable_certificate(P, inflated));
  SemistabilityVerdict singular = v;
  singular.frame_C = QMatrix(3, 3);
  EXPECT_FALSE(verify_unstable_certificate(P, singular));
  EXPECT_FALSE(verify_unstable_certificate(P, SemistabilityVerdict{}));
}

TEST(Properties, VerdictInvariance) {
  std::mt19937_64 rng(9);
  CurvatureForm unit = CurvatureForm::zeros(1, 1, 1);
  unit.g[0] = 1;
  std::vector<PolyMatrix> cases{curvature_polymatrix(unit)};
  for (int k = 0; k < 3; ++k) cases.push_back(curvature_polymatrix(random_form(5, 2, 3, rng)));
  for (const auto& P : cases) {
    Rational sigma(1, P.dim());
    SemistabilityVerdict v = semistability_verdict(P, sigma);
    ASSERT_NE(v.state, VerdictState::Undetermined);
    for (int trial = 0; trial < 3; ++trial) {
      QMatrix A = random_unimodular(P.rows(), rng), B = random_unimodular(P.cols(), rng), C = random_unimodular(P.dim(), rng);
      PolyMatrix gP = act_group_exact(P, A, B, C);
      SemistabilityVerdict w = semistability_verdict(gP, sigma);
      EXPECT_EQ(w.state, v.state);
      if (v.state == VerdictState::Unstable) {
        EXPECT_TRUE(verify_unstable_certificate(gP, transport_verdict(v, A, B, C)));
      } else {
        GitOptions git;
        git.restarts = 8;
        double a = git_norm(P, sigma, git).value, b = git_norm(gP, sigma, git).value;
        EXPECT_NEAR(a, b, 1e-6 * a);
      }
    }
  }
}

TEST(ModelExponents, Examples) {
  ModelExponents e = model_exponents(3, 3, 2);
  EXPECT_EQ(e.r_g, ratio(5, 3));
  EXPECT_EQ(e.r_f, ratio(5, 3));
  EXPECT_TRUE(e.identity_holds);
  ModelExponents f = model_exponents(2, 2, 1);
  EXPECT_EQ(f.r_g, ratio(3, 2));
  EXPECT_EQ(f.r_f, ratio(3, 2));
  EXPECT_THROW(model_exponents(2, 3, 2), std::invalid_argument);
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    int k = 1 + static_cast<int>(rng() % 4);
    int n = k + 1 + static_cast<int>(rng() % 5), n1 = k + 1 + static_cast<int>(rng() % 5);
    EXPECT_TRUE(model_exponents(n, n1, k).identity_holds);
  }
}

TEST(Properties, TilePlanExponentMatchesModelExponents) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    int k = 1 + static_cast<int>(rng() % 3);
    int n = k + 1 + static_cast<int>(rng() % 4), n1 = k + 1 + static_cast<int>(rng() % 4);
    int p = k, q = n, d = n1 - k;
    BlockDecomposition dec;
    dec.row_groups = {p};
    dec.col_groups = {p, q - p};
    dec.D = {{0, 1}};
    auto plan = solve_plan({tile_point(dec, {0, 0, 0, 0}, 0), tile_point(dec, {0, 0, 1, 1}, ratio(1, d))}, p, q);
    ASSERT_TRUE(plan);
    EXPECT_EQ(plan->tau, ratio(d * q, (q - p) * p));
    EXPECT_EQ(plan->tau * (model_exponents(n, n1, k).r_f - 1), 1);
  }
}

TEST(BalancedCheck, Examples) {
  BalancedResult a = balanced_check({{1, 0}, {0, 1}}, 1, 1);
  ASSERT_TRUE(a.ok) << a.reason;
  EXPECT_EQ(a.sigma, ratio(1, 2));
  EXPECT_EQ(a.N, 2);
  EXPECT_EQ(a.r, ratio(4, 3));

  BalancedResult b = balanced_check({{2}}, 2, 1);
  ASSERT_TRUE(b.ok) << b.reason;
  EXPECT_EQ(b.sigma, 1);
  EXPECT_EQ(b.N, 1);
  EXPECT_EQ(b.r, ratio(3, 2));
  EXPECT_EQ(b.target, 3);

  BalancedResult c = balanced_check({{1}, {2}}, 2, 1);
  EXPECT_FALSE(c.ok);
  ASSERT_TRUE(c.witness);
  EXPECT_EQ(*c.witness, (Multiindex{1}));

  BalancedResult d = balanced_check({{1, 1}}, 1, 1);
  EXPECT_FALSE(d.ok);
  ASSERT_TRUE(d.witness);
  EXPECT_TRUE(*d.witness == (Multiindex{1, 0}) || *d.witness == (Multiindex{0, 1}));

  BalancedResult e = balanced_check({{1, 0}, {0, 1}, {2, 0}}, 1, 1);
  EXPECT_FALSE(e.ok);

  json fx = load("balanced2.json");
  std::vector<Multiindex> A;
  for (const auto& x : fx["set"]) A.push_back(x.get<Multiindex>());
  EXPECT_TRUE(balanced_check(A, 2, 2).ok);
}

TEST(RadonDecomposition, BalancedConstructionsPass) {
  for (auto [A, k] : {std::pair{std::vector<Multiindex>{{1, 0}, {0, 1}, {1, 1}}, 2}, {std::vector<Multiindex>{{1, 0}, {0, 1}}, 1}}) {
    RadonReport rep = verify_radon_decomposition(type1_problem(A, k), type1_decomposition(A, k));
    EXPECT_TRUE(rep.pass) << radon_report_to_json(rep).dump();
  }
  for (auto A : {std::vector<Multiindex>{{2, 0}, {1, 1}, {0, 2}}, std::vector<Multiindex>{{2}, {3}}, std::vector<Multiindex>{{2}}}) {
    RadonReport rep = verify_radon_decomposition(type2_problem(A), type2_decomposition(A));
    EXPECT_TRUE(rep.pass) << radon_report_to_json(rep).dump();
  }
}

TEST(RadonDecomposition, Type1DegreeTable) {
  RadonReport rep = verify_radon_decomposition(type1_problem({{1, 0}, {0, 1}, {1, 1}}, 2), type1_decomposition({{1, 0}, {0, 1}, {1, 1}}, 2));
  ASSERT_EQ(rep.degrees.size(), 6u);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(rep.degrees[i].back(), i < 4 ? 1 : 2) << i;
    EXPECT_EQ(rep.degrees[i].front(), 0) << i;
  }
}

TEST(RadonDecomposition, PerturbedPFails) {
  std::vector<Multiindex> A{{2, 0}, {1, 1}, {0, 2}};
  RadonDecomposition dec = type2_decomposition(A);
  int j = dec.P.cols() - 1;
  while (j >= 0 && dec.P(0, j).is_zero()) --j;
  ASSERT_GE(j, 0);
  dec.P.set(0, j, dec.P(0, j) * Rational(2));
  RadonReport rep = verify_radon_decomposition(type2_problem(A), dec);
  EXPECT_FALSE(rep.pass);
  ASSERT_FALSE(rep.violations.empty());
  EXPECT_EQ(rep.violations[0].kind, "order");
  EXPECT_EQ(rep.violations[0].row, 0);
  EXPECT_EQ(rep.violations[0].col, j);

  RadonDecomposition bad = type2_decomposition(A);
  PolyMatrix A2 = bad.A;
  A2.set(0, 0, cst(A2.dim(), 2));
  bad.A = A2;
  RadonReport det = verify_radon_decomposition(type2_problem(A), bad);
  EXPECT_FALSE(det.det_A_ok);
  EXPECT_FALSE(det.pass);
}

TEST(Properties, GenericPhiHasTwoColumnGroups) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int trial = 0; trial < 6; ++trial) {
    // phi_i = x_i + sum_j x_{k+j} f_ij(t) with random quadratics f.
    // (k, d) alternates between (1, 2) and (2, 1); both keep n - k <= k d.
    const int k = 1 + trial % 2, d = 3 - k, n = k + 2;
    const int n1 = k + d, v = n + d;
    std::vector<Poly> phi;
    for (int i = 0; i < k; ++i) {
      Poly f = var(v, i);
      for (int j = 0; j < n - k; ++j) {
        Poly g(v);
        for (int l = 0; l < d; ++l) {
          g.add_term(unit_index(v, n + l), coef(rng));
          for (int m = l; m < d; ++m) g = g + var(v, n + l) * var(v, n + m) * Rational(coef(rng));
        }
        f = f + var(v, k + j) * g;
      }
      phi.push_back(f);
    }
    RadonProblem prob = problem(n, n1, k, phi);
    prob.validate();
    RVector x0;
    for (int j = 0; j < n; ++j) x0.push_back(ratio(coef(rng), 3));
    PolyMatrix M = freeze_x(build_incidence(prob), x0);
    EliminationResult e = eliminate(M);
    EXPECT_EQ(e.decomposition.row_group_count(), 1) << trial;
    ASSERT_EQ(e.decomposition.col_group_count(), 2) << trial;
    EXPECT_EQ(e.decomposition.col_groups[1], n - k);
    EXPECT_EQ(e.decomposition.D, (std::vector<std::vector<int>>{{0, 1}}));
  }
}

TEST(RadonProblemJson, FixturesRoundTrip) {
  for (const char* name : {"parabola.json", "flat.json", "moment.json"}) {
    RadonProblem p = radon_problem_from_json(load(name));
    RadonProblem q = radon_problem_from_json(radon_problem_to_json(p));
    EXPECT_EQ(q.n, p.n);
    EXPECT_EQ(q.n1, p.n1);
    EXPECT_EQ(q.k, p.k);
    EXPECT_EQ(q.phi, p.phi);
  }
  json bad = load("parabola.json");
  bad["k"] = 3;
  EXPECT_THROW(radon_problem_from_json(bad), InputError);
}
