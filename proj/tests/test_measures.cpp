#include "irrev/checks.hpp"
#include "irrev/measures.hpp"
#include "irrev/sampling.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace irrev;

namespace {

OptimizerConfig quick() {
  OptimizerConfig c;
  c.restarts = 8;
  return c;
}

}  // namespace

TEST(PureEntanglement, Examples) {
  EXPECT_NEAR(pure_entanglement(bell_state(WeylIndex(0, 0, 3))), std::log2(3.0), 1e-12);
  EXPECT_NEAR(pure_entanglement(product_ket(0, 0, {3, 3})), 0.0, 1e-12);
  EXPECT_NEAR(pure_entanglement(product_ket(1, 2, {2, 4})), 0.0, 1e-12);
}

TEST(PureEntanglement, SchmidtTwoQubit) {
  // cos t |00> + sin t |11>
  const double t = 0.4;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = std::cos(t);
  v(3) = std::sin(t);
  EXPECT_NEAR(pure_entanglement(CVector(v, BipartiteDims{2, 2})), oracle::binary_entropy(std::cos(t) * std::cos(t)),
              1e-12);
}

TEST(PureEntanglement, FamilySuperpositionMatchesFourierEntropy) {
  Sampler s(17);
  for (std::size_t d = 2; d <= 8; ++d)
    for (int i = 0; i < 10; ++i) {
      const auto c = s.haar_vector(d);
      const Eigen::VectorXcd chat = oracle::dft_matrix(d) * c.data();
      std::vector<double> p(d);
      for (std::size_t k = 0; k < d; ++k) p[k] = std::norm(chat(static_cast<Eigen::Index>(k)));
      const double e = pure_entanglement(checks::detail::family_superposition(c, BasisConvention::Column));
      EXPECT_NEAR(e, shannon_entropy_bits(p), 1e-9) << d;
    }
}

TEST(EdPlus, Examples) {
  EXPECT_NEAR(ed_plus(ProbVector::point_mass(3, 0)), std::log2(3.0), 1e-12);
  EXPECT_NEAR(ed_plus(ProbVector::uniform(4)), 0.0, 1e-12);
  EXPECT_NEAR(ed_plus(ProbVector({0.75, 0.25})), 1.0 - oracle::binary_entropy(0.25), 1e-12);
  EXPECT_NEAR(ed_plus(ProbVector({0.75, 0.25})), 0.18872187554086717, 1e-12);
  EXPECT_NEAR(ed_plus(ProbVector({0.6, 0.3, 0.1})), 0.2895006564828342, 1e-12);
  // Clamped at zero.
  EXPECT_GE(ed_plus(ProbVector({0.5, 0.5})), 0.0);
}

TEST(EpsilonMin, PointMassAndPicketFence) {
  EXPECT_NEAR(epsilon_min(ProbVector::point_mass(3, 0)).value, std::log2(3.0), 1e-9);
  EXPECT_NEAR(epsilon_min(ProbVector::point_mass(5, 2)).value, std::log2(5.0), 1e-9);
  EXPECT_NEAR(epsilon_min(ProbVector({0.5, 0.0, 0.5, 0.0}), quick()).value, 1.0, 1e-7);
  EXPECT_NEAR(epsilon_min(ProbVector::uniform(4), quick()).value, 0.0, 1e-7);
}

TEST(EpsilonMin, TwoQubitMatchesWootters) {
  for (double p : {0.5, 0.6, 0.75, 0.9, 0.99}) {
    const auto r = epsilon_min(ProbVector({p, 1.0 - p}), quick());
    EXPECT_NEAR(r.value, oracle::wootters_bell_diagonal(p), 1e-7) << p;
  }
  EXPECT_NEAR(epsilon_min(ProbVector({0.75, 0.25})).value, 0.35457890266527003, 1e-8);
}

TEST(EpsilonMin, MatchesPhaseGrid) {
  const ProbVector lam({0.6, 0.3, 0.1});
  const double e = epsilon_min(lam).value;
  EXPECT_NEAR(e, 0.5898710479008862, 1e-5);
  EXPECT_NEAR(e, epsilon_bruteforce(lam, 360), 1e-3);
  EXPECT_LE(e, 0.5898710479008862 + 1e-9);
}

TEST(EpsilonMin, ObjectiveAtReportedPhases) {
  const ProbVector lam({0.5, 0.2, 0.2, 0.1});
  const auto r = epsilon_min(lam, quick());
  ASSERT_EQ(r.optimizer_phases.size(), 4u);
  EXPECT_NEAR(epsilon_objective(lam, r.optimizer_phases), r.value, 1e-12);
  EXPECT_TRUE(r.converged);
}

TEST(EpsilonMin, Deterministic) {
  Sampler s(3);
  const auto lam = s.probability_vector(5);
  auto cfg = quick();
  const double a = epsilon_min(lam, cfg).value;
  cfg.threads = 3;
  EXPECT_EQ(a, epsilon_min(lam, cfg).value);
}

TEST(EpsilonMin, RejectsZeroRestarts) {
  OptimizerConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(epsilon_min(ProbVector::uniform(2), cfg), ValidationError);
}

TEST(EpsilonBruteforce, Basics) {
  EXPECT_NEAR(epsilon_bruteforce(ProbVector::uniform(2), 1), 0.0, 1e-12);
  EXPECT_NEAR(epsilon_bruteforce(ProbVector::uniform(3), 360), 0.0, 1e-12);
  EXPECT_NEAR(epsilon_bruteforce(ProbVector::point_mass(4, 1), 4), 2.0, 1e-12);
  EXPECT_THROW(epsilon_bruteforce(ProbVector::uniform(6), 4), DimensionError);
  EXPECT_THROW(epsilon_bruteforce(ProbVector::uniform(2), 0), ValidationError);
}

TEST(EpsilonBruteforce, NeverBelowOptimizer) {
  Sampler s(8);
  for (std::size_t d = 2; d <= 3; ++d)
    for (int i = 0; i < 5; ++i) {
      const auto lam = s.probability_vector(d);
      const double e = epsilon_min(lam, quick()).value;
      const double bf = epsilon_bruteforce(lam, checks::oracle_grid(d));
      EXPECT_GE(bf, e - 1e-9);
      EXPECT_LT(bf - e, 1e-3);
    }
}

TEST(ConvexEnvelope, ConvexInputUnchanged) {
  std::vector<Point2> pts;
  for (int i = 0; i <= 10; ++i) pts.push_back({i * 0.1, (i * 0.1) * (i * 0.1)});
  const auto env = convex_envelope_1d(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_DOUBLE_EQ(env[i].y, pts[i].y);
}

TEST(ConvexEnvelope, TentBecomesChord) {
  const std::vector<Point2> pts{{0, 0}, {0.5, 1}, {1, 0}};
  const auto env = convex_envelope_1d(pts);
  EXPECT_DOUBLE_EQ(env[1].y, 0.0);
  EXPECT_DOUBLE_EQ(env[0].y, 0.0);
}

TEST(ConvexEnvelope, ConcaveArcBecomesLine) {
  std::vector<Point2> pts;
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    pts.push_back({x, std::sqrt(x)});
  }
  const auto env = convex_envelope_1d(pts);
  for (const auto& p : env) EXPECT_NEAR(p.y, p.x, 1e-12);
}

TEST(ConvexEnvelope, Errors) {
  const std::vector<Point2> one{{0, 0}};
  EXPECT_THROW(convex_envelope_1d(one), ValidationError);
  const std::vector<Point2> unsorted{{0, 0}, {0, 1}};
  EXPECT_THROW(convex_envelope_1d(unsorted), ValidationError);
}

TEST(ConvexEnvelope, TwoQubitEpsilonIsAlreadyConvex) {
  // For two qubits epsilon equals E_f, which is convex in the Bell weight.
  const auto grid = linspace(0.0, 1.0, 41);
  const auto pts = gap_sweep(2, grid, quick());
  for (const auto& g : pts) {
    const double w = oracle::wootters_bell_diagonal(g.f);
    EXPECT_NEAR(g.epsilon, w, 1e-7) << g.nu;
    EXPECT_NEAR(g.co_epsilon, w, 1e-7) << g.nu;
  }
}

TEST(LambdaNu, Shape) {
  const auto l = lambda_nu(0.4, 3);
  EXPECT_NEAR(l[0], 0.4 + 0.2, 1e-15);
  EXPECT_NEAR(l[1], 0.2, 1e-15);
  EXPECT_NEAR(l[2], 0.2, 1e-15);
  EXPECT_THROW(lambda_nu(1.5, 2), ValidationError);
  EXPECT_THROW(lambda_nu(0.5, 0), ValidationError);
}

TEST(GapSweep, Endpoints) {
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto grid = linspace(0.0, 1.0, 11);
    const auto pts = gap_sweep(d, grid, quick());
    EXPECT_NEAR(pts.front().ed_plus, 0.0, 1e-12);
    EXPECT_NEAR(pts.front().epsilon, 0.0, 1e-7);
    EXPECT_NEAR(pts.front().gap, 0.0, 1e-7);
    EXPECT_NEAR(pts.back().ed_plus, std::log2(static_cast<double>(d)), 1e-12);
    EXPECT_NEAR(pts.back().epsilon, std::log2(static_cast<double>(d)), 1e-9);
    EXPECT_LT(std::abs(pts.back().gap), 1e-12);
    for (const auto& g : pts) {
      EXPECT_GE(g.gap, -1e-6);
      EXPECT_GE(g.relative_gap, 0.0);
      EXPECT_LE(g.relative_gap, 1.0 + 1e-9);
      EXPECT_LE(g.co_epsilon, g.epsilon + 1e-15);
    }
  }
}

TEST(GapSweep, DeterministicAcrossThreadCounts) {
  const auto grid = linspace(0.0, 1.0, 9);
  auto cfg = quick();
  const auto a = gap_sweep(3, grid, cfg);
  cfg.threads = 4;
  const auto b = gap_sweep(3, grid, cfg);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].epsilon, b[i].epsilon);
    EXPECT_EQ(a[i].co_epsilon, b[i].co_epsilon);
  }
}

TEST(GapSweep, RelativeGapNearSeparableEndIsLarge) {
  const std::vector<double> grid{0.0, 0.01, 0.5, 0.99, 1.0};
  const auto pts = gap_sweep(2, grid, quick());
  // Closed form for two qubits.
  const double w = oracle::wootters_bell_diagonal(0.01 + 0.99 / 2.0);
  EXPECT_NEAR(pts[1].co_epsilon, w, 1e-7);
  EXPECT_GT(pts[1].relative_gap, 0.8);
  EXPECT_LT(pts[3].relative_gap, 0.1);
}

TEST(GapSweep, GridErrors) {
  const std::vector<double> empty;
  EXPECT_THROW(gap_sweep(2, empty), ValidationError);
  const std::vector<double> down{0.5, 0.2};
  EXPECT_THROW(gap_sweep(2, down), ValidationError);
  const std::vector<double> out{0.5, 1.2};
  EXPECT_THROW(gap_sweep(2, out), ValidationError);
}

TEST(Linspace, Endpoints) {
  const auto g = linspace(0.0, 1.0, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_DOUBLE_EQ(g[2], 0.5);
}

TEST(PhiNu, Endpoints) {
  const auto one = phi_nu(1.0, 3);
  EXPECT_NEAR(one.entanglement, std::log2(3.0), 1e-12);
  EXPECT_NEAR(one.lambda_discrepancy, 0.0, 1e-12);
  EXPECT_NEAR(one.raw_norm, 1.0, 1e-15);

  const auto zero = phi_nu(0.0, 3);
  EXPECT_NEAR(zero.entanglement, 0.0, 1e-12);
  EXPECT_NEAR(zero.lambda_discrepancy, 0.0, 1e-12);
}

TEST(PhiNu, InteriorIsNotNormalizedAndTwirlsElsewhere) {
  const auto r = phi_nu(0.5, 2);
  // |<Psi_0|00>| = 2^{-1/2}
  EXPECT_NEAR(r.raw_norm * r.raw_norm, 1.0 + 2.0 * std::sqrt(0.25) / std::sqrt(2.0), 1e-12);
  EXPECT_GT(r.lambda_discrepancy, 1e-3);
  double sum = 0.0;
  for (double x : r.twirl_lambda) sum += x;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_LE(epsilon_min(ProbVector(r.twirl_lambda), quick()).value, r.entanglement + 1e-6);
}

TEST(Checks, ChainAndStrictGap) {
  const auto cfg = quick();
  EXPECT_TRUE(checks::chain(2, 4, 10, cfg, 5).passed);
  EXPECT_TRUE(checks::equality_certification(2, 6, cfg).passed);
  const auto sg = checks::strict_gap(OptimizerConfig{});
  EXPECT_TRUE(sg.passed) << sg.witness;
}

TEST(Checks, SuiteAllPassAtSmallSize) {
  checks::SuiteConfig sc;
  sc.d_max = 4;
  sc.samples = 5;
  sc.optimizer = quick();
  for (const auto& r : checks::run_all(sc)) EXPECT_TRUE(r.passed) << r.name << ": " << r.witness;
}
