#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>

#include "fixtures.hpp"
#include "xlex/simulation.hpp"

using namespace xlex;

TEST(CGrid, DefaultAndParsed) {
  EXPECT_EQ(default_c_grid(12), (std::vector<std::size_t>{0, 2, 5, 10, 12}));
  EXPECT_EQ(default_c_grid(10), (std::vector<std::size_t>{0, 2, 5, 10}));
  EXPECT_EQ(default_c_grid(100).size(), 22u);
  EXPECT_EQ(parse_c_grid("0,2,5:20:5", 50), (std::vector<std::size_t>{0, 2, 5, 10, 15, 20}));
  EXPECT_EQ(parse_c_grid("default", 12), default_c_grid(12));
  EXPECT_THROW(parse_c_grid("0,x", 10), DomainError);
  EXPECT_THROW(parse_c_grid("0:10:0", 10), DomainError);
}

TEST(RunSimulation, IdenticalMatricesAtZero) {
  const auto e = xlex::testing::table1_english();
  SimulationConfig cfg;
  cfg.c_values = {0};
  const auto curve = run_simulation(e, e, cfg);
  ASSERT_EQ(curve.points.size(), 1u);
  EXPECT_EQ(curve.points[0], (CurvePoint{0, 0.0, 0.0, 0.0, 1}));
}

TEST(RunSimulation, RejectsDisplacementOne) {
  const auto e = xlex::testing::table1_english();
  SimulationConfig cfg;
  cfg.c_values = {0, 1, 2};
  EXPECT_THROW(run_simulation(e, e, cfg), DomainError);
  cfg.c_values = {7};
  EXPECT_THROW(run_simulation(e, e, cfg), DomainError);
}

TEST(RunSimulation, DimensionMismatch) {
  Rng rng(1);
  EXPECT_THROW(run_simulation(xlex::testing::random_matrix(4, rng), xlex::testing::random_matrix(5, rng), {}),
               DomainError);
}

TEST(RunSimulation, TableOneFullDisplacementHitsZero) {
  // Of the 265 derangements of the six words exactly one (path reversal plus
  // edge swap) preserves Table 1a's dot pattern, so 1000 draws find s = 0.
  const auto e = xlex::testing::table1_english();
  std::size_t zero_full = 0;
  std::vector<std::size_t> zero_c;
  std::vector<std::size_t> p(6);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do {
    const Permutation perm(p);
    if (similarity(e, permute_matrix(e, perm)) == 0.0) {
      zero_c.push_back(displacement_count(perm));
      zero_full += displacement_count(perm) == 6;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  std::sort(zero_c.begin(), zero_c.end());
  ASSERT_EQ(zero_c, (std::vector<std::size_t>{0, 2, 4, 6}));
  ASSERT_EQ(zero_full, 1u);

  SimulationConfig cfg;
  cfg.c_values = {6};
  const auto curve = run_simulation(e, e, cfg);
  EXPECT_EQ(curve.points[0].n_samples, 1000u);
  EXPECT_EQ(curve.points[0].min_s, 0.0);
  EXPECT_GT(curve.points[0].mean_s, 0.0);
}

TEST(RunSimulation, GroundTruthInverseReachesZero) {
  Rng rng(17);
  const auto e = xlex::testing::random_matrix(5, rng);
  const Permutation pi({1, 0, 3, 4, 2});  // c = 5
  const auto g = permute_matrix(e, pi);
  EXPECT_EQ(similarity_permuted(e.values, g.values, invert(pi)), 0.0);
  SimulationConfig cfg;
  cfg.c_values = {5};
  cfg.samples_per_c = 500;  // 44 derangements of 5
  EXPECT_EQ(run_simulation(e, g, cfg).points[0].min_s, 0.0);
}

TEST(RunSimulation, InvariantsAndThreadIndependence) {
  Rng rng(23);
  const auto e = xlex::testing::random_matrix(30, rng);
  const auto g = xlex::testing::random_matrix(30, rng);
  SimulationConfig cfg;
  cfg.samples_per_c = 50;
  cfg.seed = 5;
  const auto one = run_simulation(e, g, cfg);
  for (const auto& pt : one.points) {
    ASSERT_LE(pt.min_s, pt.mean_s);
    ASSERT_LE(pt.mean_s, pt.max_s);
    ASSERT_NE(pt.c, 1u);
  }
  for (unsigned t : {2u, 4u, 7u}) {
    cfg.threads = t;
    EXPECT_EQ(run_simulation(e, g, cfg), one);
  }
  cfg.seed = 6;
  EXPECT_NE(run_simulation(e, g, cfg), one);
}

TEST(DiscriminationRatio, Examples) {
  SimulationCurve flat{std::nullopt, 10, {{0, 5, 5, 5, 1}, {2, 5, 4, 6, 10}, {10, 5, 4, 6, 10}}, 1};
  EXPECT_EQ(discrimination_ratio(flat), 0.0);
  SimulationCurve rising{std::nullopt, 100, {{0, 10, 10, 10, 1}, {100, 20, 18, 22, 10}}, 1};
  EXPECT_DOUBLE_EQ(discrimination_ratio(rising), 1.0);
  SimulationCurve missing{std::nullopt, 100, {{0, 10, 10, 10, 1}, {50, 20, 18, 22, 10}}, 1};
  EXPECT_THROW(discrimination_ratio(missing), DomainError);
  EXPECT_THROW(discrimination_ratio(SimulationCurve{}), DomainError);
}

TEST(Synthetic, NoiseFreeSharedStreamIsIdentical) {
  SyntheticPairConfig cfg;
  cfg.vocab_size = 20;
  cfg.stream_length = 5000;
  cfg.noise_rate = 0.0;
  cfg.independent_streams = false;
  cfg.permute_lexicon = false;
  cfg.prefix_b = cfg.prefix_a;
  const auto pair = generate_synthetic_pair(cfg);
  EXPECT_EQ(pair.a, pair.b);
  EXPECT_EQ(pair.truth, Permutation::identity(20));
}

TEST(Synthetic, LexiconPermutationIsTheTruth) {
  SyntheticPairConfig cfg;
  cfg.vocab_size = 15;
  cfg.stream_length = 3000;
  cfg.noise_rate = 0.0;
  cfg.independent_streams = false;
  const auto pair = generate_synthetic_pair(cfg);
  ASSERT_EQ(pair.a.size(), pair.b.size());
  for (std::size_t k = 0; k < pair.a.size(); ++k) {
    const auto i = *pair.vocab_a.index_of(pair.a.tokens[k]);
    ASSERT_EQ(pair.b.tokens[k], pair.vocab_b[pair.truth[i]]);
  }
  EXPECT_TRUE(pair.a.valid());
  // Seeded: the same config reproduces the same pair.
  const auto again = generate_synthetic_pair(cfg);
  EXPECT_EQ(again.a, pair.a);
  EXPECT_EQ(again.truth, pair.truth);
}

TEST(Synthetic, RejectsBadConfig) {
  SyntheticPairConfig cfg;
  cfg.noise_rate = 1.5;
  EXPECT_THROW(generate_synthetic_pair(cfg), DomainError);
  cfg.noise_rate = 0.1;
  cfg.vocab_size = 1;
  EXPECT_THROW(generate_synthetic_pair(cfg), DomainError);
}

namespace {

// E from stream A, G from stream B reordered so word n of G translates word n of E.
std::pair<AssocMatrix, AssocMatrix> aligned_pair(const SyntheticPairConfig& cfg, AssocMeasure measure) {
  const auto pair = generate_synthetic_pair(cfg);
  auto e = association_matrix(pair.a, pair.vocab_a, cfg.window, measure);
  auto g = association_matrix(pair.b, pair.vocab_b, cfg.window, measure);
  return {std::move(e), permute_matrix(g, invert(pair.truth))};
}

}  // namespace

TEST(Synthetic, CurveRisesWithDisplacement) {
  SyntheticPairConfig cfg;
  cfg.vocab_size = 40;
  cfg.stream_length = 80000;
  cfg.noise_rate = 0.2;
  const auto [e, g] = aligned_pair(cfg, AssocMeasure::kSquaredRatio);
  SimulationConfig sim;
  sim.samples_per_c = 100;
  const auto curve = run_simulation(e, g, sim);
  std::vector<double> c, mean;
  for (const auto& pt : curve.points) {
    c.push_back(static_cast<double>(pt.c));
    mean.push_back(pt.mean_s);
  }
  EXPECT_GE(xlex::testing::spearman(c, mean), 0.98);
  EXPECT_GT(discrimination_ratio(curve), 0.0);
}

TEST(Synthetic, PureNoiseHasNoSlope) {
  // With every token replaced by noise, E and G are independent and G's
  // distribution is invariant under relabeling, so the expected slope of
  // mean_s against c is zero. Test the per-replicate slopes with a
  // two-sided one-sample t-test at 0.01.
  constexpr int kReplicates = 30;
  std::vector<double> slopes, gaps;
  for (int r = 0; r < kReplicates; ++r) {
    SyntheticPairConfig cfg;
    cfg.vocab_size = 25;
    cfg.stream_length = 20000;
    cfg.noise_rate = 1.0;
    cfg.seed = 1000 + r;
    const auto [e, g] = aligned_pair(cfg, AssocMeasure::kSquaredRatio);
    SimulationConfig sim;
    sim.samples_per_c = 40;
    sim.seed = 77 + r;
    const auto curve = run_simulation(e, g, sim);
    std::vector<double> c, mean;
    for (const auto& pt : curve.points) {
      c.push_back(static_cast<double>(pt.c));
      mean.push_back(pt.mean_s);
    }
    slopes.push_back(xlex::testing::ols_slope(c, mean));
    gaps.push_back(curve.points.back().mean_s - curve.points.front().mean_s);
  }
  const auto t_test = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    const double t = m / std::sqrt(ss / (n - 1) / n);
    boost::math::students_t dist(n - 1);
    return 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  };
  EXPECT_GT(t_test(slopes), 0.01);
  EXPECT_GT(t_test(gaps), 0.01);  // mean_s at c = 0 vs c = N
}
