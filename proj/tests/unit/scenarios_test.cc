#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "ccrcp/bounds.h"
#include "ccrcp/errors.h"
#include "ccrcp/experiment.h"
#include "ccrcp/json_io.h"
#include "ccrcp/scenarios.h"
#include "ccrcp/solve.h"

namespace ccrcp {
namespace {

TEST(Scenarios, SeededGenerationIsReproducible) {
  std::vector<Eigen::VectorXd> a, b;
  GenMixture(50, 42, 2, &a);
  GenMixture(50, 42, 2, &b);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(a[k] == b[k]);
  GenMixture(50, 43, 2, &b);
  EXPECT_FALSE(a[0] == b[0]);
  const PoolPtr c1 = GenClassification(40, 3, 5);
  const PoolPtr c2 = GenClassification(40, 3, 5);
  for (Index j = 0; j < c1->size(); ++j) {
    EXPECT_EQ((*c1)[j].id, (*c2)[j].id);
  }
}

TEST(Scenarios, MixtureWeightAndCovariance) {
  std::vector<Eigen::VectorXd> draws;
  std::vector<bool> outlier;
  GenMixture(20000, 7, 2, &draws, &outlier);
  int inliers = 0;
  Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < draws.size(); ++k) {
    if (outlier[k]) continue;
    ++inliers;
    mean += draws[k];
    second += draws[k] * draws[k].transpose();
  }
  const double n = 20000.0;
  const double sigma = std::sqrt(n * 0.95 * 0.05);
  EXPECT_LE(std::abs(inliers - 0.95 * n), 3 * sigma);
  mean /= inliers;
  const Eigen::Matrix2d cov = second / inliers - mean * mean.transpose();
  EXPECT_LT((cov - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Scenarios, ClassificationIsBalancedAndSeparable) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PoolPtr pool = GenClassification(200, 4, seed);
    int positives = 0;
    for (const Constraint& c : pool->constraints()) positives += c.delta[4] > 0;
    EXPECT_EQ(positives, 100);
    const Solution s = Solve(ConvexProgram::Default(pool, pool->AllIndices()));
    ASSERT_TRUE(s.feasible());
    EXPECT_NEAR(s.x_star[5], 0.0, 1e-9);  // nu
  }
}

TEST(Scenarios, Partitions) {
  const Partition even = EvenPartition(10, 3);
  ASSERT_EQ(even.size(), 3u);
  EXPECT_EQ(even[0], (IndexSet{0, 1, 2, 3}));
  EXPECT_EQ(even[2], (IndexSet{7, 8, 9}));
  EXPECT_THROW(SizedPartition(10, {4, 4}), InvalidArgument);
  EXPECT_EQ(SizedPartition(5, {0, 5})[1].size(), 5u);
}

TEST(Scenarios, PoolJsonRoundTrip) {
  const PoolPtr pool = GenClassification(30, 2, 3);
  const PoolPtr back = io::PoolFromJson(io::PoolToJson(*pool));
  ASSERT_EQ(back->size(), pool->size());
  for (Index j = 0; j < pool->size(); ++j) {
    EXPECT_EQ((*back)[j].id, (*pool)[j].id);
  }
}

// Monte Carlo violation frequency of the scenario ellipsoid against fresh
// samples stays below the epsilon bound at beta = 1e-9.
TEST(Scenarios, ViolationFrequencyWithinBound) {
  const int n = 2000;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PoolPtr pool = GenMixture(n, seed);
    const ConvexProgram program = ConvexProgram::Default(pool, pool->AllIndices());
    const Solution s = Solve(program);
    std::vector<Eigen::VectorXd> fresh;
    GenMixture(100000, 1000 + seed, 2, &fresh);
    Eigen::VectorXd center;
    Eigen::MatrixXd shape;
    UnpackEllipsoid(s.x_star, 2, &center, &shape);
    int violated = 0;
    for (const auto& y : fresh) {
      const Eigen::VectorXd r = y - center;
      violated += r.dot(shape * r) > 1.0;
    }
    EXPECT_LE(violated / 100000.0, EpsilonBound(1e-9, program.dim(), n));
  }
}

TEST(Experiment, VccRoundsEqualChainDiameter) {
  ExperimentSpec spec;
  spec.scenario.kind = ScenarioKind::kEllipsoidMixture;
  spec.scenario.n_samples = 400;
  spec.topology = "chain";
  spec.nodes = 10;
  spec.protocol = Protocol::kVcc;
  const ExperimentResult r = RunExperiment(spec);
  EXPECT_EQ(r.iterations, 9);
  EXPECT_EQ(r.diameter, 9);
  EXPECT_TRUE(r.passed);
}

TEST(Experiment, AccExchangesFewerConstraintsThanVcc) {
  ExperimentSpec spec;
  spec.scenario.kind = ScenarioKind::kGaussianClassification;
  spec.scenario.n_samples = 1000;
  spec.scenario.dim = 4;
  spec.topology = "geometric";
  spec.nodes = 20;
  spec.run.trace_objective = false;
  const ExperimentResult acc = RunExperiment(spec);
  spec.protocol = Protocol::kVcc;
  const ExperimentResult vcc = RunExperiment(spec);
  EXPECT_TRUE(acc.passed);
  EXPECT_TRUE(vcc.passed);
  EXPECT_LE(acc.max_constraints_exchanged, 4 + 3);
  EXPECT_GT(vcc.max_constraints_exchanged, acc.max_constraints_exchanged);

  std::ostringstream csv;
  WriteResultsCsv({acc, vcc}, csv);
  EXPECT_NE(csv.str().find("geometric,vcc,20,1000"), std::string::npos);
}

}  // namespace
}  // namespace ccrcp
