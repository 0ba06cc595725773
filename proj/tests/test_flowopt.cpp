#include <gtest/gtest.h>

#include "symland/flowopt.hpp"
#include "symland/sumgate.hpp"

using namespace symland;

namespace {

std::vector<double> sum_values() {
  const Objective obj = Objective::from(SymplecticMatrix::from(sum::gate()));
  std::vector<double> out;
  for (const auto& idx : enumerate_critical(obj.spectrum())) {
    out.push_back(critical_value(idx, obj.spectrum()).constructive);
  }
  return out;
}

Mat sum_saddle() {
  const Objective obj = Objective::from(SymplecticMatrix::from(sum::gate()));
  for (const auto& idx : enumerate_critical(obj.spectrum())) {
    if (idx.mpp[0] == 2) return build_representative(idx, obj).matrix();
  }
  throw std::runtime_error("saddle not found");
}

}  // namespace

TEST(FlowConfig, Validation) {
  FlowConfig ok;
  EXPECT_NO_THROW(ok.validate());
  auto bad = [](auto mutate) {
    FlowConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](FlowConfig& c) { c.step = 0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& c) { c.beta = 1.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& c) { c.armijo = 0.0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& c) { c.grad_tol = -1; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& c) { c.starts = 0; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& c) { c.max_iters = -1; }).validate(), ValidationError);
  EXPECT_THROW(bad([](FlowConfig& c) { c.step_cap = 0.01; }).validate(), ValidationError);
}

TEST(MatchValue, NearestWithinTolerance) {
  EXPECT_EQ(*match_value(10.00001, {0, 10, 18.6}), 10.0);
  EXPECT_FALSE(match_value(10.01, {0, 10, 18.6}).has_value());
  EXPECT_FALSE(match_value(1.0, {}).has_value());
}

TEST(Descend, StartAtTargetStopsImmediately) {
  const Mat w = sum::gate();
  const auto tr = descend(w, w, FlowConfig{}, sum_values());
  EXPECT_EQ(tr.iterations, 0);
  EXPECT_TRUE(tr.converged);
  ASSERT_TRUE(tr.converged_to.has_value());
  EXPECT_EQ(*tr.converged_to, 0.0);
}

TEST(Descend, SumFromIdentity) {
  const auto tr = descend(sum::gate(), Mat::Identity(4, 4), FlowConfig{}, sum_values());
  EXPECT_TRUE(tr.converged);
  EXPECT_LE(tr.final_value, 1e-6);
  ASSERT_TRUE(tr.converged_to.has_value());
  EXPECT_NEAR(*tr.converged_to, 0.0, 1e-12);
  EXPECT_TRUE(tr.monotone);
  EXPECT_LE(tr.max_sympl_residual, 1e-8);
  ASSERT_EQ(tr.iterates.size(), static_cast<std::size_t>(tr.iterations + 1));
  for (std::size_t k = 1; k < tr.iterates.size(); ++k) {
    EXPECT_LE(tr.iterates[k].value, tr.iterates[k - 1].value);
  }
}

TEST(Descend, ExactSaddleIsStationary) {
  const auto tr = descend(sum::gate(), sum_saddle(), FlowConfig{}, sum_values());
  EXPECT_EQ(tr.iterations, 0);
  EXPECT_NEAR(tr.final_value, 18.623, 1e-3);
  ASSERT_TRUE(tr.converged_to.has_value());
  EXPECT_NEAR(*tr.converged_to, 18.623, 1e-3);
}

TEST(Descend, EscapesPerturbedSaddle) {
  const Mat s0 = sum_saddle() * exp_algebra(AlgebraElement(1e-3 * Mat::Ones(4, 4))).matrix();
  const auto tr = descend(sum::gate(), s0, FlowConfig{}, sum_values());
  EXPECT_LE(tr.final_value, 1e-6);
  EXPECT_TRUE(tr.monotone);
}

TEST(Descend, TruncatedRunIsNotConverged) {
  FlowConfig cfg;
  cfg.max_iters = 3;
  const auto tr = descend(sum::gate(), random_symplectic(2, 4, 1.0).matrix(), cfg, sum_values());
  EXPECT_EQ(tr.iterations, 3);
  EXPECT_FALSE(tr.converged);
  EXPECT_FALSE(tr.converged_to.has_value());
}

TEST(Descend, AllTrialRulesReachTheMinimum) {
  for (TrialStep rule : {TrialStep::Fixed, TrialStep::Expand, TrialStep::BarzilaiBorwein}) {
    FlowConfig cfg;
    cfg.trial = rule;
    const auto tr = descend(sum::gate(), Mat::Identity(4, 4), cfg);
    EXPECT_LE(tr.final_value, 1e-6);
    EXPECT_TRUE(tr.monotone);
  }
}

TEST(Descend, ShapeMismatch) {
  EXPECT_THROW(descend(sum::gate(), Mat::Identity(2, 2), FlowConfig{}), DimensionError);
}

TEST(Multistart, SumAllReachMinimum) {
  FlowConfig cfg;
  cfg.seed = 7;
  const auto sum = multistart(sum::gate(), cfg, sum_values());
  EXPECT_EQ(sum.starts, 20);
  EXPECT_EQ(sum.converged, 20);
  EXPECT_EQ(sum.reached_minimum, 20);
  EXPECT_TRUE(sum.all_monotone);
  EXPECT_LE(sum.max_sympl_residual, 1e-8);
  ASSERT_EQ(sum.histogram.size(), 1u);
  EXPECT_EQ(sum.histogram[0].value, 0.0);
  EXPECT_EQ(sum.histogram[0].count, 20);
}

TEST(Multistart, IdentityTarget) {
  const Mat w = Mat::Identity(4, 4);
  const auto sum = multistart(w, FlowConfig{});
  EXPECT_EQ(sum.converged, 20);
  for (const auto& r : sum.runs) EXPECT_LT((r.terminal - w).norm(), 1e-4);
}

TEST(Multistart, RandomThreeModeTarget) {
  const Mat w = random_symplectic(3, 19, 0.8).matrix();
  const auto sum = multistart(w, FlowConfig{}, {0.0});
  EXPECT_EQ(sum.reached_minimum, 20);
  for (const auto& r : sum.runs) EXPECT_LE(r.final_value, 1e-4);
}

TEST(Multistart, DeterministicInSeed) {
  FlowConfig cfg;
  cfg.starts = 4;
  cfg.seed = 3;
  const auto a = multistart(sum::gate(), cfg);
  const auto b = multistart(sum::gate(), cfg);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(a.runs[k].iterations, b.runs[k].iterations);
    EXPECT_EQ(a.runs[k].terminal, b.runs[k].terminal);
  }
}

TEST(FindStationary, LandsOnEnumeratedValues) {
  const auto values = sum_values();
  int converged = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = find_stationary(sum::gate(), random_symplectic(2, 600 + seed, 1.0).matrix());
    if (!r.converged) continue;
    ++converged;
    EXPECT_TRUE(match_value(r.value, values).has_value()) << r.value;
  }
  EXPECT_GT(converged, 10);
}
