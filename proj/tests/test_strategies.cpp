#include <gtest/gtest.h>

#include "easm/error.hpp"
#include "easm/strategies.hpp"
#include "support.hpp"

using namespace easm;
using namespace easm::test;

namespace {

StrategyConfig simplified() {
  StrategyConfig config;
  config.mode = LoadMode::simplified;
  return config;
}

SwitchPicker force(const NetworkState& state, std::string id) {
  const auto index = state.switch_index(id);
  return [index](std::span<const std::size_t>, Rng&) { return index; };
}

}  // namespace

TEST(Strategies, Names) {
  for (const auto kind : kAllStrategies) EXPECT_EQ(parse_strategy(to_string(kind)), kind);
  EXPECT_EQ(parse_strategy("easm"), StrategyKind::easm);
  EXPECT_EQ(parse_strategy("Musm"), StrategyKind::musm);
  EXPECT_FALSE(parse_strategy("random").has_value());
}

TEST(Strategies, NsmNeverMoves) {
  const auto state = example3_state();
  const auto r = step_nsm(state);
  EXPECT_EQ(r.state, state);
  EXPECT_TRUE(r.report.executed.empty());
  EXPECT_EQ(r.report.cost(), 0.0);
}

TEST(Strategies, CsmForcedToS7) {
  const auto state = example3_state();
  const auto r = step_csm(state, simplified(), 0, force(state, "s7"));
  ASSERT_EQ(r.report.executed.size(), 1u);
  EXPECT_EQ(r.report.executed[0].triplet.immigration, 2u);  // c3: 4 hops, c1: 5
  EXPECT_EQ(controller_loads(r.state, {}, LoadMode::simplified), (std::vector<double>{90, 100, 120}));
  EXPECT_EQ(r.report.simplified_cost(), 200.0);
  EXPECT_DOUBLE_EQ(r.report.cost(), 0.03 + 50 * 3);
}

TEST(Strategies, CsmRejectsForeignPick) {
  const auto state = example3_state();
  EXPECT_THROW(step_csm(state, simplified(), 0, force(state, "s1")), PlannerError);
}

TEST(Strategies, CsmDefaultPickIsSeeded) {
  const auto state = example3_state();
  const auto a = step_csm(state, simplified(), 5);
  const auto b = step_csm(state, simplified(), 5);
  EXPECT_EQ(a.state, b.state);
  ASSERT_EQ(a.report.executed.size(), 1u);
  EXPECT_EQ(a.report.executed[0].triplet.emigration, 1u);
}

TEST(Strategies, MusmMovesLargestSwitchToMostResidual) {
  const auto state = example3_state();
  const auto r = step_musm(state, simplified());
  ASSERT_EQ(r.report.executed.size(), 1u);
  const auto& t = r.report.executed[0].triplet;
  EXPECT_EQ(state.switch_id(t.sw), "s7");
  EXPECT_EQ(t.immigration, 2u);  // 5000 − 70 is the largest residual
}

TEST(Strategies, EasmStepMatchesGolden) {
  const auto r = step_easm(example3_state(), simplified(), 1);
  EXPECT_EQ(controller_loads(r.state, {}, LoadMode::simplified), (std::vector<double>{90, 110, 110}));
  EXPECT_EQ(r.report.simplified_cost(), 120.0);
  EXPECT_TRUE(r.report.balanced);
}

TEST(Strategies, BalancedInputIsLeftAlone) {
  const auto state = example3_state().with_flow_rates({30, 30, 40, 25, 25, 25, 25, 60, 40});
  for (const auto kind : kAllStrategies) {
    const auto r = step(kind, state, simplified(), 3);
    EXPECT_EQ(r.state, state) << to_string(kind);
    EXPECT_TRUE(r.report.balanced);
  }
}

TEST(Strategies, MusmSkipsTargetWithoutRoom) {
  const auto state = example3_state({5000, 5000, 100});
  const auto r = step_musm(state, simplified());
  ASSERT_EQ(r.report.executed.size(), 1u);
  EXPECT_EQ(r.report.executed[0].triplet.immigration, 0u);  // c3 has 30 left, c1 has 4910
}
