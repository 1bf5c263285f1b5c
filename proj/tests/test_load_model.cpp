#include <gtest/gtest.h>

#include "easm/error.hpp"
#include "easm/load_model.hpp"
#include "support.hpp"

using namespace easm;
using namespace easm::test;

// c2 in the example: s4, s5, s6, s7 at 1, 1, 2, 1 hops; peers c1, c3 at 6 and 5 hops.
TEST(LoadModel, HandExpandedExample3C2) {
  const auto state = example3_state();
  const LoadModelParams p;
  const double hop_sum = 1 + 1 + 2 + 1;
  const double peers = 6 + 5;
  const double f_data = 15.0 * hop_sum;
  const double f_packet = 0.030 * hop_sum;
  const double f_table = (30 * 1 + 30 * 1 + 40 * 2 + 50 * 1) * peers;
  const double f_state = 0.018 * peers;
  const auto b = controller_load(state, p, 1);
  EXPECT_DOUBLE_EQ(b.f_data, f_data);
  EXPECT_DOUBLE_EQ(b.f_packet, f_packet);
  EXPECT_DOUBLE_EQ(b.f_table, f_table);
  EXPECT_DOUBLE_EQ(b.f_routing, f_packet + f_table);
  EXPECT_DOUBLE_EQ(b.f_state, f_state);
  EXPECT_NEAR(b.total, (f_data + f_packet + f_table + f_state) / 3.0, 1e-9);
}

// c1 in the example: s1, s2, s3 at 1 hop each; peers at 6 and 3 hops.
TEST(LoadModel, HandExpandedExample3C1WithWeights) {
  const auto state = example3_state();
  LoadModelParams p;
  p.sigma = {0.5, 0.3, 0.2};
  p.nu = 10.0;
  const double f_data = 10.0 * 3;
  const double f_routing = 0.030 * 3 + (30 + 30 + 30) * 9.0;
  const double f_state = 0.018 * 9;
  EXPECT_NEAR(load(state, p, LoadMode::full, 0), 0.5 * f_data + 0.3 * f_routing + 0.2 * f_state,
              1e-9);
}

TEST(LoadModel, SimplifiedIsDomainFlowSum) {
  const auto state = example3_state();
  EXPECT_EQ(controller_loads(state, {}, LoadMode::simplified), (std::vector<double>{90, 150, 70}));
}

TEST(LoadModel, SwitchShareDependsOnMode) {
  const auto state = example3_state();
  const auto s6 = state.switch_index("s6");
  EXPECT_EQ(switch_load_share(state, LoadMode::simplified, s6, 2), 40.0);
  EXPECT_EQ(switch_load_share(state, LoadMode::full, s6, 2), 120.0);
}

TEST(LoadModel, EmptyDomainHasOnlySyncLoad) {
  const auto state = example3_state().reassign(7, 0).reassign(8, 0);
  const auto b = controller_load(state, {}, 2);
  EXPECT_EQ(b.f_data, 0.0);
  EXPECT_EQ(b.f_table, 0.0);
  EXPECT_NEAR(b.f_state, 0.018 * (3 + 5), 1e-12);
}

TEST(LoadModel, ParameterValidation) {
  LoadModelParams p;
  EXPECT_NO_THROW(p.validate());
  p.sigma = {0.5, 0.5, 0.5};
  EXPECT_THROW(p.validate(), ParameterError);
  p.sigma = {1.2, -0.2, 0.0};
  EXPECT_THROW(p.validate(), ParameterError);
  p = {};
  p.nu = -1;
  EXPECT_THROW(p.validate(), ParameterError);
  EXPECT_THROW(controller_load(example3_state(), p, 0), ParameterError);
}

TEST(LoadModel, ModeNames) {
  EXPECT_EQ(parse_load_mode("full"), LoadMode::full);
  EXPECT_EQ(parse_load_mode("simplified"), LoadMode::simplified);
  EXPECT_FALSE(parse_load_mode("fast").has_value());
  EXPECT_EQ(to_string(LoadMode::simplified), "simplified");
}

// Flow-dependent terms scale linearly with the rates; ν and ζ terms do not.
TEST(LoadModel, FlowTableScalesWithRates) {
  const auto state = example3_state();
  std::vector<double> doubled(kExampleRates.begin(), kExampleRates.end());
  for (auto& r : doubled) r *= 2;
  const auto busy = state.with_flow_rates(doubled);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_DOUBLE_EQ(flow_table_overhead(busy, c), 2 * flow_table_overhead(state, c));
    EXPECT_DOUBLE_EQ(data_interaction_overhead(busy, {}, c), data_interaction_overhead(state, {}, c));
  }
}

namespace {

NetworkState chain_state(std::vector<ControllerRecord> controllers, std::vector<SwitchRecord> switches,
                         std::vector<std::size_t> master) {
  auto topo = std::make_shared<const Topology>(
      std::vector<std::string>{"a", "b", "c", "d", "e"},
      std::vector<std::pair<std::string, std::string>>{{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "e"}});
  return NetworkState::create(topo, std::move(controllers), std::move(switches), std::move(master));
}

}  // namespace

TEST(LoadModel, SmallComponentArithmetic) {
  const LoadModelParams p;
  // One switch two hops from its master.
  const auto far = chain_state({{"c1", "a"}}, {{"s", "c", 10}}, {0});
  EXPECT_DOUBLE_EQ(data_interaction_overhead(far, p, 0), 30.0);
  EXPECT_EQ(flow_table_overhead(far, 0), 0.0);
  EXPECT_EQ(state_sync_overhead(far, p, 0), 0.0);

  // Co-located switch costs no polling.
  const auto near = chain_state({{"c1", "a"}}, {{"s", "a", 10}}, {0});
  EXPECT_EQ(data_interaction_overhead(near, p, 0), 0.0);

  // Peer two hops away, switch one hop from its master.
  const auto pair = chain_state({{"c1", "a"}, {"c2", "c"}}, {{"s", "b", 40}}, {0});
  EXPECT_NEAR(packet_in_overhead(pair, p, 0), 0.03, 1e-12);
  EXPECT_DOUBLE_EQ(flow_table_overhead(pair, 0), 80.0);
  EXPECT_NEAR(routing_overhead(pair, p, 0), 80.03, 1e-9);

  // Peers at two and three hops.
  const auto trio = chain_state({{"c1", "a"}, {"c2", "c"}, {"c3", "d"}}, {{"s", "b", 40}}, {0});
  EXPECT_NEAR(state_sync_overhead(trio, p, 0), 0.09, 1e-12);
}

TEST(LoadModel, WeightProjection) {
  const auto state = example3_state();
  LoadModelParams p;
  p.sigma = {1.0, 0.0, 0.0};
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_DOUBLE_EQ(load(state, p, LoadMode::full, c), data_interaction_overhead(state, p, c));
  }
}
