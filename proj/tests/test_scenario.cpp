#include <gtest/gtest.h>

#include "easm/error.hpp"
#include "easm/scenario.hpp"
#include "support.hpp"

using namespace easm;
using namespace easm::test;

namespace {

const char* kMinimal = R"({
  "topology": {"builtin": "os3e"},
  "controllers": [{"id": "c1", "node": "Seattle"}, {"id": "c2", "node": "Miami"}],
  "switches": {"all_nodes": true, "flow_rate": 100},
  "seed": 4
})";

}  // namespace

TEST(Scenario, Example3File) {
  const auto config = load_scenario(scenario_path("example3.json"));
  EXPECT_EQ(config.name, "example3");
  EXPECT_EQ(config.seed, 1u);
  EXPECT_EQ(config.step.mode, LoadMode::simplified);
  EXPECT_EQ(config.strategies.size(), 4u);
  const auto state = build_state(config);
  EXPECT_EQ(state, state);
  EXPECT_EQ(controller_loads(state, config.step.load, config.step.mode),
            (std::vector<double>{90, 150, 70}));
  const auto trace = build_trace(config, state);
  EXPECT_EQ(trace.rates.at(0), kExampleRates);
}

TEST(Scenario, MinimalUsesDefaults) {
  const auto config = parse_scenario(kMinimal, ".");
  EXPECT_TRUE(config.nearest_mastership);
  EXPECT_EQ(config.step.mode, LoadMode::full);
  EXPECT_EQ(config.strategies, (std::vector<StrategyKind>{StrategyKind::easm}));
  EXPECT_EQ(config.step.rebalance.max_rounds, 1);
  EXPECT_EQ(config.rebalance.max_rounds, 10);
  const auto state = build_state(config);
  EXPECT_EQ(state.switch_count(), 34u);
  EXPECT_EQ(state.controller_count(), 2u);
}

TEST(Scenario, EveryCheckedInScenarioLoads) {
  for (const auto* name : {"example3.json", "balanced.json", "stall-case.json", "os3e-default.json",
                           "random5.json"}) {
    const auto config = load_scenario(scenario_path(name));
    const auto state = build_state(config);
    EXPECT_NO_THROW(state.check_invariants()) << name;
    EXPECT_EQ(build_trace(config, state).steps(), config.steps) << name;
  }
}

TEST(Scenario, Rejections) {
  EXPECT_THROW(parse_scenario("{", "."), ParseError);
  EXPECT_THROW(parse_scenario(R"({"topology": {"builtin": "os3e"}})", "."), ParseError);  // no seed
  EXPECT_THROW(parse_scenario(R"({"seed": 1, "colour": "red"})", "."), ParseError);
  EXPECT_THROW(parse_scenario(R"({"seed": 1, "topology": {}})", "."), ParseError);
  EXPECT_THROW(parse_scenario(R"({"seed": 1, "topology": {"builtin": "os3e", "file": "x"}})", "."),
               ParseError);
  std::string bad_strategy = kMinimal;
  bad_strategy.insert(1, R"("strategies": ["EASM", "magic"],)");
  EXPECT_THROW(parse_scenario(bad_strategy, "."), ParseError);
  std::string bad_mode = kMinimal;
  bad_mode.insert(1, R"("load_mode": "quick",)");
  EXPECT_THROW(parse_scenario(bad_mode, "."), ParseError);
  std::string bad_sigma = kMinimal;
  bad_sigma.insert(1, R"("load_model": {"sigma": [1, 1, 1]},)");
  EXPECT_THROW(parse_scenario(bad_sigma, "."), ParameterError);
  std::string wrong_type = kMinimal;
  wrong_type.insert(1, R"("steps": "many",)");
  EXPECT_THROW(parse_scenario(wrong_type, "."), ParseError);
}

TEST(Scenario, MissingTopologyFileNamesThePath) {
  const auto config = parse_scenario(R"({
    "seed": 1,
    "topology": {"file": "nowhere/missing.graphml"},
    "controllers": [{"node": "a"}],
    "switches": [{"node": "b", "master": "a"}]
  })", "/tmp/base");
  try {
    build_state(config);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("/tmp/base/nowhere/missing.graphml"), std::string::npos);
  }
}

TEST(Scenario, RandomTopology) {
  const auto config = parse_scenario(
      R"({"seed": 9, "topology": {"random": {"switches": 12, "controllers": 3}}})", ".");
  const auto a = build_state(config);
  EXPECT_EQ(a.switch_count(), 12u);
  EXPECT_EQ(a.controller_count(), 3u);
  EXPECT_EQ(build_state(config).mastership(), a.mastership());
}
