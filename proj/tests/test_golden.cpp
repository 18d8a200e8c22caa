#include "toolbench/runner.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace toolbench;

// Pinned hashes of every library scenario. A change here means the simulated
// physics changed; regenerate deliberately with `toolbench run <name>`.
class GoldenTrace : public ::testing::TestWithParam<std::string> {};

TEST_P(GoldenTrace, HashMatchesPinnedValue) {
  std::ifstream in(TOOLBENCH_GOLDEN_DIR "/trace_hashes.json");
  ASSERT_TRUE(in) << "missing golden file";
  const auto golden = nlohmann::json::parse(in);
  const std::string name = GetParam();
  ASSERT_TRUE(golden.contains(name)) << name;
  EXPECT_EQ(run_scenario(standard_scenario(name)).hash, golden[name].get<std::string>());
}

INSTANTIATE_TEST_SUITE_P(Library, GoldenTrace, ::testing::ValuesIn(scenario_names()),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (char& c : s)
                             if (c == '-') c = '_';
                           return s;
                         });
