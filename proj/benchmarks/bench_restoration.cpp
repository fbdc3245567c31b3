// Copyright 2026 The Restoration Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <string>

#include "restoration/belief.hpp"
#include "restoration/engine.hpp"
#include "restoration/io.hpp"
#include "restoration/planner.hpp"

namespace {

using namespace restoration;

std::string data(const char* name) { return std::string(RESTORATION_DATA_DIR) + "/" + name; }

struct Fixture {
    NetworkTopology topology = parse_network(read_file(data("example_network.json")));
    Scenario scenario = parse_scenario(read_file(data("session_scenario.json")));
    SessionConfig config = parse_config(read_file(data("default_config.json")));
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

void BM_Feeders(benchmark::State& state) {
    const auto& t = fixture().topology;
    for (auto _ : state) benchmark::DoNotOptimize(power_report(t, t.normal_positions()));
}
BENCHMARK(BM_Feeders);

void BM_InitialDistribution(benchmark::State& state) {
    const auto& f = fixture();
    const auto incident = make_incident(f.topology, f.topology.normal_positions(),
                                        observe(f.topology, init_world(f.topology, f.scenario)));
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(initial_distribution(f.topology, incident, level, f.config.priors));
}
BENCHMARK(BM_InitialDistribution)->Arg(1)->Arg(2)->Arg(3);

void BM_RankPlans(benchmark::State& state) {
    const auto& t = fixture().topology;
    const auto c = parse_candidate(t, read_file(data("candidate_fault_16_18.json")));
    const auto cut = cutoff_feeders(t, t.normal_positions(), c.positions);
    for (auto _ : state) benchmark::DoNotOptimize(rank_plans(t, c, cut, UtilityWeights{}));
}
BENCHMARK(BM_RankPlans);

void BM_Session(benchmark::State& state) {
    const auto& f = fixture();
    SessionConfig cfg = f.config;
    cfg.world.seed = f.scenario.seed;
    for (auto _ : state) benchmark::DoNotOptimize(restore(f.topology, init_world(f.topology, f.scenario), cfg));
}
BENCHMARK(BM_Session)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
