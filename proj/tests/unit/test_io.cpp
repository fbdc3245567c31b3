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

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace restoration;
using namespace restoration::testing;

namespace {

SessionResult session() {
    auto cfg = default_config();
    cfg.world.seed = 1;
    const auto& t = example_network();
    return restore(t, init_world(t, session_scenario()), cfg);
}

}  // namespace

TEST(Io, NetworkRoundTrip) {
    const auto& t = example_network();
    auto again = parse_network(network_to_json(t));
    EXPECT_EQ(network_to_json(again), network_to_json(t));
    EXPECT_EQ(again.lines().size(), t.lines().size());
    EXPECT_EQ(again.normal_positions(), t.normal_positions());
}

TEST(Io, TraceRoundTrip) {
    auto r = session();
    const std::string text = trace_to_jsonl(r.trace);
    EXPECT_EQ(trace_from_jsonl(text), r.trace);
    EXPECT_EQ(trace_to_jsonl(trace_from_jsonl(text)), text);
    // One object per line.
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), r.trace.size());
}

TEST(Io, TextRenderingHasOneLinePerEventKind) {
    const std::string text = render_text(session().trace);
    for (const char* prefix : {"OBS ", "HYP ", "PLAN ", "OP ", "REPLAN ", "ESC ", "END "})
        EXPECT_NE(text.find(prefix), std::string::npos) << prefix;
}

TEST(Io, PlanListRoundTrip) {
    const auto& t = example_network();
    auto c = parse_candidate(t, read_file(data_path("candidate_fault_16_18.json")));
    auto ranked = rank_plans(t, c, cutoff_feeders(t, t.normal_positions(), c.positions), UtilityWeights{});
    auto list = plan_list(t, ranked);
    ASSERT_EQ(list.size(), ranked.size());
    EXPECT_EQ(plans_from_json(plans_to_json(list)), list);
}

TEST(Io, BeliefRoundTrip) {
    const auto& t = example_network();
    auto inc = make_incident(t, t.normal_positions(), observe(t, init_world(t, session_scenario())));
    auto rec = belief_record(t, initial_distribution(t, inc, 2, default_config().priors));
    EXPECT_EQ(belief_from_json(belief_to_json(rec)), rec);
    for (std::size_t i = 1; i < rec.candidates.size(); ++i)
        EXPECT_GE(rec.candidates[i - 1].probability, rec.candidates[i].probability);
}

TEST(Io, ScenarioAndConfigFields) {
    auto s = session_scenario();
    EXPECT_EQ(s.seed, 1u);
    EXPECT_EQ(s.fd_modes.at("RSD16"), BehaviorMode::Liar);
    auto cfg = parse_config(R"({"session": {"k_max": 2, "replan_max": 4}, "world": {"p_ac_to_liar": 0.1}})");
    EXPECT_EQ(cfg.k_max, 2);
    EXPECT_EQ(cfg.replan_max, 4);
    EXPECT_DOUBLE_EQ(cfg.world.p_ac_to_liar, 0.1);
    EXPECT_DOUBLE_EQ(cfg.world.p_ac_to_broken, 0.0);
}

TEST(Io, RejectsMalformedInput) {
    EXPECT_THROW(parse_network(""), InputError);
    EXPECT_THROW(parse_network("{"), InputError);
    EXPECT_THROW(parse_scenario(R"({"faulty_lines": [], "surprise": 1})"), InputError);
    EXPECT_THROW(parse_scenario(R"({"fd_modes": {"RSD16": "sleepy"}})"), InputError);
    EXPECT_THROW(parse_config(R"({"session": {"k_max": "three"}})"), InputError);
    EXPECT_THROW(parse_config(R"({"priors": {"p_liar_given_positive": 1.5}})"), InputError);
    EXPECT_THROW(parse_candidate(example_network(), R"({"fault_areas": ["nowhere"]})"), InputError);
    EXPECT_THROW(trace_from_jsonl("{\"type\": \"mystery\"}\n"), InputError);
    EXPECT_THROW(read_file("/nonexistent/file.json"), InputError);
}
