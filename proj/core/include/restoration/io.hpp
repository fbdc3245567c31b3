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

#ifndef RESTORATION_IO_HPP
#define RESTORATION_IO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "restoration/belief.hpp"
#include "restoration/engine.hpp"
#include "restoration/planner.hpp"
#include "restoration/topology.hpp"
#include "restoration/world.hpp"

namespace restoration {

/// Malformed or unreadable input. Topology invariant violations are reported
/// separately as TopologyError.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

NetworkTopology parse_network(std::string_view text);
Scenario parse_scenario(std::string_view text);
/// Keys absent from the document keep their defaults.
SessionConfig parse_config(std::string_view text);
/// Positions default to the topology's normal ones; faulty lines are the
/// lines of the listed areas.
Candidate parse_candidate(const NetworkTopology& topology, std::string_view text);

std::string network_to_json(const NetworkTopology& topology);

// Traces: one JSON object per line.
std::string trace_to_jsonl(const Trace& trace);
Trace trace_from_jsonl(std::string_view text);
std::string render_text(const Trace& trace);

struct PlanListEntry {
    double score = 0.0;
    std::vector<std::string> open;
    std::vector<std::string> close;
    std::vector<OpRecord> sequence;

    bool operator==(const PlanListEntry&) const = default;
};

std::vector<PlanListEntry> plan_list(const NetworkTopology& topology, const std::vector<RankedPlan>& ranked);
std::string plans_to_json(const std::vector<PlanListEntry>& plans);
std::vector<PlanListEntry> plans_from_json(std::string_view text);

struct BeliefRecordEntry {
    double probability = 0.0;
    double log_probability = 0.0;
    std::vector<std::string> fault_areas;
    std::map<std::string, BehaviorMode> fd_modes;  // abnormal only
    std::map<std::string, BehaviorMode> ac_modes;  // abnormal only
    std::vector<std::string> open_devices;
    std::vector<std::string> latched;

    bool operator==(const BeliefRecordEntry&) const = default;
};

struct BeliefRecord {
    int level = 1;
    std::vector<BeliefRecordEntry> candidates;  // descending probability

    bool operator==(const BeliefRecord&) const = default;
};

BeliefRecord belief_record(const NetworkTopology& topology, const Belief& belief);
std::string belief_to_json(const BeliefRecord& record);
BeliefRecord belief_from_json(std::string_view text);

}  // namespace restoration

#endif  // RESTORATION_IO_HPP
