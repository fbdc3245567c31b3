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

#ifndef RESTORATION_PLANNER_HPP
#define RESTORATION_PLANNER_HPP

#include <vector>

#include "restoration/belief.hpp"
#include "restoration/topology.hpp"
#include "restoration/world.hpp"

namespace restoration {

/// Opening operations followed by closing operations on remote devices.
struct Plan {
    std::vector<std::size_t> open_set;   // ascending device index
    std::vector<std::size_t> close_set;  // ascending device index
    std::vector<SwitchOp> sequence;      // execution order: every open, then every close

    std::size_t operation_count() const { return open_set.size() + close_set.size(); }
    bool empty() const { return operation_count() == 0; }
    bool operator==(const Plan&) const = default;
};

struct ExtensionPoint {
    std::size_t device = kNone;
    std::size_t feeder = kNone;  // breaker index

    auto operator<=>(const ExtensionPoint&) const = default;
};

using ExtensionFrontier = std::vector<ExtensionPoint>;

/// A feeder whose breaker is open, together with the lines it fed before the
/// incident.
struct CutoffFeeder {
    std::size_t breaker = kNone;
    std::vector<std::size_t> lines;
};

struct UtilityWeights {
    double w_supply = 1000.0;  // per priority-weighted kW newly supplied
    double w_ops = 1.0;        // per switching operation
    double w_balance = 10.0;   // per unit of added variance of breaker load ratios
};

struct RankedPlan {
    Plan plan;
    double score = 0.0;
};

std::vector<CutoffFeeder> cutoff_feeders(const NetworkTopology& topology,
                                         const PositionAssignment& pre_incident,
                                         const PositionAssignment& positions);

ExtensionFrontier extension_points(const NetworkTopology& topology, const Candidate& state,
                                   const std::vector<CutoffFeeder>& cutoff);

/// Every admissible level-1 plan reachable from the frontier, given choices
/// already made.
std::vector<Plan> explore(const NetworkTopology& topology, const Candidate& state,
                          const std::vector<std::size_t>& open_choices,
                          const std::vector<std::size_t>& closed_choices, const ExtensionFrontier& frontier);

std::vector<Plan> explore(const NetworkTopology& topology, const Candidate& state,
                          const ExtensionFrontier& frontier);

PositionAssignment apply_plan(const PositionAssignment& positions, const Plan& plan);

/// Execution order for a plan: opens by ascending id; closes grouped by the
/// breaker that feeds them afterwards, groups by descending newly supplied
/// value, each group top-down.
std::vector<SwitchOp> execution_order(const NetworkTopology& topology, const Candidate& state,
                                      const std::vector<std::size_t>& open_set,
                                      const std::vector<std::size_t>& close_set);

double plan_utility(const NetworkTopology& topology, const Candidate& state, const Plan& plan,
                    const UtilityWeights& weights);

/// All generated plans, best first; ties go to fewer operations, then to the
/// lexicographically smaller device-id sequence.
std::vector<RankedPlan> rank_plans(const NetworkTopology& topology, const Candidate& state,
                                   const std::vector<CutoffFeeder>& cutoff, const UtilityWeights& weights);

Plan plan(const NetworkTopology& topology, const Candidate& state, const std::vector<CutoffFeeder>& cutoff,
          const UtilityWeights& weights);

}  // namespace restoration

#endif  // RESTORATION_PLANNER_HPP
