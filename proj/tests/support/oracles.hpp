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

#ifndef RESTORATION_TESTS_ORACLES_HPP
#define RESTORATION_TESTS_ORACLES_HPP

// Brute-force reference implementations. They share the network model
// (protection and latching) with the library but none of its search or
// bookkeeping.

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "restoration/belief.hpp"
#include "restoration/planner.hpp"
#include "restoration/topology.hpp"
#include "restoration/world.hpp"

namespace restoration::testing {

/// (open set, close set), both ascending.
using PlanKey = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;

PlanKey key_of(const Plan& p);

/// Every assignment of the operable devices bordering unfed lines, kept when
/// the resulting state is radial, feeds no faulty line, adds no capacity
/// violation, keeps every live line on its breaker, and only changes devices
/// the extension can reach.
std::set<PlanKey> brute_force_plans(const NetworkTopology& t, const Candidate& state,
                                    const PositionAssignment& pre_incident);

/// Lines fed per breaker by plain reachability over closed devices; nullopt
/// on a multi-fed line or a cycle.
std::optional<std::vector<std::size_t>> reachability_feeders(const NetworkTopology& t,
                                                             const PositionAssignment& positions);

/// Loads summed by enumerating, for each breaker, every line it reaches.
std::vector<double> brute_force_breaker_loads(const NetworkTopology& t, const PositionAssignment& positions);

struct PosteriorEntry {
    Candidate candidate;
    double probability = 0.0;
};

/// Posterior over candidates after `history`, computed by enumerating every
/// initial fault combination and every actuator outcome sequence, weighting
/// each path by the priors and discarding inconsistent ones. Empty when
/// nothing survives.
std::vector<PosteriorEntry> brute_force_posterior(const NetworkTopology& t, const PositionAssignment& pre_incident,
                                                  const Observation& initial,
                                                  const std::vector<std::pair<SwitchOp, Observation>>& history,
                                                  int k, const Priors& priors);

// Largest probability gap between a belief and an oracle posterior; infinity
// when the supports differ.
double posterior_distance(const Belief& belief, const std::vector<PosteriorEntry>& oracle);

}  // namespace restoration::testing

#endif  // RESTORATION_TESTS_ORACLES_HPP
