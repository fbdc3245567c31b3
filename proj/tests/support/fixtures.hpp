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

#ifndef RESTORATION_TESTS_FIXTURES_HPP
#define RESTORATION_TESTS_FIXTURES_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "restoration/belief.hpp"
#include "restoration/engine.hpp"
#include "restoration/io.hpp"
#include "restoration/planner.hpp"
#include "restoration/topology.hpp"
#include "restoration/world.hpp"

namespace restoration::testing {

std::string data_path(const std::string& name);

const NetworkTopology& example_network();
Scenario session_scenario();
SessionConfig default_config();

std::size_t dev(const NetworkTopology& t, std::string_view id);
std::size_t line(const NetworkTopology& t, std::string_view id);
std::size_t area(const NetworkTopology& t, std::string_view id);

/// Area ids of a candidate's fault areas.
std::vector<std::string> fault_area_ids(const NetworkTopology& t, const Candidate& c);

/// Random radial network with at most `max_devices` devices, one to three
/// breakers and a few normally open ties.
NetworkTopology random_toy_network(std::mt19937_64& rng, std::size_t max_devices = 8);

/// One or two faulty lines and random detector and actuator modes.
Scenario random_scenario(const NetworkTopology& t, std::mt19937_64& rng, std::size_t max_faults = 2);

/// The hidden state as the belief would describe it once every operation in
/// `operated` has been performed.
Candidate project_truth(const NetworkTopology& t, const PositionAssignment& pre_incident,
                        const std::vector<std::size_t>& cutoff_breakers, const WorldState& world,
                        const std::vector<bool>& operated);

/// Largest number of faulty areas on any single feeder before the incident.
std::size_t max_faults_per_feeder(const NetworkTopology& t, const PositionAssignment& pre_incident,
                                  const WorldState& world);

}  // namespace restoration::testing

#endif  // RESTORATION_TESTS_FIXTURES_HPP
