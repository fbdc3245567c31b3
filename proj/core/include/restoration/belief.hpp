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

#ifndef RESTORATION_BELIEF_HPP
#define RESTORATION_BELIEF_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "restoration/topology.hpp"
#include "restoration/world.hpp"

namespace restoration {

/// One complete state hypothesis. Position detectors are assumed correct in
/// every candidate, so they are not part of it.
struct Candidate {
    PositionAssignment positions;
    std::vector<std::size_t> fault_areas;  // ascending area index (= ascending area id)
    std::vector<bool> faulty_lines;        // lines short-circuited under this hypothesis
    std::vector<BehaviorMode> fd_mode;     // indexed by device
    std::vector<BehaviorMode> ac_mode;     // indexed by device
    std::vector<bool> fd_latched;          // indexed by device

    bool operator==(const Candidate&) const = default;
};

/// Canonical order: fewest faults, then ascending area tuple, then the mode
/// maps, positions and latches. Used for merging and tie-breaking.
bool candidate_less(const Candidate& a, const Candidate& b);

struct BeliefEntry {
    Candidate candidate;
    double log_probability = 0.0;
};

/// Normalized distribution over candidates, stored in log space and kept in
/// canonical candidate order.
struct Belief {
    int level = 1;
    std::vector<BeliefEntry> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
    double probability(std::size_t i) const;
    double total_probability() const;
};

struct Priors {
    double p_liar_given_positive = 0.10;
    double p_correct_given_positive = 0.90;
    double p_liar_given_negative = 0.05;
    double p_correct_given_negative = 0.95;
    double p_broken_given_noinfo = 1.0;
    double p_ac_to_liar = 0.05;
    double p_ac_to_broken = 0.05;
    /// Relative fault likelihood per area id; absent areas weigh 1.
    std::map<std::string, double> area_fault_weight;

    /// Throws std::invalid_argument when a conditional does not sum to 1 or a
    /// probability leaves [0, 1].
    void validate() const;
    double fd_mode_probability(BehaviorMode mode, FdReading reading) const;
    double area_weight(const std::string& area_id) const;
};

/// What the diagnostic reasoner knows about the incident itself.
struct Incident {
    PositionAssignment pre_incident;
    std::vector<std::size_t> cutoff_breakers;  // ascending
    std::vector<FdReading> readings;           // parallel to topology.fault_detectors()
};

Incident make_incident(const NetworkTopology& topology, const PositionAssignment& pre_incident,
                       const Observation& initial);

/// Per-feeder choice of faulty areas.
using FaultCombination = std::vector<std::vector<std::size_t>>;

/// Every combination with 1..k faulty areas on each feeder; for k > 1 at
/// least one feeder carries exactly k, so successive levels are disjoint.
std::vector<FaultCombination> enumerate_fault_combos(
    const std::vector<std::vector<std::size_t>>& areas_per_cutoff_feeder, int k);

/// Per-FD deduction: no information means broken, a contradiction means liar.
std::vector<BehaviorMode> deduce_fd_modes(const std::vector<bool>& expected_latched,
                                          const std::vector<FdReading>& actual);

/// Areas meeting each cut-off feeder's pre-incident line set, in incident order.
std::vector<std::vector<std::size_t>> cutoff_feeder_areas(const NetworkTopology& topology,
                                                          const Incident& incident);

Belief initial_distribution(const NetworkTopology& topology, const Incident& incident, int k,
                            const Priors& priors);

/// Deterministic network model step: the operated actuator ends in `ac_after`
/// and the device only moves when that mode is Correct.
Candidate simulate(const NetworkTopology& topology, const Candidate& candidate, const SwitchOp& op,
                   BehaviorMode ac_after);

Belief predict(const NetworkTopology& topology, const Belief& belief, const SwitchOp& op,
               const Priors& priors);

Observation expected_observation(const NetworkTopology& topology, const Candidate& candidate,
                                 const SwitchOp& op);

/// Actual readings of NoInfo (and a None notification) match anything.
bool observation_consistent(const Observation& expected, const Observation& actual);

/// Returns nullopt when every candidate is pruned.
std::optional<Belief> condition(const NetworkTopology& topology, const Belief& belief,
                                const Observation& observation, const SwitchOp& op);

const Candidate& most_probable(const Belief& belief);
std::size_t most_probable_index(const Belief& belief);

}  // namespace restoration

#endif  // RESTORATION_BELIEF_HPP
