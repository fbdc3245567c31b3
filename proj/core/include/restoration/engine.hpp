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

#ifndef RESTORATION_ENGINE_HPP
#define RESTORATION_ENGINE_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "restoration/belief.hpp"
#include "restoration/planner.hpp"
#include "restoration/topology.hpp"
#include "restoration/world.hpp"

namespace restoration {

struct SessionConfig {
    Priors priors;
    StochasticConfig world;
    UtilityWeights utility;
    int k_max = 3;
    int replan_max = 32;
};

// Trace events carry element ids rather than indices so that a trace can be
// read back without the topology.

struct ObservationRecord {
    std::map<std::string, Position> breakers;
    std::map<std::string, FdReading> fault_detectors;

    bool operator==(const ObservationRecord&) const = default;
};

struct OpRecord {
    std::string device;
    Position direction = Position::Open;

    bool operator==(const OpRecord&) const = default;
};

namespace event {

struct InitialObservation {
    ObservationRecord observation;
    bool operator==(const InitialObservation&) const = default;
};

struct HypothesisAdopted {
    int level = 1;
    std::vector<std::string> fault_areas;
    std::map<std::string, BehaviorMode> fd_modes;  // abnormal detectors only
    std::map<std::string, BehaviorMode> ac_modes;  // abnormal actuators only
    double probability = 0.0;
    bool operator==(const HypothesisAdopted&) const = default;
};

struct PlanAdopted {
    std::vector<OpRecord> ops;
    double score = 0.0;
    bool operator==(const PlanAdopted&) const = default;
};

struct OpExecuted {
    OpRecord op;
    Notification notification = Notification::None;
    PdReading pd_reading = PdReading::NoInfo;
    ObservationRecord observation;
    bool operator==(const OpExecuted&) const = default;
};

struct Replan {
    std::string reason;
    bool operator==(const Replan&) const = default;
};

struct Escalation {
    int level = 2;
    bool operator==(const Escalation&) const = default;
};

struct Aborted {
    std::string reason;
    bool operator==(const Aborted&) const = default;
};

struct Finished {
    std::map<std::string, std::string> fed;  // line id -> feeding breaker id
    std::vector<std::string> unfed;
    bool operator==(const Finished&) const = default;
};

}  // namespace event

using TraceEvent = std::variant<event::InitialObservation, event::HypothesisAdopted, event::PlanAdopted,
                                event::OpExecuted, event::Replan, event::Escalation, event::Aborted,
                                event::Finished>;
using Trace = std::vector<TraceEvent>;

struct HistoryEntry {
    SwitchOp op;
    Observation observation;
};
using History = std::vector<HistoryEntry>;

enum class Outcome : std::uint8_t { Finished, Aborted };

struct SessionResult {
    Trace trace;
    WorldState world;
    Outcome outcome = Outcome::Finished;
    History history;
};

/// Called with every belief the session holds: the initial one and each
/// posterior after an operation or escalation.
using BeliefObserver = std::function<void(const Belief&)>;

Candidate expected_successor(const NetworkTopology& topology, const Candidate& candidate, const SwitchOp& op);

/// Rebuilds the belief at levels k+1.. up to k_max and replays the history.
/// Returns the belief and its level, or nullopt when every level is pruned.
std::optional<Belief> escalate(const NetworkTopology& topology, const Incident& incident, const History& history,
                               const SessionConfig& cfg, int k);

SessionResult restore(const NetworkTopology& topology, const PositionAssignment& pre_incident, WorldState world,
                      const SessionConfig& cfg, const BeliefObserver& on_belief = {});

/// Pre-incident configuration taken from the topology's normal positions.
SessionResult restore(const NetworkTopology& topology, WorldState world, const SessionConfig& cfg,
                      const BeliefObserver& on_belief = {});

ObservationRecord make_record(const NetworkTopology& topology, const Observation& observation);

}  // namespace restoration

#endif  // RESTORATION_ENGINE_HPP
