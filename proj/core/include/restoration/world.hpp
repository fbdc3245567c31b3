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

#ifndef RESTORATION_WORLD_HPP
#define RESTORATION_WORLD_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "restoration/topology.hpp"

namespace restoration {

enum class BehaviorMode : std::uint8_t { Correct, Liar, Broken };
enum class Notification : std::uint8_t { Positive, Negative, None };
enum class PdReading : std::uint8_t { Open, Closed, NoInfo };
enum class FdReading : std::uint8_t { FaultDownstream, NoFault, NoInfo };

std::string_view to_string(BehaviorMode m);
std::string_view to_string(Notification n);
std::string_view to_string(PdReading r);
std::string_view to_string(FdReading r);

struct SwitchOp {
    std::size_t device = kNone;
    Position direction = Position::Open;

    auto operator<=>(const SwitchOp&) const = default;
};

/// What the operator sees after a switching operation (or at rest).
struct Observation {
    Notification notification = Notification::None;
    PdReading pd_reading = PdReading::NoInfo;
    std::vector<Position> breakers;         // parallel to topology.breakers()
    std::vector<FdReading> fault_detectors; // parallel to topology.fault_detectors()

    bool operator==(const Observation&) const = default;
};

/// Per-operation actuator degradation probabilities plus the seed of the
/// draw stream.
struct StochasticConfig {
    double p_ac_to_liar = 0.0;
    double p_ac_to_broken = 0.0;
    std::uint64_t seed = 0;
};

/// Seedable generator split by device id: the n-th draw for a device depends
/// only on (seed, device id, n), never on operations on other devices.
class SwitchRng {
public:
    explicit SwitchRng(std::uint64_t seed) : seed_(seed) {}

    /// Uniform in [0, 1).
    double next(std::string_view device_id);
    std::uint64_t draws(std::string_view device_id) const;

private:
    std::uint64_t seed_;
    std::map<std::string, std::uint64_t, std::less<>> counters_;
};

struct Scenario {
    std::vector<std::string> faulty_lines;
    std::map<std::string, BehaviorMode> fd_modes;
    std::map<std::string, BehaviorMode> pd_modes;
    std::map<std::string, BehaviorMode> ac_modes;
    std::uint64_t seed = 0;
    std::map<std::string, Position> initial_positions;
};

/// Hidden ground truth. All per-device vectors are indexed by device index;
/// FD entries are meaningful for remote switches only.
struct WorldState {
    PositionAssignment positions;
    std::vector<bool> faulty_lines;
    std::vector<BehaviorMode> fd_mode;
    std::vector<BehaviorMode> pd_mode;
    std::vector<BehaviorMode> ac_mode;
    std::vector<bool> fd_latched;

    bool operator==(const WorldState&) const = default;
};

/// Lines reachable from each closed breaker through closed devices, without
/// requiring the configuration to be radial.
std::vector<std::vector<std::size_t>> energized_lines(const NetworkTopology& topology,
                                                      const PositionAssignment& positions);

/// Lines reachable from at least one closed breaker.
std::vector<bool> fed_lines(const NetworkTopology& topology, const PositionAssignment& positions);

/// Instantaneous protection: every closed breaker that reaches a faulty line
/// latches the fault detectors along its tree and opens. Returns the breakers
/// that tripped.
std::vector<std::size_t> apply_protection(const NetworkTopology& topology, PositionAssignment& positions,
                                          const std::vector<bool>& faulty_lines,
                                          std::vector<bool>& fd_latched);

FdReading filter_fd(BehaviorMode mode, bool latched);

WorldState init_world(const NetworkTopology& topology, const Scenario& scenario);

std::pair<WorldState, Observation> execute_switch(const NetworkTopology& topology, const WorldState& world,
                                                  const SwitchOp& op, const StochasticConfig& cfg,
                                                  SwitchRng& rng);

Observation observe(const NetworkTopology& topology, const WorldState& world);

}  // namespace restoration

#endif  // RESTORATION_WORLD_HPP
