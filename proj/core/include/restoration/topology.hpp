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

#ifndef RESTORATION_TOPOLOGY_HPP
#define RESTORATION_TOPOLOGY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace restoration {

inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

enum class Position : std::uint8_t { Open, Closed };
enum class DeviceKind : std::uint8_t { CircuitBreaker, RemoteSwitch, ManualSwitch };

std::string_view to_string(Position p);
std::string_view to_string(DeviceKind k);

/// Raised when a network description violates the model's invariants. The
/// message always names the offending element.
class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Line {
    std::string id;
    double load_kw = 0.0;
    double capacity_kw = 0.0;
    double consumer_weight = 1.0;
};

/// A switching device as written in a network description, before ids are
/// resolved.
struct DeviceSpec {
    std::string id;
    DeviceKind kind = DeviceKind::RemoteSwitch;
    /// Breaker: {source terminal, line}. Switches: {line, line}.
    std::pair<std::string, std::string> endpoints;
    std::optional<double> capacity_kw;
};

struct Device {
    std::string id;
    DeviceKind kind = DeviceKind::RemoteSwitch;
    std::string source;           // breakers only
    std::size_t line_a = kNone;   // the breaker's line, or the first switch endpoint
    std::size_t line_b = kNone;   // kNone for breakers
    double capacity_kw = 0.0;     // breakers only

    bool is_breaker() const { return kind == DeviceKind::CircuitBreaker; }
    bool is_remote() const { return kind != DeviceKind::ManualSwitch; }
    bool has_fault_detector() const { return kind == DeviceKind::RemoteSwitch; }

    /// The endpoint opposite `line`, or kNone when `line` is not an endpoint
    /// (or the device is a breaker).
    std::size_t other_end(std::size_t line) const {
        if (line == line_a) return line_b;
        if (line == line_b) return line_a;
        return kNone;
    }
};

/// Each position is indexed by device index (devices are kept in ascending id
/// order), so an assignment is total by construction.
using PositionAssignment = std::vector<Position>;

struct Area {
    std::string id;                       // smallest line id in the area
    std::vector<std::size_t> lines;       // ascending
    std::vector<std::size_t> boundary;    // remote devices incident to the area
};

class NetworkTopology {
public:
    /// Validates every invariant and throws TopologyError on the first
    /// violation found.
    static NetworkTopology build(std::vector<Line> lines,
                                 const std::vector<DeviceSpec>& devices,
                                 const std::map<std::string, Position>& normal_positions);

    const std::vector<Line>& lines() const { return lines_; }
    const std::vector<Device>& devices() const { return devices_; }
    const Line& line(std::size_t i) const { return lines_.at(i); }
    const Device& device(std::size_t i) const { return devices_.at(i); }
    const PositionAssignment& normal_positions() const { return normal_; }

    std::optional<std::size_t> find_line(std::string_view id) const;
    std::optional<std::size_t> find_device(std::string_view id) const;
    std::size_t line_index(std::string_view id) const;    // throws TopologyError
    std::size_t device_index(std::string_view id) const;  // throws TopologyError

    /// Devices touching a line, ascending.
    const std::vector<std::size_t>& incident(std::size_t line) const { return incident_.at(line); }

    const std::vector<std::size_t>& breakers() const { return breakers_; }
    /// Remote switches, i.e. the devices carrying a fault detector.
    const std::vector<std::size_t>& fault_detectors() const { return fault_detectors_; }
    const std::vector<std::size_t>& remote_devices() const { return remote_; }

    const std::vector<Area>& areas() const { return areas_; }
    std::size_t area_of_line(std::size_t line) const { return area_of_line_.at(line); }
    std::optional<std::size_t> find_area(std::string_view id) const;

private:
    std::vector<Line> lines_;
    std::vector<Device> devices_;
    PositionAssignment normal_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<std::size_t> breakers_;
    std::vector<std::size_t> fault_detectors_;
    std::vector<std::size_t> remote_;
    std::vector<Area> areas_;
    std::vector<std::size_t> area_of_line_;
};

struct Feeder {
    std::size_t breaker = kNone;
    std::vector<std::size_t> lines;    // breadth-first from the breaker's line
    std::vector<std::size_t> leaves;   // open devices touching the feeder, ascending
};

/// Radial decomposition of a position assignment.
struct FeederForest {
    std::vector<Feeder> feeders;                  // one per closed breaker, ascending id
    std::vector<std::size_t> feeder_of_line;      // breaker index or kNone
    std::vector<std::size_t> parent_device;       // device feeding the line (breaker for roots)
    std::vector<std::size_t> parent_line;         // upstream line or kNone
    std::vector<std::size_t> depth;               // 0 at the breaker's line
    std::vector<std::size_t> unfed_lines;

    bool fed(std::size_t line) const { return feeder_of_line[line] != kNone; }
    const Feeder* feeder_for(std::size_t breaker) const;
};

enum class StructuralErrorKind : std::uint8_t { MultiFeed, Cycle };

struct StructuralError {
    StructuralErrorKind kind = StructuralErrorKind::MultiFeed;
    std::size_t line = kNone;
    std::size_t device = kNone;
    std::string message;
};

class StructuralFault : public std::runtime_error {
public:
    explicit StructuralFault(StructuralError e)
        : std::runtime_error(e.message), error_(std::move(e)) {}
    const StructuralError& error() const { return error_; }

private:
    StructuralError error_;
};

std::variant<FeederForest, StructuralError> compute_feeders(const NetworkTopology& topology,
                                                            const PositionAssignment& positions);

/// Same as compute_feeders but throws StructuralFault.
FeederForest feeders(const NetworkTopology& topology, const PositionAssignment& positions);

enum class ViolationKind : std::uint8_t { Line, Breaker };

struct Violation {
    ViolationKind kind = ViolationKind::Line;
    std::size_t element = kNone;
    double load_kw = 0.0;
    double capacity_kw = 0.0;

    auto operator<=>(const Violation&) const = default;
};

struct PowerReport {
    std::vector<double> line_throughput;   // kW, 0 for unfed lines
    std::vector<double> breaker_load;      // indexed by device; 0 for non-breakers/open breakers
    std::vector<double> breaker_margin;    // capacity - load, indexed by device
    std::vector<Violation> violations;
};

PowerReport power_report(const NetworkTopology& topology, const FeederForest& forest);
PowerReport power_report(const NetworkTopology& topology, const PositionAssignment& positions);

/// Devices immediately below the line that `device` feeds on `feeder`, each
/// paired with that feeder. For the feeder's own breaker this is the breaker's
/// line. Throws TopologyError when the device does not touch the feeder.
std::vector<std::pair<std::size_t, std::size_t>> downstream_children(
    const NetworkTopology& topology, const PositionAssignment& positions, std::size_t device,
    std::size_t feeder);

Position position_of(const PositionAssignment& positions, std::size_t device);
Position position_of(const NetworkTopology& topology, const PositionAssignment& positions,
                     std::string_view device_id);

}  // namespace restoration

#endif  // RESTORATION_TOPOLOGY_HPP
