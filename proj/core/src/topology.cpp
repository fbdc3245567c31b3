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

#include "restoration/topology.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace restoration {

namespace {

constexpr double kCapacityTolerance = 1e-9;

template <typename T>
std::optional<std::size_t> find_by_id(const std::vector<T>& items, std::string_view id) {
    auto it = std::lower_bound(items.begin(), items.end(), id,
                               [](const T& item, std::string_view key) { return item.id < key; });
    if (it == items.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - items.begin());
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::string_view to_string(Position p) { return p == Position::Open ? "open" : "closed"; }

std::string_view to_string(DeviceKind k) {
    switch (k) {
        case DeviceKind::CircuitBreaker: return "cb";
        case DeviceKind::RemoteSwitch: return "rsd";
        case DeviceKind::ManualSwitch: return "msd";
    }
    return "?";
}

NetworkTopology NetworkTopology::build(std::vector<Line> lines,
                                       const std::vector<DeviceSpec>& devices,
                                       const std::map<std::string, Position>& normal_positions) {
    NetworkTopology t;

    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const Line& l = lines[i];
        if (l.id.empty()) throw TopologyError("line with empty id");
        if (i > 0 && lines[i - 1].id == l.id) throw TopologyError("duplicate line id '" + l.id + "'");
        if (!(l.load_kw >= 0.0)) throw TopologyError("line '" + l.id + "' has a negative load");
        if (!(l.capacity_kw >= 0.0)) throw TopologyError("line '" + l.id + "' has a negative capacity");
        if (!(l.consumer_weight >= 0.0))
            throw TopologyError("line '" + l.id + "' has a negative consumer weight");
    }
    t.lines_ = std::move(lines);

    std::vector<const DeviceSpec*> sorted;
    sorted.reserve(devices.size());
    for (const auto& d : devices) sorted.push_back(&d);
    std::sort(sorted.begin(), sorted.end(),
              [](const DeviceSpec* a, const DeviceSpec* b) { return a->id < b->id; });

    auto resolve_line = [&](const std::string& device, const std::string& line) {
        auto idx = find_by_id(t.lines_, line);
        if (!idx) throw TopologyError("device '" + device + "' references unknown line '" + line + "'");
        return *idx;
    };

    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const DeviceSpec& s = *sorted[i];
        if (s.id.empty()) throw TopologyError("device with empty id");
        if (i > 0 && sorted[i - 1]->id == s.id) throw TopologyError("duplicate device id '" + s.id + "'");
        Device d;
        d.id = s.id;
        d.kind = s.kind;
        if (s.kind == DeviceKind::CircuitBreaker) {
            if (!s.capacity_kw) throw TopologyError("breaker '" + s.id + "' has no capacity_kw");
            if (!(*s.capacity_kw >= 0.0)) throw TopologyError("breaker '" + s.id + "' has a negative capacity");
            if (s.endpoints.first.empty())
                throw TopologyError("breaker '" + s.id + "' has no source terminal");
            if (find_by_id(t.lines_, s.endpoints.first))
                throw TopologyError("breaker '" + s.id + "' source terminal '" + s.endpoints.first +
                                    "' is a line id");
            d.source = s.endpoints.first;
            d.line_a = resolve_line(s.id, s.endpoints.second);
            d.capacity_kw = *s.capacity_kw;
        } else {
            if (s.capacity_kw) throw TopologyError("switch '" + s.id + "' must not declare capacity_kw");
            d.line_a = resolve_line(s.id, s.endpoints.first);
            d.line_b = resolve_line(s.id, s.endpoints.second);
            if (d.line_a == d.line_b)
                throw TopologyError("device '" + s.id + "' connects line '" + s.endpoints.first +
                                    "' to itself");
        }
        t.devices_.push_back(std::move(d));
    }

    t.normal_.assign(t.devices_.size(), Position::Open);
    std::vector<bool> seen(t.devices_.size(), false);
    for (const auto& [id, pos] : normal_positions) {
        auto idx = find_by_id(t.devices_, id);
        if (!idx) throw TopologyError("normal position given for unknown device '" + id + "'");
        t.normal_[*idx] = pos;
        seen[*idx] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw TopologyError("device '" + t.devices_[i].id + "' has no normal position");

    t.incident_.assign(t.lines_.size(), {});
    for (std::size_t i = 0; i < t.devices_.size(); ++i) {
        const Device& d = t.devices_[i];
        t.incident_[d.line_a].push_back(i);
        if (d.line_b != kNone) t.incident_[d.line_b].push_back(i);
        if (d.is_breaker()) t.breakers_.push_back(i);
        if (d.has_fault_detector()) t.fault_detectors_.push_back(i);
        if (d.is_remote()) t.remote_.push_back(i);
    }

    // Every line must be reachable from some breaker when everything is closed.
    {
        std::vector<bool> reached(t.lines_.size(), false);
        std::deque<std::size_t> queue;
        for (std::size_t b : t.breakers_) {
            std::size_t l = t.devices_[b].line_a;
            if (!reached[l]) {
                reached[l] = true;
                queue.push_back(l);
            }
        }
        while (!queue.empty()) {
            std::size_t l = queue.front();
            queue.pop_front();
            for (std::size_t d : t.incident_[l]) {
                std::size_t o = t.devices_[d].other_end(l);
                if (o != kNone && !reached[o]) {
                    reached[o] = true;
                    queue.push_back(o);
                }
            }
        }
        for (std::size_t l = 0; l < reached.size(); ++l)
            if (!reached[l])
                throw TopologyError("line '" + t.lines_[l].id + "' is not connected to any breaker");
    }

    // Areas: lines joined through manual devices only.
    {
        UnionFind uf(t.lines_.size());
        for (const Device& d : t.devices_)
            if (d.kind == DeviceKind::ManualSwitch) uf.unite(d.line_a, d.line_b);
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t l = 0; l < t.lines_.size(); ++l) groups[uf.find(l)].push_back(l);
        for (auto& [root, members] : groups) {
            Area a;
            a.lines = members;  // ascending because l iterates ascending
            a.id = t.lines_[members.front()].id;
            std::set<std::size_t> boundary;
            for (std::size_t l : members)
                for (std::size_t d : t.incident_[l])
                    if (t.devices_[d].is_remote()) boundary.insert(d);
            a.boundary.assign(boundary.begin(), boundary.end());
            t.areas_.push_back(std::move(a));
        }
        std::sort(t.areas_.begin(), t.areas_.end(),
                  [](const Area& a, const Area& b) { return a.id < b.id; });
        t.area_of_line_.assign(t.lines_.size(), kNone);
        for (std::size_t a = 0; a < t.areas_.size(); ++a)
            for (std::size_t l : t.areas_[a].lines) t.area_of_line_[l] = a;
    }

    auto normal = compute_feeders(t, t.normal_);
    if (auto* err = std::get_if<StructuralError>(&normal))
        throw TopologyError("normal configuration is not a forest of feeders: " + err->message);

    return t;
}

std::optional<std::size_t> NetworkTopology::find_line(std::string_view id) const {
    return find_by_id(lines_, id);
}

std::optional<std::size_t> NetworkTopology::find_device(std::string_view id) const {
    return find_by_id(devices_, id);
}

std::optional<std::size_t> NetworkTopology::find_area(std::string_view id) const {
    return find_by_id(areas_, id);
}

std::size_t NetworkTopology::line_index(std::string_view id) const {
    if (auto i = find_line(id)) return *i;
    throw TopologyError("unknown line '" + std::string(id) + "'");
}

std::size_t NetworkTopology::device_index(std::string_view id) const {
    if (auto i = find_device(id)) return *i;
    throw TopologyError("unknown device '" + std::string(id) + "'");
}

const Feeder* FeederForest::feeder_for(std::size_t breaker) const {
    for (const Feeder& f : feeders)
        if (f.breaker == breaker) return &f;
    return nullptr;
}

std::variant<FeederForest, StructuralError> compute_feeders(const NetworkTopology& topology,
                                                            const PositionAssignment& positions) {
    const auto& devices = topology.devices();
    const std::size_t n_lines = topology.lines().size();
    FeederForest forest;
    forest.feeder_of_line.assign(n_lines, kNone);
    forest.parent_device.assign(n_lines, kNone);
    forest.parent_line.assign(n_lines, kNone);
    forest.depth.assign(n_lines, 0);

    auto line_id = [&](std::size_t l) { return topology.line(l).id; };

    for (std::size_t b : topology.breakers()) {
        if (positions[b] != Position::Closed) continue;
        const std::size_t root = devices[b].line_a;
        if (forest.feeder_of_line[root] != kNone) {
            return StructuralError{StructuralErrorKind::MultiFeed, root, b,
                                   "line '" + line_id(root) + "' is fed by both '" +
                                       devices[forest.feeder_of_line[root]].id + "' and '" +
                                       devices[b].id + "'"};
        }
        Feeder feeder;
        feeder.breaker = b;
        forest.feeder_of_line[root] = b;
        forest.parent_device[root] = b;
        std::deque<std::size_t> queue{root};
        std::set<std::size_t> leaves;
        while (!queue.empty()) {
            std::size_t l = queue.front();
            queue.pop_front();
            feeder.lines.push_back(l);
            for (std::size_t d : topology.incident(l)) {
                if (d == forest.parent_device[l]) continue;
                if (positions[d] != Position::Closed) {
                    leaves.insert(d);
                    continue;
                }
                if (devices[d].is_breaker()) {
                    return StructuralError{StructuralErrorKind::MultiFeed, l, d,
                                           "line '" + line_id(l) + "' is fed by both '" + devices[b].id +
                                               "' and '" + devices[d].id + "'"};
                }
                std::size_t o = devices[d].other_end(l);
                if (forest.feeder_of_line[o] == b) {
                    return StructuralError{StructuralErrorKind::Cycle, o, d,
                                           "closed devices form a cycle through line '" + line_id(o) +
                                               "' (device '" + devices[d].id + "')"};
                }
                if (forest.feeder_of_line[o] != kNone) {
                    return StructuralError{StructuralErrorKind::MultiFeed, o, d,
                                           "line '" + line_id(o) + "' is fed by both '" +
                                               devices[forest.feeder_of_line[o]].id + "' and '" +
                                               devices[b].id + "'"};
                }
                forest.feeder_of_line[o] = b;
                forest.parent_device[o] = d;
                forest.parent_line[o] = l;
                forest.depth[o] = forest.depth[l] + 1;
                queue.push_back(o);
            }
        }
        feeder.leaves.assign(leaves.begin(), leaves.end());
        forest.feeders.push_back(std::move(feeder));
    }
    for (std::size_t l = 0; l < n_lines; ++l)
        if (forest.feeder_of_line[l] == kNone) forest.unfed_lines.push_back(l);
    return forest;
}

FeederForest feeders(const NetworkTopology& topology, const PositionAssignment& positions) {
    auto result = compute_feeders(topology, positions);
    if (auto* err = std::get_if<StructuralError>(&result)) throw StructuralFault(std::move(*err));
    return std::get<FeederForest>(std::move(result));
}

PowerReport power_report(const NetworkTopology& topology, const FeederForest& forest) {
    const std::size_t n_lines = topology.lines().size();
    const std::size_t n_devices = topology.devices().size();
    PowerReport report;
    report.line_throughput.assign(n_lines, 0.0);
    report.breaker_load.assign(n_devices, 0.0);
    report.breaker_margin.assign(n_devices, 0.0);

    for (const Feeder& f : forest.feeders) {
        for (std::size_t l : f.lines) report.line_throughput[l] = topology.line(l).load_kw;
        // Breadth-first order reversed visits children before parents.
        for (auto it = f.lines.rbegin(); it != f.lines.rend(); ++it) {
            std::size_t parent = forest.parent_line[*it];
            if (parent != kNone) report.line_throughput[parent] += report.line_throughput[*it];
        }
        report.breaker_load[f.breaker] = report.line_throughput[f.lines.front()];
    }
    for (std::size_t b : topology.breakers())
        report.breaker_margin[b] = topology.device(b).capacity_kw - report.breaker_load[b];

    for (std::size_t l = 0; l < n_lines; ++l) {
        const double cap = topology.line(l).capacity_kw;
        if (report.line_throughput[l] > cap + kCapacityTolerance)
            report.violations.push_back({ViolationKind::Line, l, report.line_throughput[l], cap});
    }
    for (const Feeder& f : forest.feeders) {
        const double cap = topology.device(f.breaker).capacity_kw;
        if (report.breaker_load[f.breaker] > cap + kCapacityTolerance)
            report.violations.push_back(
                {ViolationKind::Breaker, f.breaker, report.breaker_load[f.breaker], cap});
    }
    return report;
}

PowerReport power_report(const NetworkTopology& topology, const PositionAssignment& positions) {
    return power_report(topology, feeders(topology, positions));
}

std::vector<std::pair<std::size_t, std::size_t>> downstream_children(
    const NetworkTopology& topology, const PositionAssignment& positions, std::size_t device,
    std::size_t feeder) {
    const FeederForest forest = feeders(topology, positions);
    const Device& d = topology.device(device);

    std::size_t below = kNone;
    if (d.is_breaker()) {
        if (device != feeder)
            throw TopologyError("breaker '" + d.id + "' does not root feeder '" +
                                topology.device(feeder).id + "'");
        below = d.line_a;
    } else {
        const bool a_on = forest.feeder_of_line[d.line_a] == feeder;
        const bool b_on = forest.feeder_of_line[d.line_b] == feeder;
        if (a_on && b_on) {
            below = forest.parent_device[d.line_b] == device ? d.line_b : d.line_a;
        } else if (a_on) {
            below = d.line_b;
        } else if (b_on) {
            below = d.line_a;
        } else {
            throw TopologyError("device '" + d.id + "' is not adjacent to feeder '" +
                                topology.device(feeder).id + "'");
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> children;
    for (std::size_t c : topology.incident(below))
        if (c != device) children.emplace_back(c, feeder);
    return children;
}

Position position_of(const PositionAssignment& positions, std::size_t device) {
    return positions.at(device);
}

Position position_of(const NetworkTopology& topology, const PositionAssignment& positions,
                     std::string_view device_id) {
    return positions.at(topology.device_index(device_id));
}

}  // namespace restoration
