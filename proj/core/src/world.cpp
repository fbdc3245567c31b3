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

#include "restoration/world.hpp"

#include <deque>
#include <stdexcept>

namespace restoration {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct BreakerTree {
    std::size_t breaker = kNone;
    std::vector<std::size_t> order;        // breadth-first lines
    std::vector<std::size_t> parent_device;
    std::vector<std::size_t> parent_line;
};

// Breadth-first tree from a closed breaker over closed devices. Lines already
// reached are not revisited, so meshed configurations still yield a tree.
BreakerTree breaker_tree(const NetworkTopology& topology, const PositionAssignment& positions,
                         std::size_t breaker) {
    const std::size_t n = topology.lines().size();
    BreakerTree tree;
    tree.breaker = breaker;
    tree.parent_device.assign(n, kNone);
    tree.parent_line.assign(n, kNone);
    std::vector<bool> seen(n, false);
    const std::size_t root = topology.device(breaker).line_a;
    seen[root] = true;
    tree.parent_device[root] = breaker;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
        std::size_t l = queue.front();
        queue.pop_front();
        tree.order.push_back(l);
        for (std::size_t d : topology.incident(l)) {
            if (positions[d] != Position::Closed) continue;
            std::size_t o = topology.device(d).other_end(l);
            if (o == kNone || seen[o]) continue;
            seen[o] = true;
            tree.parent_device[o] = d;
            tree.parent_line[o] = l;
            queue.push_back(o);
        }
    }
    return tree;
}

}  // namespace

std::string_view to_string(BehaviorMode m) {
    switch (m) {
        case BehaviorMode::Correct: return "correct";
        case BehaviorMode::Liar: return "liar";
        case BehaviorMode::Broken: return "broken";
    }
    return "?";
}

std::string_view to_string(Notification n) {
    switch (n) {
        case Notification::Positive: return "positive";
        case Notification::Negative: return "negative";
        case Notification::None: return "none";
    }
    return "?";
}

std::string_view to_string(PdReading r) {
    switch (r) {
        case PdReading::Open: return "open";
        case PdReading::Closed: return "closed";
        case PdReading::NoInfo: return "noinfo";
    }
    return "?";
}

std::string_view to_string(FdReading r) {
    switch (r) {
        case FdReading::FaultDownstream: return "fault";
        case FdReading::NoFault: return "nofault";
        case FdReading::NoInfo: return "noinfo";
    }
    return "?";
}

double SwitchRng::next(std::string_view device_id) {
    auto it = counters_.find(device_id);
    if (it == counters_.end()) it = counters_.emplace(std::string(device_id), 0).first;
    const std::uint64_t stream = splitmix64(seed_ ^ fnv1a(device_id));
    const std::uint64_t bits = splitmix64(stream + 0x9e3779b97f4a7c15ULL * (it->second + 1));
    ++it->second;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::uint64_t SwitchRng::draws(std::string_view device_id) const {
    auto it = counters_.find(device_id);
    return it == counters_.end() ? 0 : it->second;
}

std::vector<std::vector<std::size_t>> energized_lines(const NetworkTopology& topology,
                                                      const PositionAssignment& positions) {
    std::vector<std::vector<std::size_t>> feeders_of_line(topology.lines().size());
    for (std::size_t b : topology.breakers()) {
        if (positions[b] != Position::Closed) continue;
        for (std::size_t l : breaker_tree(topology, positions, b).order) feeders_of_line[l].push_back(b);
    }
    return feeders_of_line;
}

std::vector<bool> fed_lines(const NetworkTopology& topology, const PositionAssignment& positions) {
    auto e = energized_lines(topology, positions);
    std::vector<bool> fed(e.size());
    for (std::size_t l = 0; l < e.size(); ++l) fed[l] = !e[l].empty();
    return fed;
}

std::vector<std::size_t> apply_protection(const NetworkTopology& topology, PositionAssignment& positions,
                                          const std::vector<bool>& faulty_lines,
                                          std::vector<bool>& fd_latched) {
    std::vector<BreakerTree> tripping;
    for (std::size_t b : topology.breakers()) {
        if (positions[b] != Position::Closed) continue;
        BreakerTree tree = breaker_tree(topology, positions, b);
        bool feeds_fault = false;
        for (std::size_t l : tree.order) feeds_fault = feeds_fault || faulty_lines[l];
        if (feeds_fault) tripping.push_back(std::move(tree));
    }
    if (tripping.empty()) return {};

    // Every detector touching a tripping feeder is re-latched; it reads "fault
    // downstream" iff fault current crossed it on some tripping tree.
    std::vector<bool> touched(topology.devices().size(), false);
    std::vector<bool> value(topology.devices().size(), false);
    for (const BreakerTree& tree : tripping) {
        std::vector<bool> below(topology.lines().size(), false);
        for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
            const std::size_t l = *it;
            below[l] = below[l] || faulty_lines[l];
            if (tree.parent_line[l] != kNone && below[l]) below[tree.parent_line[l]] = true;
        }
        for (std::size_t l : tree.order) {
            for (std::size_t d : topology.incident(l)) {
                if (!topology.device(d).has_fault_detector()) continue;
                touched[d] = true;
                if (tree.parent_device[l] == d && below[l]) value[d] = true;
            }
        }
    }
    for (std::size_t d = 0; d < touched.size(); ++d)
        if (touched[d]) fd_latched[d] = value[d];

    std::vector<std::size_t> tripped;
    for (const BreakerTree& tree : tripping) {
        positions[tree.breaker] = Position::Open;
        tripped.push_back(tree.breaker);
    }
    return tripped;
}

FdReading filter_fd(BehaviorMode mode, bool latched) {
    switch (mode) {
        case BehaviorMode::Correct: return latched ? FdReading::FaultDownstream : FdReading::NoFault;
        case BehaviorMode::Liar: return latched ? FdReading::NoFault : FdReading::FaultDownstream;
        case BehaviorMode::Broken: return FdReading::NoInfo;
    }
    return FdReading::NoInfo;
}

WorldState init_world(const NetworkTopology& topology, const Scenario& scenario) {
    const std::size_t nd = topology.devices().size();
    WorldState w;
    w.positions = topology.normal_positions();
    for (const auto& [id, pos] : scenario.initial_positions) w.positions[topology.device_index(id)] = pos;
    w.faulty_lines.assign(topology.lines().size(), false);
    for (const auto& id : scenario.faulty_lines) w.faulty_lines[topology.line_index(id)] = true;
    w.fd_mode.assign(nd, BehaviorMode::Correct);
    w.pd_mode.assign(nd, BehaviorMode::Correct);
    w.ac_mode.assign(nd, BehaviorMode::Correct);
    w.fd_latched.assign(nd, false);

    for (const auto& [id, mode] : scenario.fd_modes) {
        std::size_t d = topology.device_index(id);
        if (!topology.device(d).has_fault_detector())
            throw TopologyError("device '" + id + "' has no fault detector");
        w.fd_mode[d] = mode;
    }
    for (const auto& [id, mode] : scenario.pd_modes) {
        std::size_t d = topology.device_index(id);
        if (!topology.device(d).is_remote()) throw TopologyError("device '" + id + "' has no position detector");
        if (mode == BehaviorMode::Liar)
            throw TopologyError("position detector of '" + id + "' cannot be a liar");
        w.pd_mode[d] = mode;
    }
    for (const auto& [id, mode] : scenario.ac_modes) {
        std::size_t d = topology.device_index(id);
        if (!topology.device(d).is_remote()) throw TopologyError("device '" + id + "' has no actuator");
        w.ac_mode[d] = mode;
    }

    auto pre = compute_feeders(topology, w.positions);
    if (auto* err = std::get_if<StructuralError>(&pre))
        throw TopologyError("initial positions are not radial: " + err->message);

    apply_protection(topology, w.positions, w.faulty_lines, w.fd_latched);
    return w;
}

Observation observe(const NetworkTopology& topology, const WorldState& world) {
    Observation obs;
    obs.breakers.reserve(topology.breakers().size());
    for (std::size_t b : topology.breakers()) obs.breakers.push_back(world.positions[b]);
    obs.fault_detectors.reserve(topology.fault_detectors().size());
    for (std::size_t d : topology.fault_detectors())
        obs.fault_detectors.push_back(filter_fd(world.fd_mode[d], world.fd_latched[d]));
    return obs;
}

std::pair<WorldState, Observation> execute_switch(const NetworkTopology& topology, const WorldState& world,
                                                  const SwitchOp& op, const StochasticConfig& cfg,
                                                  SwitchRng& rng) {
    if (op.device >= topology.devices().size()) throw std::invalid_argument("unknown device index");
    const Device& dev = topology.device(op.device);
    if (!dev.is_remote()) throw std::invalid_argument("device '" + dev.id + "' is manually operated");

    WorldState next = world;
    BehaviorMode& ac = next.ac_mode[op.device];
    if (ac == BehaviorMode::Correct) {
        const double u = rng.next(dev.id);
        if (u < cfg.p_ac_to_liar)
            ac = BehaviorMode::Liar;
        else if (u < cfg.p_ac_to_liar + cfg.p_ac_to_broken)
            ac = BehaviorMode::Broken;
    }
    if (ac == BehaviorMode::Correct) next.positions[op.device] = op.direction;
    apply_protection(topology, next.positions, next.faulty_lines, next.fd_latched);

    Observation obs = observe(topology, next);
    obs.notification = ac == BehaviorMode::Broken ? Notification::Negative : Notification::Positive;
    if (next.pd_mode[op.device] == BehaviorMode::Correct)
        obs.pd_reading = next.positions[op.device] == Position::Open ? PdReading::Open : PdReading::Closed;
    return {std::move(next), std::move(obs)};
}

}  // namespace restoration
