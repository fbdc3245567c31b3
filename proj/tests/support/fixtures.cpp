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

#include "fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#ifndef RESTORATION_DATA_DIR
#error "RESTORATION_DATA_DIR must be defined"
#endif

namespace restoration::testing {

std::string data_path(const std::string& name) { return std::string(RESTORATION_DATA_DIR) + "/" + name; }

const NetworkTopology& example_network() {
    static const NetworkTopology t = parse_network(read_file(data_path("example_network.json")));
    return t;
}

Scenario session_scenario() { return parse_scenario(read_file(data_path("session_scenario.json"))); }

SessionConfig default_config() { return parse_config(read_file(data_path("default_config.json"))); }

std::size_t dev(const NetworkTopology& t, std::string_view id) { return t.device_index(id); }
std::size_t line(const NetworkTopology& t, std::string_view id) { return t.line_index(id); }

std::size_t area(const NetworkTopology& t, std::string_view id) {
    auto a = t.find_area(id);
    if (!a) throw std::invalid_argument("no area " + std::string(id));
    return *a;
}

std::vector<std::string> fault_area_ids(const NetworkTopology& t, const Candidate& c) {
    std::vector<std::string> ids;
    for (std::size_t a : c.fault_areas) ids.push_back(t.areas()[a].id);
    return ids;
}

NetworkTopology random_toy_network(std::mt19937_64& rng, std::size_t max_devices) {
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto name = [](char prefix, int i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%c%02d", prefix, i);
        return std::string(buf);
    };

    const int breakers = uniform(1, max_devices >= 6 ? 3 : 2);
    const int total = uniform(breakers + 1, static_cast<int>(max_devices));

    std::vector<Line> lines;
    std::vector<int> feeder_of;  // per line
    std::vector<DeviceSpec> specs;
    std::map<std::string, Position> normal;

    auto add_line = [&](int feeder) {
        Line l;
        l.id = name('L', static_cast<int>(lines.size()));
        l.load_kw = 10.0 * uniform(0, 40);
        l.capacity_kw = 100.0 * uniform(5, 20);
        l.consumer_weight = uniform(0, 3) == 0 ? 2.0 : 1.0;
        lines.push_back(l);
        feeder_of.push_back(feeder);
        return lines.back().id;
    };

    for (int b = 0; b < breakers; ++b) {
        DeviceSpec cb;
        cb.id = "CB" + std::to_string(b + 1);
        cb.kind = DeviceKind::CircuitBreaker;
        cb.endpoints = {"S" + std::to_string(b + 1), add_line(b)};
        cb.capacity_kw = 100.0 * uniform(3, 15);
        specs.push_back(cb);
        normal[cb.id] = Position::Closed;
    }

    std::set<std::pair<std::size_t, std::size_t>> joined;
    for (int i = 0; static_cast<int>(specs.size()) < total; ++i) {
        DeviceSpec d;
        d.id = name('D', i);
        const bool tie = lines.size() >= 2 && uniform(0, 3) == 0;
        if (tie) {
            std::size_t a = uniform(0, static_cast<int>(lines.size()) - 1);
            std::size_t b = uniform(0, static_cast<int>(lines.size()) - 1);
            if (a == b || joined.count({std::min(a, b), std::max(a, b)})) continue;
            joined.insert({std::min(a, b), std::max(a, b)});
            d.kind = DeviceKind::RemoteSwitch;
            d.endpoints = {lines[a].id, lines[b].id};
            normal[d.id] = Position::Open;
        } else {
            const std::size_t parent = uniform(0, static_cast<int>(lines.size()) - 1);
            const std::string child = add_line(feeder_of[parent]);
            joined.insert({parent, lines.size() - 1});
            d.kind = uniform(0, 3) == 0 ? DeviceKind::ManualSwitch : DeviceKind::RemoteSwitch;
            d.endpoints = {lines[parent].id, child};
            normal[d.id] = Position::Closed;
        }
        specs.push_back(d);
    }
    return NetworkTopology::build(std::move(lines), specs, normal);
}

Scenario random_scenario(const NetworkTopology& t, std::mt19937_64& rng, std::size_t max_faults) {
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Scenario s;
    s.seed = rng();
    const int faults = uniform(1, static_cast<int>(max_faults));
    std::set<std::string> chosen;
    for (int i = 0; i < faults; ++i)
        chosen.insert(t.line(uniform(0, static_cast<int>(t.lines().size()) - 1)).id);
    s.faulty_lines.assign(chosen.begin(), chosen.end());

    auto mode = [&](int liar_pct, int broken_pct) {
        const int r = uniform(0, 99);
        if (r < liar_pct) return BehaviorMode::Liar;
        if (r < liar_pct + broken_pct) return BehaviorMode::Broken;
        return BehaviorMode::Correct;
    };
    for (std::size_t d : t.fault_detectors())
        if (auto m = mode(10, 10); m != BehaviorMode::Correct) s.fd_modes[t.device(d).id] = m;
    for (std::size_t d : t.remote_devices()) {
        if (auto m = mode(5, 5); m != BehaviorMode::Correct) s.ac_modes[t.device(d).id] = m;
        if (uniform(0, 9) == 0) s.pd_modes[t.device(d).id] = BehaviorMode::Broken;
    }
    return s;
}

Candidate project_truth(const NetworkTopology& t, const PositionAssignment& pre_incident,
                        const std::vector<std::size_t>& cutoff_breakers, const WorldState& world,
                        const std::vector<bool>& operated) {
    const FeederForest pre = feeders(t, pre_incident);
    const std::size_t nd = t.devices().size();
    Candidate c;
    c.positions = world.positions;
    c.faulty_lines.assign(t.lines().size(), false);
    std::set<std::size_t> areas;
    for (std::size_t l = 0; l < world.faulty_lines.size(); ++l) {
        if (!world.faulty_lines[l]) continue;
        const std::size_t b = pre.feeder_of_line[l];
        if (std::find(cutoff_breakers.begin(), cutoff_breakers.end(), b) == cutoff_breakers.end()) continue;
        const std::size_t a = t.area_of_line(l);
        areas.insert(a);
        for (std::size_t al : t.areas()[a].lines)
            if (pre.feeder_of_line[al] == b) c.faulty_lines[al] = true;
    }
    c.fault_areas.assign(areas.begin(), areas.end());
    c.fd_mode.assign(nd, BehaviorMode::Correct);
    c.ac_mode.assign(nd, BehaviorMode::Correct);
    for (std::size_t d : t.fault_detectors()) c.fd_mode[d] = world.fd_mode[d];
    for (std::size_t d = 0; d < nd; ++d)
        if (operated[d]) c.ac_mode[d] = world.ac_mode[d];
    c.fd_latched = world.fd_latched;
    return c;
}

std::size_t max_faults_per_feeder(const NetworkTopology& t, const PositionAssignment& pre_incident,
                                  const WorldState& world) {
    const FeederForest pre = feeders(t, pre_incident);
    std::map<std::size_t, std::set<std::size_t>> per_feeder;
    for (std::size_t l = 0; l < world.faulty_lines.size(); ++l)
        if (world.faulty_lines[l] && pre.fed(l)) per_feeder[pre.feeder_of_line[l]].insert(t.area_of_line(l));
    std::size_t m = 0;
    for (const auto& [b, s] : per_feeder) m = std::max(m, s.size());
    return m;
}

}  // namespace restoration::testing
