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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <deque>
#include <tuple>

namespace restoration::testing {

namespace {

// Parent pointers of a plain breadth-first walk from every closed breaker.
struct Walk {
    std::vector<std::size_t> feeder;       // breaker per line or kNone
    std::vector<std::size_t> parent_line;  // kNone at roots
};

Walk walk(const NetworkTopology& t, const PositionAssignment& positions) {
    const std::size_t n = t.lines().size();
    Walk w{std::vector<std::size_t>(n, kNone), std::vector<std::size_t>(n, kNone)};
    for (std::size_t b = 0; b < t.devices().size(); ++b) {
        if (!t.device(b).is_breaker() || positions[b] != Position::Closed) continue;
        std::deque<std::size_t> q{t.device(b).line_a};
        if (w.feeder[q.front()] != kNone) continue;
        w.feeder[q.front()] = b;
        while (!q.empty()) {
            const std::size_t l = q.front();
            q.pop_front();
            for (std::size_t d = 0; d < t.devices().size(); ++d) {
                const Device& dev = t.device(d);
                if (dev.is_breaker() || positions[d] != Position::Closed) continue;
                std::size_t o = kNone;
                if (dev.line_a == l) o = dev.line_b;
                if (dev.line_b == l) o = dev.line_a;
                if (o == kNone || w.feeder[o] != kNone) continue;
                w.feeder[o] = b;
                w.parent_line[o] = l;
                q.push_back(o);
            }
        }
    }
    return w;
}

using ViolationSet = std::set<std::pair<int, std::size_t>>;

ViolationSet violations(const NetworkTopology& t, const PositionAssignment& positions) {
    const Walk w = walk(t, positions);
    std::vector<double> through(t.lines().size(), 0.0);
    std::vector<double> breaker(t.devices().size(), 0.0);
    for (std::size_t l = 0; l < t.lines().size(); ++l) {
        if (w.feeder[l] == kNone) continue;
        breaker[w.feeder[l]] += t.line(l).load_kw;
        for (std::size_t m = l; m != kNone; m = w.parent_line[m]) through[m] += t.line(l).load_kw;
    }
    ViolationSet out;
    for (std::size_t l = 0; l < t.lines().size(); ++l)
        if (through[l] > t.line(l).capacity_kw + 1e-9) out.insert({0, l});
    for (std::size_t b = 0; b < t.devices().size(); ++b)
        if (t.device(b).is_breaker() && breaker[b] > t.device(b).capacity_kw + 1e-9) out.insert({1, b});
    return out;
}

bool incident_to(const Device& d, std::size_t l) { return d.line_a == l || d.line_b == l; }

struct CandidateOrder {
    bool operator()(const Candidate& a, const Candidate& b) const {
        return std::tie(a.positions, a.fault_areas, a.faulty_lines, a.fd_mode, a.ac_mode, a.fd_latched) <
               std::tie(b.positions, b.fault_areas, b.faulty_lines, b.fd_mode, b.ac_mode, b.fd_latched);
    }
};

double fd_weight(const Priors& p, BehaviorMode mode, FdReading reading) {
    if (reading == FdReading::NoInfo) return mode == BehaviorMode::Broken ? p.p_broken_given_noinfo : 0.0;
    const bool positive = reading == FdReading::FaultDownstream;
    if (mode == BehaviorMode::Liar) return positive ? p.p_liar_given_positive : p.p_liar_given_negative;
    if (mode == BehaviorMode::Correct) return positive ? p.p_correct_given_positive : p.p_correct_given_negative;
    return 0.0;
}

FdReading shown(BehaviorMode mode, bool latched) {
    if (mode == BehaviorMode::Broken) return FdReading::NoInfo;
    const bool fault = mode == BehaviorMode::Liar ? !latched : latched;
    return fault ? FdReading::FaultDownstream : FdReading::NoFault;
}

bool consistent(const NetworkTopology& t, const Candidate& c, const SwitchOp& op, const Observation& obs) {
    if (obs.notification != Notification::None) {
        const bool negative = c.ac_mode[op.device] == BehaviorMode::Broken;
        if ((obs.notification == Notification::Negative) != negative) return false;
    }
    if (obs.pd_reading != PdReading::NoInfo) {
        const bool open = c.positions[op.device] == Position::Open;
        if ((obs.pd_reading == PdReading::Open) != open) return false;
    }
    for (std::size_t i = 0; i < t.breakers().size(); ++i)
        if (obs.breakers[i] != c.positions[t.breakers()[i]]) return false;
    for (std::size_t i = 0; i < t.fault_detectors().size(); ++i) {
        const std::size_t d = t.fault_detectors()[i];
        if (obs.fault_detectors[i] == FdReading::NoInfo) continue;
        if (obs.fault_detectors[i] != shown(c.fd_mode[d], c.fd_latched[d])) return false;
    }
    return true;
}

}  // namespace

PlanKey key_of(const Plan& p) { return {p.open_set, p.close_set}; }

std::optional<std::vector<std::size_t>> reachability_feeders(const NetworkTopology& t,
                                                             const PositionAssignment& positions) {
    std::vector<std::size_t> owner(t.lines().size(), kNone);
    for (std::size_t b = 0; b < t.devices().size(); ++b) {
        if (!t.device(b).is_breaker() || positions[b] != Position::Closed) continue;
        // Reached set by fixpoint iteration.
        std::vector<bool> in(t.lines().size(), false);
        in[t.device(b).line_a] = true;
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t d = 0; d < t.devices().size(); ++d) {
                const Device& dev = t.device(d);
                if (dev.is_breaker() || positions[d] != Position::Closed) continue;
                if (in[dev.line_a] != in[dev.line_b]) {
                    in[dev.line_a] = in[dev.line_b] = true;
                    grew = true;
                }
            }
        }
        std::size_t lines = 0;
        std::size_t edges = 0;
        for (std::size_t l = 0; l < in.size(); ++l) {
            if (!in[l]) continue;
            if (owner[l] != kNone) return std::nullopt;  // fed twice
            owner[l] = b;
            ++lines;
        }
        for (std::size_t d = 0; d < t.devices().size(); ++d) {
            const Device& dev = t.device(d);
            if (!dev.is_breaker() && positions[d] == Position::Closed && in[dev.line_a] && in[dev.line_b]) ++edges;
        }
        if (edges + 1 != lines) return std::nullopt;  // not a tree
    }
    return owner;
}

std::vector<double> brute_force_breaker_loads(const NetworkTopology& t, const PositionAssignment& positions) {
    std::vector<double> loads(t.devices().size(), 0.0);
    const Walk w = walk(t, positions);
    for (std::size_t l = 0; l < t.lines().size(); ++l)
        if (w.feeder[l] != kNone) loads[w.feeder[l]] += t.line(l).load_kw;
    return loads;
}

std::set<PlanKey> brute_force_plans(const NetworkTopology& t, const Candidate& state,
                                    const PositionAssignment& pre_incident) {
    const std::size_t nd = t.devices().size();
    const auto before = reachability_feeders(t, state.positions);
    if (!before) return {};
    const auto pre = reachability_feeders(t, pre_incident);
    const ViolationSet baseline = violations(t, state.positions);

    std::vector<std::size_t> domain;
    for (std::size_t d = 0; d < nd; ++d) {
        const Device& dev = t.device(d);
        if (!dev.is_remote() || state.ac_mode[d] != BehaviorMode::Correct) continue;
        bool touches_unfed = false;
        for (std::size_t l = 0; l < t.lines().size(); ++l)
            if (incident_to(dev, l) && (*before)[l] == kNone) touches_unfed = true;
        if (touches_unfed || (dev.is_breaker() && state.positions[d] == Position::Open)) domain.push_back(d);
    }

    // Entry points of the extension.
    std::set<std::size_t> entry;
    for (std::size_t b = 0; b < nd; ++b) {
        if (!t.device(b).is_breaker() || state.positions[b] != Position::Open) continue;
        entry.insert(b);
        for (std::size_t l = 0; l < t.lines().size(); ++l) {
            if ((*pre)[l] != b || (*before)[l] != kNone) continue;
            for (std::size_t d = 0; d < nd; ++d) {
                const Device& dev = t.device(d);
                if (!incident_to(dev, l)) continue;
                if (dev.is_breaker() || (*before)[dev.other_end(l)] != kNone) entry.insert(d);
            }
        }
    }

    std::set<PlanKey> out;
    for (std::uint32_t mask = 0; mask < (1u << domain.size()); ++mask) {
        PositionAssignment after = state.positions;
        std::vector<std::size_t> flipped;
        for (std::size_t i = 0; i < domain.size(); ++i) {
            if (!(mask >> i & 1u)) continue;
            const std::size_t d = domain[i];
            after[d] = after[d] == Position::Open ? Position::Closed : Position::Open;
            flipped.push_back(d);
        }
        const auto fed = reachability_feeders(t, after);
        if (!fed) continue;

        bool ok = true;
        std::set<std::size_t> reachable = entry;
        for (std::size_t l = 0; l < t.lines().size() && ok; ++l) {
            if ((*fed)[l] != kNone && state.faulty_lines[l]) ok = false;
            if ((*before)[l] != kNone && (*fed)[l] != (*before)[l]) ok = false;
            if ((*before)[l] == kNone && (*fed)[l] != kNone)
                for (std::size_t d = 0; d < nd; ++d)
                    if (incident_to(t.device(d), l)) reachable.insert(d);
        }
        if (!ok) continue;
        const ViolationSet v = violations(t, after);
        if (!std::includes(baseline.begin(), baseline.end(), v.begin(), v.end())) continue;
        if (!std::all_of(flipped.begin(), flipped.end(), [&](std::size_t d) { return reachable.count(d) > 0; }))
            continue;

        PlanKey key;
        for (std::size_t d : flipped) (after[d] == Position::Open ? key.first : key.second).push_back(d);
        out.insert(std::move(key));
    }
    return out;
}

std::vector<PosteriorEntry> brute_force_posterior(const NetworkTopology& t, const PositionAssignment& pre_incident,
                                                  const Observation& initial,
                                                  const std::vector<std::pair<SwitchOp, Observation>>& history,
                                                  int k, const Priors& priors) {
    const std::size_t nd = t.devices().size();
    const auto pre = reachability_feeders(t, pre_incident);

    // Areas of every feeder whose breaker the incident opened.
    std::vector<std::size_t> cut;
    std::vector<std::vector<std::size_t>> areas;
    for (std::size_t i = 0; i < t.breakers().size(); ++i) {
        const std::size_t b = t.breakers()[i];
        if (pre_incident[b] != Position::Closed || initial.breakers[i] != Position::Open) continue;
        std::set<std::size_t> s;
        for (std::size_t l = 0; l < t.lines().size(); ++l)
            if ((*pre)[l] == b) s.insert(t.area_of_line(l));
        cut.push_back(b);
        areas.emplace_back(s.begin(), s.end());
    }
    if (cut.empty()) return {};

    // Per feeder, all non-empty subsets of its areas with at most k members.
    std::vector<std::vector<std::vector<std::size_t>>> subsets(cut.size());
    for (std::size_t f = 0; f < cut.size(); ++f)
        for (std::uint32_t m = 1; m < (1u << areas[f].size()); ++m) {
            std::vector<std::size_t> s;
            for (std::size_t i = 0; i < areas[f].size(); ++i)
                if (m >> i & 1u) s.push_back(areas[f][i]);
            if (static_cast<int>(s.size()) <= k) subsets[f].push_back(s);
        }

    std::map<Candidate, double, CandidateOrder> paths;
    std::vector<std::size_t> pick(cut.size(), 0);
    while (true) {
        std::size_t largest = 0;
        for (std::size_t f = 0; f < cut.size(); ++f)
            if (subsets[f].empty()) return {};
        for (std::size_t f = 0; f < cut.size(); ++f) largest = std::max(largest, subsets[f][pick[f]].size());

        if (k == 1 || static_cast<int>(largest) == k) {
            Candidate c;
            c.positions = pre_incident;
            c.faulty_lines.assign(t.lines().size(), false);
            c.fd_latched.assign(nd, false);
            c.fd_mode.assign(nd, BehaviorMode::Correct);
            c.ac_mode.assign(nd, BehaviorMode::Correct);
            double w = 1.0;
            std::set<std::size_t> fa;
            for (std::size_t f = 0; f < cut.size(); ++f)
                for (std::size_t a : subsets[f][pick[f]]) {
                    fa.insert(a);
                    w *= priors.area_weight(t.areas()[a].id);
                    for (std::size_t l : t.areas()[a].lines)
                        if ((*pre)[l] == cut[f]) c.faulty_lines[l] = true;
                }
            c.fault_areas.assign(fa.begin(), fa.end());
            apply_protection(t, c.positions, c.faulty_lines, c.fd_latched);
            for (std::size_t i = 0; i < t.fault_detectors().size(); ++i) {
                const std::size_t d = t.fault_detectors()[i];
                const FdReading r = initial.fault_detectors[i];
                if (r == FdReading::NoInfo)
                    c.fd_mode[d] = BehaviorMode::Broken;
                else if ((r == FdReading::FaultDownstream) != c.fd_latched[d])
                    c.fd_mode[d] = BehaviorMode::Liar;
                w *= fd_weight(priors, c.fd_mode[d], r);
            }
            if (w > 0.0) paths[c] += w;
        }

        std::size_t f = 0;
        while (f < cut.size() && ++pick[f] == subsets[f].size()) pick[f++] = 0;
        if (f == cut.size()) break;
    }

    const double stay = 1.0 - priors.p_ac_to_liar - priors.p_ac_to_broken;
    for (const auto& [op, obs] : history) {
        std::map<Candidate, double, CandidateOrder> next;
        for (const auto& [c, w] : paths) {
            std::vector<std::pair<BehaviorMode, double>> outcomes;
            if (c.ac_mode[op.device] == BehaviorMode::Correct)
                outcomes = {{BehaviorMode::Correct, stay},
                            {BehaviorMode::Liar, priors.p_ac_to_liar},
                            {BehaviorMode::Broken, priors.p_ac_to_broken}};
            else
                outcomes = {{c.ac_mode[op.device], 1.0}};
            for (const auto& [mode, p] : outcomes) {
                if (p <= 0.0) continue;
                Candidate s = c;
                s.ac_mode[op.device] = mode;
                if (mode == BehaviorMode::Correct) s.positions[op.device] = op.direction;
                apply_protection(t, s.positions, s.faulty_lines, s.fd_latched);
                if (consistent(t, s, op, obs)) next[s] += w * p;
            }
        }
        paths = std::move(next);
    }

    double total = 0.0;
    for (const auto& [c, w] : paths) total += w;
    std::vector<PosteriorEntry> out;
    for (const auto& [c, w] : paths) out.push_back({c, w / total});
    return out;
}

double posterior_distance(const Belief& belief, const std::vector<PosteriorEntry>& oracle) {
    if (belief.size() != oracle.size()) return std::numeric_limits<double>::infinity();
    std::map<Candidate, double, CandidateOrder> expected;
    for (const auto& e : oracle) expected[e.candidate] = e.probability;
    double gap = 0.0;
    for (std::size_t i = 0; i < belief.size(); ++i) {
        auto it = expected.find(belief.entries[i].candidate);
        if (it == expected.end()) return std::numeric_limits<double>::infinity();
        gap = std::max(gap, std::abs(belief.probability(i) - it->second));
    }
    return gap;
}

}  // namespace restoration::testing
