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

#include "restoration/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

namespace restoration {

namespace {

constexpr double kSumTolerance = 1e-9;
// Log-probabilities closer than this are an exact tie for most_probable.
constexpr double kTieTolerance = 1e-12;

double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

struct CandidateLess {
    bool operator()(const Candidate& a, const Candidate& b) const { return candidate_less(a, b); }
};

using MassMap = std::map<Candidate, double, CandidateLess>;

void accumulate(MassMap& mass, Candidate c, double log_p) {
    auto [it, inserted] = mass.try_emplace(std::move(c), log_p);
    if (!inserted) it->second = log_sum_exp(it->second, log_p);
}

Belief normalized(MassMap mass, int level) {
    Belief out;
    out.level = level;
    if (mass.empty()) return out;
    double total = -std::numeric_limits<double>::infinity();
    for (const auto& [c, lp] : mass) total = log_sum_exp(total, lp);
    out.entries.reserve(mass.size());
    for (auto& [c, lp] : mass) out.entries.push_back({c, lp - total});
    return out;
}

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

bool candidate_less(const Candidate& a, const Candidate& b) {
    const auto na = a.fault_areas.size();
    const auto nb = b.fault_areas.size();
    return std::tie(na, a.fault_areas, a.fd_mode, a.ac_mode, a.positions, a.fd_latched, a.faulty_lines) <
           std::tie(nb, b.fault_areas, b.fd_mode, b.ac_mode, b.positions, b.fd_latched, b.faulty_lines);
}

double Belief::probability(std::size_t i) const { return std::exp(entries.at(i).log_probability); }

double Belief::total_probability() const {
    double sum = 0.0;
    for (const auto& e : entries) sum += std::exp(e.log_probability);
    return sum;
}

void Priors::validate() const {
    check_probability(p_liar_given_positive, "p_liar_given_positive");
    check_probability(p_correct_given_positive, "p_correct_given_positive");
    check_probability(p_liar_given_negative, "p_liar_given_negative");
    check_probability(p_correct_given_negative, "p_correct_given_negative");
    check_probability(p_broken_given_noinfo, "p_broken_given_noinfo");
    check_probability(p_ac_to_liar, "p_ac_to_liar");
    check_probability(p_ac_to_broken, "p_ac_to_broken");
    if (std::abs(p_liar_given_positive + p_correct_given_positive - 1.0) > kSumTolerance)
        throw std::invalid_argument("FD mode probabilities given a positive reading must sum to 1");
    if (std::abs(p_liar_given_negative + p_correct_given_negative - 1.0) > kSumTolerance)
        throw std::invalid_argument("FD mode probabilities given a negative reading must sum to 1");
    if (std::abs(p_broken_given_noinfo - 1.0) > kSumTolerance)
        throw std::invalid_argument("an FD returning no information is broken with probability 1");
    if (p_ac_to_liar + p_ac_to_broken > 1.0 + kSumTolerance)
        throw std::invalid_argument("actuator transition probabilities exceed 1");
    for (const auto& [area, w] : area_fault_weight)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("area fault weight for '" + area + "' must be positive");
}

double Priors::fd_mode_probability(BehaviorMode mode, FdReading reading) const {
    switch (reading) {
        case FdReading::FaultDownstream:
            if (mode == BehaviorMode::Correct) return p_correct_given_positive;
            if (mode == BehaviorMode::Liar) return p_liar_given_positive;
            return 0.0;
        case FdReading::NoFault:
            if (mode == BehaviorMode::Correct) return p_correct_given_negative;
            if (mode == BehaviorMode::Liar) return p_liar_given_negative;
            return 0.0;
        case FdReading::NoInfo:
            return mode == BehaviorMode::Broken ? p_broken_given_noinfo : 0.0;
    }
    return 0.0;
}

double Priors::area_weight(const std::string& area_id) const {
    auto it = area_fault_weight.find(area_id);
    return it == area_fault_weight.end() ? 1.0 : it->second;
}

Incident make_incident(const NetworkTopology& topology, const PositionAssignment& pre_incident,
                       const Observation& initial) {
    Incident inc;
    inc.pre_incident = pre_incident;
    const auto& breakers = topology.breakers();
    for (std::size_t i = 0; i < breakers.size(); ++i)
        if (pre_incident[breakers[i]] == Position::Closed && initial.breakers.at(i) == Position::Open)
            inc.cutoff_breakers.push_back(breakers[i]);
    inc.readings = initial.fault_detectors;
    return inc;
}

std::vector<FaultCombination> enumerate_fault_combos(
    const std::vector<std::vector<std::size_t>>& areas_per_cutoff_feeder, int k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (areas_per_cutoff_feeder.empty()) return {};

    // Subsets of size 1..k per feeder, in lexicographic order of index tuples.
    std::vector<std::vector<std::vector<std::size_t>>> options;
    for (const auto& areas : areas_per_cutoff_feeder) {
        std::vector<std::vector<std::size_t>> subsets;
        const std::size_t n = areas.size();
        for (std::size_t size = 1; size <= std::min<std::size_t>(k, n); ++size) {
            std::vector<std::size_t> idx(size);
            for (std::size_t i = 0; i < size; ++i) idx[i] = i;
            while (true) {
                std::vector<std::size_t> subset;
                for (std::size_t i : idx) subset.push_back(areas[i]);
                subsets.push_back(std::move(subset));
                std::size_t pos = size;
                while (pos > 0 && idx[pos - 1] == n - size + pos - 1) --pos;
                if (pos == 0) break;
                ++idx[pos - 1];
                for (std::size_t j = pos; j < size; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
        if (subsets.empty()) return {};
        options.push_back(std::move(subsets));
    }

    std::vector<FaultCombination> combos;
    std::vector<std::size_t> pick(options.size(), 0);
    while (true) {
        FaultCombination combo;
        std::size_t largest = 0;
        for (std::size_t f = 0; f < options.size(); ++f) {
            combo.push_back(options[f][pick[f]]);
            largest = std::max(largest, combo.back().size());
        }
        if (largest == static_cast<std::size_t>(k)) combos.push_back(std::move(combo));
        std::size_t f = options.size();
        while (f > 0) {
            --f;
            if (++pick[f] < options[f].size()) break;
            pick[f] = 0;
            if (f == 0) return combos;
        }
    }
}

std::vector<BehaviorMode> deduce_fd_modes(const std::vector<bool>& expected_latched,
                                          const std::vector<FdReading>& actual) {
    if (expected_latched.size() != actual.size())
        throw std::invalid_argument("expected and actual FD readings differ in size");
    std::vector<BehaviorMode> modes(actual.size(), BehaviorMode::Correct);
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == FdReading::NoInfo)
            modes[i] = BehaviorMode::Broken;
        else if ((actual[i] == FdReading::FaultDownstream) != expected_latched[i])
            modes[i] = BehaviorMode::Liar;
    }
    return modes;
}

std::vector<std::vector<std::size_t>> cutoff_feeder_areas(const NetworkTopology& topology,
                                                          const Incident& incident) {
    const FeederForest pre = feeders(topology, incident.pre_incident);
    std::vector<std::vector<std::size_t>> result;
    for (std::size_t b : incident.cutoff_breakers) {
        std::set<std::size_t> areas;
        if (const Feeder* f = pre.feeder_for(b))
            for (std::size_t l : f->lines) areas.insert(topology.area_of_line(l));
        result.emplace_back(areas.begin(), areas.end());
    }
    return result;
}

Belief initial_distribution(const NetworkTopology& topology, const Incident& incident, int k,
                            const Priors& priors) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    const FeederForest pre = feeders(topology, incident.pre_incident);
    const auto areas_per_feeder = cutoff_feeder_areas(topology, incident);
    const auto& fds = topology.fault_detectors();
    const std::size_t nd = topology.devices().size();

    MassMap mass;
    for (const FaultCombination& combo : enumerate_fault_combos(areas_per_feeder, k)) {
        Candidate c;
        c.positions = incident.pre_incident;
        c.faulty_lines.assign(topology.lines().size(), false);
        std::set<std::size_t> fault_areas;
        double log_w = 0.0;
        for (std::size_t f = 0; f < combo.size(); ++f) {
            const std::size_t breaker = incident.cutoff_breakers[f];
            for (std::size_t area : combo[f]) {
                fault_areas.insert(area);
                log_w += std::log(priors.area_weight(topology.areas()[area].id));
                for (std::size_t l : topology.areas()[area].lines)
                    if (pre.feeder_of_line[l] == breaker) c.faulty_lines[l] = true;
            }
        }
        c.fault_areas.assign(fault_areas.begin(), fault_areas.end());
        c.fd_latched.assign(nd, false);
        apply_protection(topology, c.positions, c.faulty_lines, c.fd_latched);

        std::vector<bool> expected;
        expected.reserve(fds.size());
        for (std::size_t d : fds) expected.push_back(c.fd_latched[d]);
        const auto modes = deduce_fd_modes(expected, incident.readings);

        c.fd_mode.assign(nd, BehaviorMode::Correct);
        c.ac_mode.assign(nd, BehaviorMode::Correct);
        for (std::size_t i = 0; i < fds.size(); ++i) {
            c.fd_mode[fds[i]] = modes[i];
            log_w += std::log(priors.fd_mode_probability(modes[i], incident.readings[i]));
        }
        if (std::isfinite(log_w)) accumulate(mass, std::move(c), log_w);
    }
    return normalized(std::move(mass), k);
}

Candidate simulate(const NetworkTopology& topology, const Candidate& candidate, const SwitchOp& op,
                   BehaviorMode ac_after) {
    Candidate next = candidate;
    next.ac_mode[op.device] = ac_after;
    if (ac_after == BehaviorMode::Correct) next.positions[op.device] = op.direction;
    apply_protection(topology, next.positions, next.faulty_lines, next.fd_latched);
    return next;
}

Belief predict(const NetworkTopology& topology, const Belief& belief, const SwitchOp& op,
               const Priors& priors) {
    if (op.device >= topology.devices().size()) throw std::invalid_argument("unknown device index");
    if (!topology.device(op.device).is_remote())
        throw std::invalid_argument("device '" + topology.device(op.device).id + "' is manually operated");

    const double p_stay = 1.0 - priors.p_ac_to_liar - priors.p_ac_to_broken;
    MassMap mass;
    for (const BeliefEntry& e : belief.entries) {
        const BehaviorMode current = e.candidate.ac_mode[op.device];
        if (current != BehaviorMode::Correct) {
            accumulate(mass, simulate(topology, e.candidate, op, current), e.log_probability);
            continue;
        }
        const std::pair<BehaviorMode, double> branches[] = {
            {BehaviorMode::Correct, p_stay},
            {BehaviorMode::Liar, priors.p_ac_to_liar},
            {BehaviorMode::Broken, priors.p_ac_to_broken},
        };
        for (const auto& [mode, p] : branches) {
            if (p <= 0.0) continue;
            accumulate(mass, simulate(topology, e.candidate, op, mode), e.log_probability + std::log(p));
        }
    }
    // Mass is conserved, so entries are already normalized up to rounding.
    Belief out;
    out.level = belief.level;
    out.entries.reserve(mass.size());
    for (auto& [c, lp] : mass) out.entries.push_back({c, lp});
    return out;
}

Observation expected_observation(const NetworkTopology& topology, const Candidate& candidate,
                                 const SwitchOp& op) {
    Observation obs;
    obs.notification = candidate.ac_mode[op.device] == BehaviorMode::Broken ? Notification::Negative
                                                                            : Notification::Positive;
    obs.pd_reading = candidate.positions[op.device] == Position::Open ? PdReading::Open : PdReading::Closed;
    for (std::size_t b : topology.breakers()) obs.breakers.push_back(candidate.positions[b]);
    for (std::size_t d : topology.fault_detectors())
        obs.fault_detectors.push_back(filter_fd(candidate.fd_mode[d], candidate.fd_latched[d]));
    return obs;
}

bool observation_consistent(const Observation& expected, const Observation& actual) {
    if (actual.notification != Notification::None && actual.notification != expected.notification)
        return false;
    if (actual.pd_reading != PdReading::NoInfo && actual.pd_reading != expected.pd_reading) return false;
    if (actual.breakers != expected.breakers) return false;
    if (actual.fault_detectors.size() != expected.fault_detectors.size()) return false;
    for (std::size_t i = 0; i < actual.fault_detectors.size(); ++i)
        if (actual.fault_detectors[i] != FdReading::NoInfo &&
            actual.fault_detectors[i] != expected.fault_detectors[i])
            return false;
    return true;
}

std::optional<Belief> condition(const NetworkTopology& topology, const Belief& belief,
                                const Observation& observation, const SwitchOp& op) {
    MassMap mass;
    for (const BeliefEntry& e : belief.entries)
        if (observation_consistent(expected_observation(topology, e.candidate, op), observation))
            mass.emplace(e.candidate, e.log_probability);
    if (mass.empty()) return std::nullopt;
    return normalized(std::move(mass), belief.level);
}

std::size_t most_probable_index(const Belief& belief) {
    if (belief.entries.empty()) throw std::invalid_argument("most_probable of an empty belief");
    // Entries are in canonical order, so the first of a tied group wins.
    std::size_t best = 0;
    for (std::size_t i = 1; i < belief.entries.size(); ++i)
        if (belief.entries[i].log_probability > belief.entries[best].log_probability + kTieTolerance)
            best = i;
    return best;
}

const Candidate& most_probable(const Belief& belief) {
    return belief.entries[most_probable_index(belief)].candidate;
}

}  // namespace restoration
