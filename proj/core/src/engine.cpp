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

#include "restoration/engine.hpp"

#include <string>

namespace restoration {

namespace {

event::HypothesisAdopted summarize(const NetworkTopology& topology, const Belief& belief, std::size_t index) {
    const Candidate& c = belief.entries[index].candidate;
    event::HypothesisAdopted h;
    h.level = belief.level;
    for (std::size_t a : c.fault_areas) h.fault_areas.push_back(topology.areas()[a].id);
    for (std::size_t d = 0; d < c.fd_mode.size(); ++d) {
        if (!topology.device(d).has_fault_detector()) continue;
        if (c.fd_mode[d] != BehaviorMode::Correct) h.fd_modes.emplace(topology.device(d).id, c.fd_mode[d]);
    }
    for (std::size_t d = 0; d < c.ac_mode.size(); ++d) {
        if (!topology.device(d).is_remote()) continue;
        if (c.ac_mode[d] != BehaviorMode::Correct) h.ac_modes.emplace(topology.device(d).id, c.ac_mode[d]);
    }
    h.probability = belief.probability(index);
    return h;
}

event::PlanAdopted describe(const NetworkTopology& topology, const RankedPlan& ranked) {
    event::PlanAdopted p;
    for (const SwitchOp& op : ranked.plan.sequence) p.ops.push_back({topology.device(op.device).id, op.direction});
    p.score = ranked.score;
    return p;
}

event::Finished final_supply(const NetworkTopology& topology, const WorldState& world) {
    event::Finished f;
    const auto energized = energized_lines(topology, world.positions);
    for (std::size_t l = 0; l < energized.size(); ++l) {
        if (energized[l].empty())
            f.unfed.push_back(topology.line(l).id);
        else
            f.fed.emplace(topology.line(l).id, topology.device(energized[l].front()).id);
    }
    return f;
}

std::optional<Belief> replay(const NetworkTopology& topology, Belief belief, const History& history,
                             const Priors& priors) {
    for (const HistoryEntry& h : history) {
        auto next = condition(topology, predict(topology, belief, h.op, priors), h.observation, h.op);
        if (!next) return std::nullopt;
        belief = std::move(*next);
    }
    return belief;
}

}  // namespace

ObservationRecord make_record(const NetworkTopology& topology, const Observation& observation) {
    ObservationRecord r;
    for (std::size_t i = 0; i < topology.breakers().size(); ++i)
        r.breakers.emplace(topology.device(topology.breakers()[i]).id, observation.breakers.at(i));
    for (std::size_t i = 0; i < topology.fault_detectors().size(); ++i)
        r.fault_detectors.emplace(topology.device(topology.fault_detectors()[i]).id,
                                  observation.fault_detectors.at(i));
    return r;
}

Candidate expected_successor(const NetworkTopology& topology, const Candidate& candidate, const SwitchOp& op) {
    return simulate(topology, candidate, op, BehaviorMode::Correct);
}

std::optional<Belief> escalate(const NetworkTopology& topology, const Incident& incident, const History& history,
                               const SessionConfig& cfg, int k) {
    for (int level = k + 1; level <= cfg.k_max; ++level) {
        Belief initial = initial_distribution(topology, incident, level, cfg.priors);
        if (initial.empty()) continue;
        if (auto b = replay(topology, std::move(initial), history, cfg.priors)) return b;
    }
    return std::nullopt;
}

SessionResult restore(const NetworkTopology& topology, WorldState world, const SessionConfig& cfg,
                      const BeliefObserver& on_belief) {
    return restore(topology, topology.normal_positions(), std::move(world), cfg, on_belief);
}

SessionResult restore(const NetworkTopology& topology, const PositionAssignment& pre_incident, WorldState world,
                      const SessionConfig& cfg, const BeliefObserver& on_belief) {
    cfg.priors.validate();
    SessionResult result;
    Trace& trace = result.trace;
    SwitchRng rng(cfg.world.seed);

    auto finish = [&](Outcome outcome) {
        result.outcome = outcome;
        if (outcome == Outcome::Finished) trace.emplace_back(final_supply(topology, world));
        result.world = std::move(world);
        return std::move(result);
    };
    auto abort = [&](std::string reason) {
        trace.emplace_back(event::Aborted{std::move(reason)});
        return finish(Outcome::Aborted);
    };
    auto notify = [&](const Belief& b) {
        if (on_belief) on_belief(b);
    };

    const Observation initial = observe(topology, world);
    trace.emplace_back(event::InitialObservation{make_record(topology, initial)});
    const Incident incident = make_incident(topology, pre_incident, initial);
    if (incident.cutoff_breakers.empty()) return finish(Outcome::Finished);

    Belief belief = initial_distribution(topology, incident, 1, cfg.priors);
    if (belief.empty()) {
        auto b = escalate(topology, incident, {}, cfg, 1);
        if (!b) return abort("no candidate explains the incident up to level " + std::to_string(cfg.k_max));
        belief = std::move(*b);
        trace.emplace_back(event::Escalation{belief.level});
    }
    notify(belief);

    int replans = 0;
    while (true) {
        const std::size_t best = most_probable_index(belief);
        const Candidate hypothesis = belief.entries[best].candidate;
        trace.emplace_back(summarize(topology, belief, best));

        const auto cutoff = cutoff_feeders(topology, pre_incident, hypothesis.positions);
        auto ranked = rank_plans(topology, hypothesis, cutoff, cfg.utility);
        const RankedPlan chosen = ranked.empty() ? RankedPlan{} : std::move(ranked.front());
        trace.emplace_back(describe(topology, chosen));
        if (chosen.plan.empty()) return finish(Outcome::Finished);

        bool interrupted = false;
        Candidate expected = hypothesis;
        for (const SwitchOp& op : chosen.plan.sequence) {
            expected = expected_successor(topology, expected, op);
            auto [next_world, obs] = execute_switch(topology, world, op, cfg.world, rng);
            world = std::move(next_world);
            result.history.push_back({op, obs});
            trace.emplace_back(event::OpExecuted{{topology.device(op.device).id, op.direction},
                                                 obs.notification,
                                                 obs.pd_reading,
                                                 make_record(topology, obs)});

            auto posterior = condition(topology, predict(topology, belief, op, cfg.priors), obs, op);
            if (!posterior) {
                auto b = escalate(topology, incident, result.history, cfg, belief.level);
                if (!b) return abort("every candidate pruned up to level " + std::to_string(cfg.k_max));
                belief = std::move(*b);
                trace.emplace_back(event::Escalation{belief.level});
                notify(belief);
                interrupted = true;
                break;
            }
            belief = std::move(*posterior);
            notify(belief);

            if (!(most_probable(belief) == expected)) {
                if (++replans > cfg.replan_max)
                    return abort("replan limit " + std::to_string(cfg.replan_max) + " exceeded");
                trace.emplace_back(event::Replan{"most probable state differs from the expected one after " +
                                                 topology.device(op.device).id});
                interrupted = true;
                break;
            }
        }
        if (!interrupted) return finish(Outcome::Finished);
    }
}

}  // namespace restoration
