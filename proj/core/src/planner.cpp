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

#include "restoration/planner.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <tuple>

namespace restoration {

namespace {

enum class Choice : std::uint8_t { Undecided, Open, Closed };

bool operable(const NetworkTopology& topology, const Candidate& state, std::size_t d) {
    return topology.device(d).is_remote() && state.ac_mode[d] == BehaviorMode::Correct;
}

std::vector<std::pair<ViolationKind, std::size_t>> violation_keys(const PowerReport& report) {
    std::vector<std::pair<ViolationKind, std::size_t>> keys;
    for (const Violation& v : report.violations) keys.emplace_back(v.kind, v.element);
    std::sort(keys.begin(), keys.end());
    return keys;
}

class Explorer {
public:
    Explorer(const NetworkTopology& topology, const Candidate& state)
        : topology_(topology), state_(state), choice_(topology.devices().size(), Choice::Undecided) {
        const auto fed = fed_lines(topology, state.positions);
        region_.assign(topology.devices().size(), false);
        for (std::size_t l = 0; l < fed.size(); ++l)
            if (!fed[l])
                for (std::size_t d : topology.incident(l)) region_[d] = true;
        auto base = compute_feeders(topology, simulated());
        if (auto* forest = std::get_if<FeederForest>(&base))
            baseline_ = violation_keys(power_report(topology, *forest));
    }

    void decide(std::size_t d, Choice c) { choice_[d] = c; }

    std::vector<Plan> run(ExtensionFrontier frontier) {
        search(std::move(frontier));
        return std::move(plans_);
    }

private:
    // Undecided devices touching lines that are unfed in the hypothesis are
    // held open, so a closing check only sees the extension built so far.
    PositionAssignment simulated() const {
        PositionAssignment p = state_.positions;
        for (std::size_t d = 0; d < p.size(); ++d) {
            if (choice_[d] == Choice::Open)
                p[d] = Position::Open;
            else if (choice_[d] == Choice::Closed)
                p[d] = Position::Closed;
            else if (region_[d])
                p[d] = Position::Open;
        }
        return p;
    }

    // Returns the line newly fed through `d`, or nullopt if closing `d` feeds a
    // faulty line, a line via several breakers, or breaks a capacity.
    std::optional<std::size_t> try_close(std::size_t d) const {
        const PositionAssignment sim = simulated();
        auto result = compute_feeders(topology_, sim);
        auto* forest = std::get_if<FeederForest>(&result);
        if (forest == nullptr) return std::nullopt;
        for (std::size_t l = 0; l < forest->feeder_of_line.size(); ++l)
            if (forest->fed(l) && state_.faulty_lines[l]) return std::nullopt;
        auto keys = violation_keys(power_report(topology_, *forest));
        if (!std::includes(baseline_.begin(), baseline_.end(), keys.begin(), keys.end())) return std::nullopt;

        const Device& dev = topology_.device(d);
        if (dev.is_breaker()) return dev.line_a;
        for (std::size_t l : {dev.line_a, dev.line_b})
            if (forest->fed(l) && forest->parent_device[l] == d) return l;
        return kNone;
    }

    void search(ExtensionFrontier frontier) {
        if (frontier.empty()) {
            emit();
            return;
        }
        const ExtensionPoint point = frontier.back();
        frontier.pop_back();
        const std::size_t d = point.device;

        // Already decided from another branch of the extension: keep it.
        if (choice_[d] != Choice::Undecided) {
            search(std::move(frontier));
            return;
        }

        bool may_open = true;
        bool may_close = true;
        if (!operable(topology_, state_, d)) {
            may_open = state_.positions[d] == Position::Open;
            may_close = !may_open;
        }

        if (may_open) {
            choice_[d] = Choice::Open;
            search(frontier);
            choice_[d] = Choice::Undecided;
        }
        if (may_close) {
            choice_[d] = Choice::Closed;
            if (auto below = try_close(d)) {
                ExtensionFrontier next = frontier;
                if (*below != kNone)
                    for (std::size_t c : topology_.incident(*below))
                        if (c != d) next.push_back({c, point.feeder});
                search(std::move(next));
            }
            choice_[d] = Choice::Undecided;
        }
    }

    void emit() {
        Plan p;
        for (std::size_t d = 0; d < choice_.size(); ++d) {
            if (choice_[d] == Choice::Open && state_.positions[d] == Position::Closed) p.open_set.push_back(d);
            if (choice_[d] == Choice::Closed && state_.positions[d] == Position::Open) p.close_set.push_back(d);
        }
        p.sequence = execution_order(topology_, state_, p.open_set, p.close_set);
        plans_.push_back(std::move(p));
    }

    const NetworkTopology& topology_;
    const Candidate& state_;
    std::vector<Choice> choice_;
    std::vector<bool> region_;
    std::vector<std::pair<ViolationKind, std::size_t>> baseline_;
    std::vector<Plan> plans_;
};

double newly_supplied_value(const NetworkTopology& topology, const std::vector<bool>& fed_before,
                            const FeederForest& after, std::size_t line) {
    if (fed_before[line] || !after.fed(line)) return 0.0;
    const Line& l = topology.line(line);
    return l.load_kw * l.consumer_weight;
}

// Population variance of load / capacity over the closed breakers.
double load_ratio_variance(const NetworkTopology& topology, const FeederForest& forest) {
    const PowerReport report = power_report(topology, forest);
    std::vector<double> ratios;
    for (const Feeder& f : forest.feeders) {
        const double cap = topology.device(f.breaker).capacity_kw;
        ratios.push_back(cap > 0.0 ? report.breaker_load[f.breaker] / cap : 0.0);
    }
    if (ratios.empty()) return 0.0;
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double variance = 0.0;
    for (double r : ratios) variance += (r - mean) * (r - mean);
    return variance / static_cast<double>(ratios.size());
}

std::vector<std::string> sequence_ids(const NetworkTopology& topology, const Plan& p) {
    std::vector<std::string> ids;
    for (const SwitchOp& op : p.sequence) ids.push_back(topology.device(op.device).id);
    return ids;
}

}  // namespace

std::vector<CutoffFeeder> cutoff_feeders(const NetworkTopology& topology,
                                         const PositionAssignment& pre_incident,
                                         const PositionAssignment& positions) {
    const FeederForest pre = feeders(topology, pre_incident);
    std::vector<CutoffFeeder> out;
    for (std::size_t b : topology.breakers()) {
        if (positions[b] != Position::Open) continue;
        CutoffFeeder f;
        f.breaker = b;
        if (const Feeder* pf = pre.feeder_for(b)) {
            f.lines = pf->lines;
            std::sort(f.lines.begin(), f.lines.end());
        }
        out.push_back(std::move(f));
    }
    return out;
}

ExtensionFrontier extension_points(const NetworkTopology& topology, const Candidate& state,
                                   const std::vector<CutoffFeeder>& cutoff) {
    const auto energized = energized_lines(topology, state.positions);
    std::set<ExtensionPoint> points;
    for (const CutoffFeeder& f : cutoff) {
        points.insert({f.breaker, f.breaker});
        for (std::size_t l : f.lines) {
            if (!energized[l].empty()) continue;
            for (std::size_t d : topology.incident(l)) {
                const Device& dev = topology.device(d);
                if (dev.is_breaker()) {
                    points.insert({d, d});
                    continue;
                }
                const std::size_t o = dev.other_end(l);
                if (!energized[o].empty()) points.insert({d, energized[o].front()});
            }
        }
    }
    return {points.begin(), points.end()};
}

std::vector<Plan> explore(const NetworkTopology& topology, const Candidate& state,
                          const std::vector<std::size_t>& open_choices,
                          const std::vector<std::size_t>& closed_choices, const ExtensionFrontier& frontier) {
    Explorer explorer(topology, state);
    for (std::size_t d : open_choices) explorer.decide(d, Choice::Open);
    for (std::size_t d : closed_choices) explorer.decide(d, Choice::Closed);
    // Popped from the back; reversing keeps the first frontier entry first.
    return explorer.run(ExtensionFrontier(frontier.rbegin(), frontier.rend()));
}

std::vector<Plan> explore(const NetworkTopology& topology, const Candidate& state,
                          const ExtensionFrontier& frontier) {
    return explore(topology, state, {}, {}, frontier);
}

PositionAssignment apply_plan(const PositionAssignment& positions, const Plan& plan) {
    PositionAssignment out = positions;
    for (std::size_t d : plan.open_set) out[d] = Position::Open;
    for (std::size_t d : plan.close_set) out[d] = Position::Closed;
    return out;
}

std::vector<SwitchOp> execution_order(const NetworkTopology& topology, const Candidate& state,
                                      const std::vector<std::size_t>& open_set,
                                      const std::vector<std::size_t>& close_set) {
    std::vector<SwitchOp> seq;
    for (std::size_t d : open_set) seq.push_back({d, Position::Open});
    if (close_set.empty()) return seq;

    PositionAssignment after = state.positions;
    for (std::size_t d : open_set) after[d] = Position::Open;
    for (std::size_t d : close_set) after[d] = Position::Closed;
    auto result = compute_feeders(topology, after);
    auto* forest = std::get_if<FeederForest>(&result);
    if (forest == nullptr) {
        for (std::size_t d : close_set) seq.push_back({d, Position::Closed});
        return seq;
    }

    const auto fed_before = fed_lines(topology, state.positions);
    std::map<std::size_t, double> group_value;
    for (const Feeder& f : forest->feeders)
        for (std::size_t l : f.lines) group_value[f.breaker] += newly_supplied_value(topology, fed_before, *forest, l);

    struct Key {
        double value;
        std::size_t breaker;
        std::size_t depth;
        std::size_t device;
    };
    std::vector<Key> keys;
    for (std::size_t d : close_set) {
        const Device& dev = topology.device(d);
        std::size_t breaker = kNone;
        std::size_t depth = 0;
        if (dev.is_breaker()) {
            breaker = forest->feeder_of_line[dev.line_a] == d ? d : kNone;
        } else {
            for (std::size_t l : {dev.line_a, dev.line_b}) {
                if (forest->fed(l) && forest->parent_device[l] == d) {
                    breaker = forest->feeder_of_line[l];
                    depth = forest->depth[l];
                }
            }
        }
        const double value = breaker == kNone ? 0.0 : group_value[breaker];
        keys.push_back({value, breaker, depth, d});
    }
    // Device and breaker indices follow ascending id order.
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        return std::make_tuple(-a.value, a.breaker, a.depth, a.device) <
               std::make_tuple(-b.value, b.breaker, b.depth, b.device);
    });
    for (const Key& k : keys) seq.push_back({k.device, Position::Closed});
    return seq;
}

double plan_utility(const NetworkTopology& topology, const Candidate& state, const Plan& plan,
                    const UtilityWeights& weights) {
    auto result = compute_feeders(topology, apply_plan(state.positions, plan));
    auto* forest = std::get_if<FeederForest>(&result);
    if (forest == nullptr) return -std::numeric_limits<double>::infinity();

    const auto fed_before = fed_lines(topology, state.positions);
    double supplied = 0.0;
    for (std::size_t l = 0; l < topology.lines().size(); ++l)
        supplied += newly_supplied_value(topology, fed_before, *forest, l);

    // Balance is scored as the change against the current state, so doing
    // nothing scores exactly zero.
    double imbalance = load_ratio_variance(topology, *forest);
    auto current = compute_feeders(topology, state.positions);
    if (auto* cf = std::get_if<FeederForest>(&current)) imbalance -= load_ratio_variance(topology, *cf);

    return weights.w_supply * supplied - weights.w_ops * static_cast<double>(plan.operation_count()) -
           weights.w_balance * imbalance;
}

std::vector<RankedPlan> rank_plans(const NetworkTopology& topology, const Candidate& state,
                                   const std::vector<CutoffFeeder>& cutoff, const UtilityWeights& weights) {
    std::vector<RankedPlan> ranked;
    for (Plan& p : explore(topology, state, extension_points(topology, state, cutoff))) {
        const double score = plan_utility(topology, state, p, weights);
        ranked.push_back({std::move(p), score});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [&](const RankedPlan& a, const RankedPlan& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.plan.operation_count() != b.plan.operation_count())
            return a.plan.operation_count() < b.plan.operation_count();
        return sequence_ids(topology, a.plan) < sequence_ids(topology, b.plan);
    });
    return ranked;
}

Plan plan(const NetworkTopology& topology, const Candidate& state, const std::vector<CutoffFeeder>& cutoff,
          const UtilityWeights& weights) {
    auto ranked = rank_plans(topology, state, cutoff, weights);
    if (ranked.empty()) return {};
    return std::move(ranked.front().plan);
}

}  // namespace restoration
