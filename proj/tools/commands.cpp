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

#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <vector>

#include "CLI11.hpp"
#include "restoration/io.hpp"

namespace restoration::cli {

namespace {

struct Session {
    NetworkTopology topology;
    PositionAssignment pre_incident;
    WorldState world;
    SessionConfig config;
};

SessionConfig load_config(const std::filesystem::path& path) {
    return path.empty() ? SessionConfig{} : parse_config(read_file(path));
}

Session prepare(const RunRequest& request) {
    NetworkTopology topology = parse_network(read_file(request.network));
    Scenario scenario = parse_scenario(read_file(request.scenario));
    SessionConfig config = load_config(request.config);
    config.world.seed = request.seed.value_or(scenario.seed);

    PositionAssignment pre = topology.normal_positions();
    for (const auto& [id, pos] : scenario.initial_positions) pre[topology.device_index(id)] = pos;
    WorldState world = init_world(topology, scenario);
    return {std::move(topology), std::move(pre), std::move(world), std::move(config)};
}

// Input failures share one exit code; anything else propagates.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const TopologyError& e) {
        err << "invalid network: " << e.what() << "\n";
    } catch (const StructuralFault& e) {
        err << "invalid configuration: " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << "\n";
    }
    return kInputError;
}

}  // namespace

int cmd_validate(const std::filesystem::path& network, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const NetworkTopology t = parse_network(read_file(network));
        const FeederForest forest = feeders(t, t.normal_positions());
        const PowerReport report = power_report(t, forest);

        out << "network ok: " << t.lines().size() << " lines, " << t.devices().size() << " devices, "
            << forest.feeders.size() << " feeders, " << t.areas().size() << " areas\n";
        for (const Feeder& f : forest.feeders) {
            std::set<std::size_t> areas;
            for (std::size_t l : f.lines) areas.insert(t.area_of_line(l));
            const Device& cb = t.device(f.breaker);
            out << "feeder " << cb.id << ": " << f.lines.size() << " lines, " << areas.size() << " areas, load "
                << report.breaker_load[f.breaker] << " kW of " << cb.capacity_kw << " kW\n";
            out << "  areas:";
            for (std::size_t a : areas) out << ' ' << t.areas()[a].id;
            out << "\n";
        }
        for (std::size_t l : forest.unfed_lines) out << "unfed line " << t.line(l).id << "\n";
        for (const Violation& v : report.violations) {
            const std::string& id = v.kind == ViolationKind::Line ? t.line(v.element).id : t.device(v.element).id;
            out << "capacity violation: " << id << " carries " << v.load_kw << " kW of " << v.capacity_kw << " kW\n";
        }
        return report.violations.empty() ? kOk : kInputError;
    });
}

int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (request.format != "text" && request.format != "json")
            throw InputError("format must be 'text' or 'json'");
        Session s = prepare(request);
        const SessionResult r = restore(s.topology, s.pre_incident, std::move(s.world), s.config);
        out << (request.format == "json" ? trace_to_jsonl(r.trace) : render_text(r.trace));
        return r.outcome == Outcome::Finished ? kOk : kAborted;
    });
}

int cmd_plans(const std::filesystem::path& network, const std::filesystem::path& candidate,
              const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const NetworkTopology t = parse_network(read_file(network));
        const Candidate c = parse_candidate(t, read_file(candidate));
        const SessionConfig cfg = load_config(config);
        const auto cutoff = cutoff_feeders(t, t.normal_positions(), c.positions);
        out << plans_to_json(plan_list(t, rank_plans(t, c, cutoff, cfg.utility)));
        return kOk;
    });
}

int cmd_belief(const RunRequest& request, std::size_t step, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Session s = prepare(request);
        std::vector<Belief> snapshots;
        restore(s.topology, s.pre_incident, std::move(s.world), s.config,
                [&](const Belief& b) { snapshots.push_back(b); });
        if (step >= snapshots.size())
            throw InputError("step " + std::to_string(step) + " out of range: the session holds " +
                             std::to_string(snapshots.size()) + " beliefs");
        out << belief_to_json(belief_record(s.topology, snapshots[step]));
        return kOk;
    });
}

int run_main(int argc, char** argv) {
    CLI::App app{"Supply restoration for radial distribution networks"};
    app.require_subcommand(1);

    std::filesystem::path network, scenario, config, candidate, out_path;
    std::optional<std::uint64_t> seed;
    std::string format = "text";
    std::size_t step = 0;

    auto* validate = app.add_subcommand("validate", "check a network description and summarize it");
    validate->add_option("--network", network, "network JSON")->required()->check(CLI::ExistingFile);

    auto* run = app.add_subcommand("run", "run a restoration session and emit its trace");
    run->add_option("--network", network, "network JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--scenario", scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--config", config, "configuration JSON")->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* plans = app.add_subcommand("plans", "rank every admissible plan for a candidate state");
    plans->add_option("--network", network, "network JSON")->required()->check(CLI::ExistingFile);
    plans->add_option("--candidate", candidate, "candidate JSON")->required()->check(CLI::ExistingFile);
    plans->add_option("--config", config, "configuration JSON")->check(CLI::ExistingFile);

    auto* belief = app.add_subcommand("belief", "dump the belief held at a session step");
    belief->add_option("--network", network, "network JSON")->required()->check(CLI::ExistingFile);
    belief->add_option("--scenario", scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
    belief->add_option("--config", config, "configuration JSON")->check(CLI::ExistingFile);
    belief->add_option("--seed", seed, "override the scenario seed");
    belief->add_option("--step", step, "0 is the initial belief");

    for (auto* sub : {validate, run, plans, belief}) sub->add_option("--out", out_path, "write output here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) {
            std::cerr << "cannot write '" << out_path.string() << "'\n";
            return kInputError;
        }
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    const RunRequest request{network, scenario, config, seed, format};
    if (validate->parsed()) return cmd_validate(network, out, std::cerr);
    if (run->parsed()) return cmd_run(request, out, std::cerr);
    if (plans->parsed()) return cmd_plans(network, candidate, config, out, std::cerr);
    return cmd_belief(request, step, out, std::cerr);
}

}  // namespace restoration::cli
