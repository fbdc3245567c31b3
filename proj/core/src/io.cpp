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

#include "restoration/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace restoration {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InputError(std::string(what) + ": " + e.what());
    }
}

void check_object(const json& j, const std::string& context) {
    if (!j.is_object()) throw InputError(context + ": expected an object");
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& context) {
    check_object(j, context);
    for (const auto& [key, _] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw InputError(context + ": unknown key '" + key + "'");
}

const json& require(const json& j, const char* key, const std::string& context) {
    auto it = j.find(key);
    if (it == j.end()) throw InputError(context + ": missing key '" + key + "'");
    return *it;
}

template <typename T>
T get_as(const json& j, const std::string& context) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw InputError(context + ": " + e.what());
    }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out, const std::string& context) {
    if (auto it = j.find(key); it != j.end()) out = get_as<T>(*it, context + "." + key);
}

Position parse_position(const json& j, const std::string& context) {
    const auto s = get_as<std::string>(j, context);
    if (s == "open") return Position::Open;
    if (s == "closed") return Position::Closed;
    throw InputError(context + ": expected 'open' or 'closed', got '" + s + "'");
}

BehaviorMode parse_mode(const json& j, const std::string& context) {
    const auto s = get_as<std::string>(j, context);
    if (s == "correct") return BehaviorMode::Correct;
    if (s == "liar") return BehaviorMode::Liar;
    if (s == "broken") return BehaviorMode::Broken;
    throw InputError(context + ": expected 'correct', 'liar' or 'broken', got '" + s + "'");
}

FdReading parse_fd(const json& j, const std::string& context) {
    const auto s = get_as<std::string>(j, context);
    if (s == "fault") return FdReading::FaultDownstream;
    if (s == "nofault") return FdReading::NoFault;
    if (s == "noinfo") return FdReading::NoInfo;
    throw InputError(context + ": bad fault detector reading '" + s + "'");
}

Notification parse_notification(const json& j, const std::string& context) {
    const auto s = get_as<std::string>(j, context);
    if (s == "positive") return Notification::Positive;
    if (s == "negative") return Notification::Negative;
    if (s == "none") return Notification::None;
    throw InputError(context + ": bad notification '" + s + "'");
}

PdReading parse_pd(const json& j, const std::string& context) {
    const auto s = get_as<std::string>(j, context);
    if (s == "open") return PdReading::Open;
    if (s == "closed") return PdReading::Closed;
    if (s == "noinfo") return PdReading::NoInfo;
    throw InputError(context + ": bad position reading '" + s + "'");
}

template <typename T, typename Fn>
std::map<std::string, T> parse_map(const json& j, const std::string& context, Fn&& fn) {
    check_object(j, context);
    std::map<std::string, T> out;
    for (const auto& [key, value] : j.items()) out.emplace(key, fn(value, context + "." + key));
    return out;
}

template <typename T>
json dump_map(const std::map<std::string, T>& m) {
    json j = json::object();
    for (const auto& [k, v] : m) j[k] = std::string(to_string(v));
    return j;
}

std::vector<std::string> string_list(const json& j, const std::string& context) {
    return get_as<std::vector<std::string>>(j, context);
}

json op_json(const OpRecord& op) {
    return {{"device", op.device}, {"direction", std::string(to_string(op.direction))}};
}

OpRecord op_from(const json& j, const std::string& context) {
    check_keys(j, {"device", "direction"}, context);
    return {get_as<std::string>(require(j, "device", context), context + ".device"),
            parse_position(require(j, "direction", context), context + ".direction")};
}

json observation_json(const ObservationRecord& r) {
    return {{"breakers", dump_map(r.breakers)}, {"fault_detectors", dump_map(r.fault_detectors)}};
}

ObservationRecord observation_from(const json& j, const std::string& context) {
    check_keys(j, {"breakers", "fault_detectors"}, context);
    ObservationRecord r;
    r.breakers = parse_map<Position>(require(j, "breakers", context), context + ".breakers", parse_position);
    r.fault_detectors = parse_map<FdReading>(require(j, "fault_detectors", context), context + ".fault_detectors",
                                             parse_fd);
    return r;
}

struct EventToJson {
    json operator()(const event::InitialObservation& e) const {
        return {{"event", "InitialObservation"}, {"observation", observation_json(e.observation)}};
    }
    json operator()(const event::HypothesisAdopted& e) const {
        return {{"event", "HypothesisAdopted"}, {"level", e.level},          {"fault_areas", e.fault_areas},
                {"fd_modes", dump_map(e.fd_modes)},   {"ac_modes", dump_map(e.ac_modes)},
                {"probability", e.probability}};
    }
    json operator()(const event::PlanAdopted& e) const {
        json ops = json::array();
        for (const auto& op : e.ops) ops.push_back(op_json(op));
        return {{"event", "PlanAdopted"}, {"ops", ops}, {"score", e.score}};
    }
    json operator()(const event::OpExecuted& e) const {
        return {{"event", "OpExecuted"},
                {"op", op_json(e.op)},
                {"notification", std::string(to_string(e.notification))},
                {"pd_reading", std::string(to_string(e.pd_reading))},
                {"observation", observation_json(e.observation)}};
    }
    json operator()(const event::Replan& e) const { return {{"event", "Replan"}, {"reason", e.reason}}; }
    json operator()(const event::Escalation& e) const { return {{"event", "Escalation"}, {"level", e.level}}; }
    json operator()(const event::Aborted& e) const { return {{"event", "Aborted"}, {"reason", e.reason}}; }
    json operator()(const event::Finished& e) const {
        return {{"event", "Finished"}, {"fed", e.fed}, {"unfed", e.unfed}};
    }
};

TraceEvent event_from(const json& j, const std::string& context) {
    check_object(j, context);
    const auto kind = get_as<std::string>(require(j, "event", context), context + ".event");
    if (kind == "InitialObservation") {
        check_keys(j, {"event", "observation"}, context);
        return event::InitialObservation{observation_from(require(j, "observation", context), context)};
    }
    if (kind == "HypothesisAdopted") {
        check_keys(j, {"event", "level", "fault_areas", "fd_modes", "ac_modes", "probability"}, context);
        event::HypothesisAdopted e;
        e.level = get_as<int>(require(j, "level", context), context);
        e.fault_areas = string_list(require(j, "fault_areas", context), context);
        e.fd_modes = parse_map<BehaviorMode>(require(j, "fd_modes", context), context, parse_mode);
        e.ac_modes = parse_map<BehaviorMode>(require(j, "ac_modes", context), context, parse_mode);
        e.probability = get_as<double>(require(j, "probability", context), context);
        return e;
    }
    if (kind == "PlanAdopted") {
        check_keys(j, {"event", "ops", "score"}, context);
        event::PlanAdopted e;
        for (const auto& op : require(j, "ops", context)) e.ops.push_back(op_from(op, context + ".ops"));
        e.score = get_as<double>(require(j, "score", context), context);
        return e;
    }
    if (kind == "OpExecuted") {
        check_keys(j, {"event", "op", "notification", "pd_reading", "observation"}, context);
        return event::OpExecuted{op_from(require(j, "op", context), context + ".op"),
                                 parse_notification(require(j, "notification", context), context),
                                 parse_pd(require(j, "pd_reading", context), context),
                                 observation_from(require(j, "observation", context), context)};
    }
    if (kind == "Replan") {
        check_keys(j, {"event", "reason"}, context);
        return event::Replan{get_as<std::string>(require(j, "reason", context), context)};
    }
    if (kind == "Escalation") {
        check_keys(j, {"event", "level"}, context);
        return event::Escalation{get_as<int>(require(j, "level", context), context)};
    }
    if (kind == "Aborted") {
        check_keys(j, {"event", "reason"}, context);
        return event::Aborted{get_as<std::string>(require(j, "reason", context), context)};
    }
    if (kind == "Finished") {
        check_keys(j, {"event", "fed", "unfed"}, context);
        return event::Finished{get_as<std::map<std::string, std::string>>(require(j, "fed", context), context),
                               string_list(require(j, "unfed", context), context)};
    }
    throw InputError(context + ": unknown event '" + kind + "'");
}

std::string fmt_double(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

template <typename T>
std::string join_map(const std::map<std::string, T>& m) {
    std::string out;
    for (const auto& [k, v] : m) {
        if (!out.empty()) out += ' ';
        out += k + "=" + std::string(to_string(v));
    }
    return out.empty() ? "-" : out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += ' ';
        out += s;
    }
    return out.empty() ? "-" : out;
}

std::string render_ops(const std::vector<OpRecord>& ops) {
    if (ops.empty()) return "(no operation)";
    std::string out;
    for (const auto& op : ops) {
        if (!out.empty()) out += ", ";
        out += (op.direction == Position::Open ? "open " : "close ") + op.device;
    }
    return out;
}

std::string render_observation(const ObservationRecord& r) {
    return "breakers " + join_map(r.breakers) + " | fd " + join_map(r.fault_detectors);
}

struct EventToText {
    std::string operator()(const event::InitialObservation& e) const {
        return "OBS initial " + render_observation(e.observation);
    }
    std::string operator()(const event::HypothesisAdopted& e) const {
        return "HYP level " + std::to_string(e.level) + " p=" + fmt_double("%.6f", e.probability) + " faults " +
               join(e.fault_areas) + " | fd " + join_map(e.fd_modes) + " | ac " + join_map(e.ac_modes);
    }
    std::string operator()(const event::PlanAdopted& e) const {
        return "PLAN " + render_ops(e.ops) + " (score " + fmt_double("%.4f", e.score) + ")";
    }
    std::string operator()(const event::OpExecuted& e) const {
        return "OP " + render_ops({e.op}) + " notification=" + std::string(to_string(e.notification)) +
               " pd=" + std::string(to_string(e.pd_reading)) + "\nOBS " + render_observation(e.observation);
    }
    std::string operator()(const event::Replan& e) const { return "REPLAN " + e.reason; }
    std::string operator()(const event::Escalation& e) const { return "ESC level " + std::to_string(e.level); }
    std::string operator()(const event::Aborted& e) const { return "END aborted: " + e.reason; }
    std::string operator()(const event::Finished& e) const {
        std::string fed;
        for (const auto& [line, cb] : e.fed) {
            if (!fed.empty()) fed += ' ';
            fed += line + "@" + cb;
        }
        return "END finished fed " + (fed.empty() ? std::string("-") : fed) + " | unfed " + join(e.unfed);
    }
};

std::vector<std::string> device_ids(const NetworkTopology& topology, const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (std::size_t d : idx) out.push_back(topology.device(d).id);
    return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

NetworkTopology parse_network(std::string_view text) {
    const json root = parse_json(text, "network");
    check_keys(root, {"lines", "devices", "normal_positions"}, "network");

    std::vector<Line> lines;
    const json& jl = require(root, "lines", "network");
    if (!jl.is_array()) throw InputError("network.lines: expected an array");
    for (const auto& l : jl) {
        check_keys(l, {"id", "load_kw", "capacity_kw", "consumer_weight"}, "network.lines[]");
        Line line;
        line.id = get_as<std::string>(require(l, "id", "network.lines[]"), "network.lines[].id");
        const std::string ctx = "line '" + line.id + "'";
        line.load_kw = get_as<double>(require(l, "load_kw", ctx), ctx + ".load_kw");
        line.capacity_kw = get_as<double>(require(l, "capacity_kw", ctx), ctx + ".capacity_kw");
        read_opt(l, "consumer_weight", line.consumer_weight, ctx);
        lines.push_back(std::move(line));
    }

    std::vector<DeviceSpec> specs;
    const json& jd = require(root, "devices", "network");
    if (!jd.is_array()) throw InputError("network.devices: expected an array");
    for (const auto& d : jd) {
        check_keys(d, {"id", "kind", "endpoints", "capacity_kw"}, "network.devices[]");
        DeviceSpec spec;
        spec.id = get_as<std::string>(require(d, "id", "network.devices[]"), "network.devices[].id");
        const std::string ctx = "device '" + spec.id + "'";
        const auto kind = get_as<std::string>(require(d, "kind", ctx), ctx + ".kind");
        if (kind == "cb")
            spec.kind = DeviceKind::CircuitBreaker;
        else if (kind == "rsd")
            spec.kind = DeviceKind::RemoteSwitch;
        else if (kind == "msd")
            spec.kind = DeviceKind::ManualSwitch;
        else
            throw InputError(ctx + ": kind must be 'cb', 'rsd' or 'msd'");
        const auto ends = get_as<std::vector<std::string>>(require(d, "endpoints", ctx), ctx + ".endpoints");
        if (ends.size() != 2) throw InputError(ctx + ": endpoints must hold exactly two ids");
        spec.endpoints = {ends[0], ends[1]};
        if (auto it = d.find("capacity_kw"); it != d.end()) spec.capacity_kw = get_as<double>(*it, ctx);
        specs.push_back(std::move(spec));
    }

    const auto normal = parse_map<Position>(require(root, "normal_positions", "network"),
                                            "network.normal_positions", parse_position);
    return NetworkTopology::build(std::move(lines), specs, normal);
}

std::string network_to_json(const NetworkTopology& topology) {
    json root;
    root["lines"] = json::array();
    for (const Line& l : topology.lines())
        root["lines"].push_back(
            {{"id", l.id}, {"load_kw", l.load_kw}, {"capacity_kw", l.capacity_kw}, {"consumer_weight", l.consumer_weight}});
    root["devices"] = json::array();
    json normal = json::object();
    for (std::size_t i = 0; i < topology.devices().size(); ++i) {
        const Device& d = topology.device(i);
        json jd = {{"id", d.id}};
        if (d.is_breaker()) {
            jd["kind"] = "cb";
            jd["endpoints"] = {d.source, topology.line(d.line_a).id};
            jd["capacity_kw"] = d.capacity_kw;
        } else {
            jd["kind"] = d.is_remote() ? "rsd" : "msd";
            jd["endpoints"] = {topology.line(d.line_a).id, topology.line(d.line_b).id};
        }
        root["devices"].push_back(std::move(jd));
        normal[d.id] = std::string(to_string(topology.normal_positions()[i]));
    }
    root["normal_positions"] = std::move(normal);
    return root.dump(2) + "\n";
}

Scenario parse_scenario(std::string_view text) {
    const json root = parse_json(text, "scenario");
    check_keys(root, {"faulty_lines", "fd_modes", "pd_modes", "ac_modes", "seed", "initial_positions"}, "scenario");
    Scenario s;
    if (auto it = root.find("faulty_lines"); it != root.end()) s.faulty_lines = string_list(*it, "scenario.faulty_lines");
    if (auto it = root.find("fd_modes"); it != root.end())
        s.fd_modes = parse_map<BehaviorMode>(*it, "scenario.fd_modes", parse_mode);
    if (auto it = root.find("pd_modes"); it != root.end())
        s.pd_modes = parse_map<BehaviorMode>(*it, "scenario.pd_modes", parse_mode);
    if (auto it = root.find("ac_modes"); it != root.end())
        s.ac_modes = parse_map<BehaviorMode>(*it, "scenario.ac_modes", parse_mode);
    read_opt(root, "seed", s.seed, "scenario");
    if (auto it = root.find("initial_positions"); it != root.end())
        s.initial_positions = parse_map<Position>(*it, "scenario.initial_positions", parse_position);
    return s;
}

SessionConfig parse_config(std::string_view text) {
    const json root = parse_json(text, "config");
    check_keys(root, {"priors", "utility", "world", "session"}, "config");
    SessionConfig cfg;
    if (auto it = root.find("priors"); it != root.end()) {
        const std::string ctx = "config.priors";
        check_keys(*it,
                   {"p_liar_given_positive", "p_correct_given_positive", "p_liar_given_negative",
                    "p_correct_given_negative", "p_broken_given_noinfo", "p_ac_to_liar", "p_ac_to_broken",
                    "area_fault_weight"},
                   ctx);
        Priors& p = cfg.priors;
        read_opt(*it, "p_liar_given_positive", p.p_liar_given_positive, ctx);
        read_opt(*it, "p_correct_given_positive", p.p_correct_given_positive, ctx);
        read_opt(*it, "p_liar_given_negative", p.p_liar_given_negative, ctx);
        read_opt(*it, "p_correct_given_negative", p.p_correct_given_negative, ctx);
        read_opt(*it, "p_broken_given_noinfo", p.p_broken_given_noinfo, ctx);
        read_opt(*it, "p_ac_to_liar", p.p_ac_to_liar, ctx);
        read_opt(*it, "p_ac_to_broken", p.p_ac_to_broken, ctx);
        read_opt(*it, "area_fault_weight", p.area_fault_weight, ctx);
    }
    if (auto it = root.find("utility"); it != root.end()) {
        const std::string ctx = "config.utility";
        check_keys(*it, {"w_supply", "w_ops", "w_balance"}, ctx);
        read_opt(*it, "w_supply", cfg.utility.w_supply, ctx);
        read_opt(*it, "w_ops", cfg.utility.w_ops, ctx);
        read_opt(*it, "w_balance", cfg.utility.w_balance, ctx);
    }
    if (auto it = root.find("world"); it != root.end()) {
        const std::string ctx = "config.world";
        check_keys(*it, {"p_ac_to_liar", "p_ac_to_broken"}, ctx);
        read_opt(*it, "p_ac_to_liar", cfg.world.p_ac_to_liar, ctx);
        read_opt(*it, "p_ac_to_broken", cfg.world.p_ac_to_broken, ctx);
    }
    if (auto it = root.find("session"); it != root.end()) {
        const std::string ctx = "config.session";
        check_keys(*it, {"k_max", "replan_max"}, ctx);
        read_opt(*it, "k_max", cfg.k_max, ctx);
        read_opt(*it, "replan_max", cfg.replan_max, ctx);
    }
    try {
        cfg.priors.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("config.priors: ") + e.what());
    }
    if (cfg.k_max < 1) throw InputError("config.session.k_max must be at least 1");
    if (cfg.replan_max < 0) throw InputError("config.session.replan_max must not be negative");
    return cfg;
}

Candidate parse_candidate(const NetworkTopology& topology, std::string_view text) {
    const json root = parse_json(text, "candidate");
    check_keys(root, {"positions", "fault_areas", "fd_modes", "ac_modes", "fd_latched"}, "candidate");
    const std::size_t nd = topology.devices().size();
    Candidate c;
    c.positions = topology.normal_positions();
    c.faulty_lines.assign(topology.lines().size(), false);
    c.fd_mode.assign(nd, BehaviorMode::Correct);
    c.ac_mode.assign(nd, BehaviorMode::Correct);
    c.fd_latched.assign(nd, false);

    auto device = [&](const std::string& id) {
        auto d = topology.find_device(id);
        if (!d) throw InputError("candidate: unknown device '" + id + "'");
        return *d;
    };
    if (auto it = root.find("positions"); it != root.end())
        for (const auto& [id, pos] : parse_map<Position>(*it, "candidate.positions", parse_position))
            c.positions[device(id)] = pos;
    if (auto it = root.find("fault_areas"); it != root.end()) {
        for (const auto& id : string_list(*it, "candidate.fault_areas")) {
            auto a = topology.find_area(id);
            if (!a) throw InputError("candidate: unknown area '" + id + "'");
            c.fault_areas.push_back(*a);
            for (std::size_t l : topology.areas()[*a].lines) c.faulty_lines[l] = true;
        }
        std::sort(c.fault_areas.begin(), c.fault_areas.end());
        c.fault_areas.erase(std::unique(c.fault_areas.begin(), c.fault_areas.end()), c.fault_areas.end());
    }
    if (auto it = root.find("fd_modes"); it != root.end())
        for (const auto& [id, m] : parse_map<BehaviorMode>(*it, "candidate.fd_modes", parse_mode)) {
            const std::size_t d = device(id);
            if (!topology.device(d).has_fault_detector())
                throw InputError("candidate: device '" + id + "' has no fault detector");
            c.fd_mode[d] = m;
        }
    if (auto it = root.find("ac_modes"); it != root.end())
        for (const auto& [id, m] : parse_map<BehaviorMode>(*it, "candidate.ac_modes", parse_mode)) {
            const std::size_t d = device(id);
            if (!topology.device(d).is_remote()) throw InputError("candidate: device '" + id + "' has no actuator");
            c.ac_mode[d] = m;
        }
    if (auto it = root.find("fd_latched"); it != root.end())
        for (const auto& id : string_list(*it, "candidate.fd_latched")) c.fd_latched[device(id)] = true;
    return c;
}

std::string trace_to_jsonl(const Trace& trace) {
    std::string out;
    for (const TraceEvent& e : trace) out += std::visit(EventToJson{}, e).dump() + "\n";
    return out;
}

Trace trace_from_jsonl(std::string_view text) {
    Trace trace;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        const std::string ctx = "trace line " + std::to_string(line_no);
        trace.push_back(event_from(parse_json(line, ctx.c_str()), ctx));
    }
    return trace;
}

std::string render_text(const Trace& trace) {
    std::string out;
    for (const TraceEvent& e : trace) out += std::visit(EventToText{}, e) + "\n";
    return out;
}

std::vector<PlanListEntry> plan_list(const NetworkTopology& topology, const std::vector<RankedPlan>& ranked) {
    std::vector<PlanListEntry> out;
    for (const RankedPlan& r : ranked) {
        PlanListEntry e;
        e.score = r.score;
        e.open = device_ids(topology, r.plan.open_set);
        e.close = device_ids(topology, r.plan.close_set);
        for (const SwitchOp& op : r.plan.sequence) e.sequence.push_back({topology.device(op.device).id, op.direction});
        out.push_back(std::move(e));
    }
    return out;
}

std::string plans_to_json(const std::vector<PlanListEntry>& plans) {
    json arr = json::array();
    for (const PlanListEntry& p : plans) {
        json seq = json::array();
        for (const auto& op : p.sequence) seq.push_back(op_json(op));
        arr.push_back({{"score", p.score}, {"open", p.open}, {"close", p.close}, {"sequence", seq}});
    }
    return arr.dump(2) + "\n";
}

std::vector<PlanListEntry> plans_from_json(std::string_view text) {
    const json root = parse_json(text, "plans");
    if (!root.is_array()) throw InputError("plans: expected an array");
    std::vector<PlanListEntry> out;
    for (const auto& j : root) {
        const std::string ctx = "plans[" + std::to_string(out.size()) + "]";
        check_keys(j, {"score", "open", "close", "sequence"}, ctx);
        PlanListEntry e;
        e.score = get_as<double>(require(j, "score", ctx), ctx);
        e.open = string_list(require(j, "open", ctx), ctx);
        e.close = string_list(require(j, "close", ctx), ctx);
        for (const auto& op : require(j, "sequence", ctx)) e.sequence.push_back(op_from(op, ctx + ".sequence"));
        out.push_back(std::move(e));
    }
    return out;
}

BeliefRecord belief_record(const NetworkTopology& topology, const Belief& belief) {
    BeliefRecord r;
    r.level = belief.level;
    for (std::size_t i = 0; i < belief.size(); ++i) {
        const Candidate& c = belief.entries[i].candidate;
        BeliefRecordEntry e;
        e.log_probability = belief.entries[i].log_probability;
        e.probability = belief.probability(i);
        for (std::size_t a : c.fault_areas) e.fault_areas.push_back(topology.areas()[a].id);
        for (std::size_t d = 0; d < topology.devices().size(); ++d) {
            const Device& dev = topology.device(d);
            if (dev.has_fault_detector() && c.fd_mode[d] != BehaviorMode::Correct) e.fd_modes.emplace(dev.id, c.fd_mode[d]);
            if (dev.is_remote() && c.ac_mode[d] != BehaviorMode::Correct) e.ac_modes.emplace(dev.id, c.ac_mode[d]);
            if (c.positions[d] == Position::Open) e.open_devices.push_back(dev.id);
            if (c.fd_latched[d]) e.latched.push_back(dev.id);
        }
        r.candidates.push_back(std::move(e));
    }
    // Canonical order is kept among equal probabilities.
    std::stable_sort(r.candidates.begin(), r.candidates.end(),
                     [](const BeliefRecordEntry& a, const BeliefRecordEntry& b) {
                         return a.log_probability > b.log_probability;
                     });
    return r;
}

std::string belief_to_json(const BeliefRecord& record) {
    json cands = json::array();
    for (const BeliefRecordEntry& e : record.candidates)
        cands.push_back({{"probability", e.probability},
                         {"log_probability", e.log_probability},
                         {"fault_areas", e.fault_areas},
                         {"fd_modes", dump_map(e.fd_modes)},
                         {"ac_modes", dump_map(e.ac_modes)},
                         {"open_devices", e.open_devices},
                         {"latched", e.latched}});
    json root = {{"level", record.level}, {"candidates", cands}};
    return root.dump(2) + "\n";
}

BeliefRecord belief_from_json(std::string_view text) {
    const json root = parse_json(text, "belief");
    check_keys(root, {"level", "candidates"}, "belief");
    BeliefRecord r;
    r.level = get_as<int>(require(root, "level", "belief"), "belief.level");
    for (const auto& j : require(root, "candidates", "belief")) {
        const std::string ctx = "belief.candidates[" + std::to_string(r.candidates.size()) + "]";
        check_keys(j, {"probability", "log_probability", "fault_areas", "fd_modes", "ac_modes", "open_devices", "latched"},
                   ctx);
        BeliefRecordEntry e;
        e.probability = get_as<double>(require(j, "probability", ctx), ctx);
        e.log_probability = get_as<double>(require(j, "log_probability", ctx), ctx);
        e.fault_areas = string_list(require(j, "fault_areas", ctx), ctx);
        e.fd_modes = parse_map<BehaviorMode>(require(j, "fd_modes", ctx), ctx, parse_mode);
        e.ac_modes = parse_map<BehaviorMode>(require(j, "ac_modes", ctx), ctx, parse_mode);
        e.open_devices = string_list(require(j, "open_devices", ctx), ctx);
        e.latched = string_list(require(j, "latched", ctx), ctx);
        r.candidates.push_back(std::move(e));
    }
    return r;
}

}  // namespace restoration
