#include "linkrev/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "linkrev/error.hpp"
#include "linkrev/reversal.hpp"

namespace linkrev {

namespace {

struct Token {
    std::string_view text;
    int column = 1;
};

/// Splits on whitespace and commas; '#' ends the line.
std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const char c = line[pos];
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
            ++pos;
            continue;
        }
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != ',' && line[pos] != '#' &&
               line[pos] != '\r') {
            ++pos;
        }
        out.push_back({line.substr(start, pos - start), static_cast<int>(start) + 1});
    }
    return out;
}

template <typename Int>
Int parse_int(const Token& tok, int line, std::string_view what) {
    Int value{};
    const auto* first = tok.text.data();
    const auto* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw SyntaxError(line, tok.column, "expected " + std::string(what) + ", got '" + std::string(tok.text) + "'");
    }
    return value;
}

NodeId parse_node(const Token& tok, int line) {
    if (tok.text == "D" || tok.text == "d") return kDestination;
    return parse_int<NodeId>(tok, line, "a node id or D");
}

Edge parse_edge_token(const Token& tok, int line) {
    const auto dash = tok.text.find('-');
    if (dash == std::string_view::npos || dash == 0 || dash + 1 == tok.text.size()) {
        throw SyntaxError(line, tok.column, "expected a link like 1-3 or D-1, got '" + std::string(tok.text) + "'");
    }
    const Token lhs{tok.text.substr(0, dash), tok.column};
    const Token rhs{tok.text.substr(dash + 1), tok.column + static_cast<int>(dash) + 1};
    return Edge(parse_node(lhs, line), parse_node(rhs, line));
}

std::string node_text(NodeId i) { return i == kDestination ? "D" : std::to_string(i); }

void expect_args(const std::vector<Token>& toks, std::size_t lo, std::size_t hi, int line) {
    if (toks.size() < lo) throw SyntaxError(line, toks.front().column, "too few arguments to '" + std::string(toks.front().text) + "'");
    if (toks.size() > hi) throw SyntaxError(line, toks[hi].column, "unexpected token '" + std::string(toks[hi].text) + "'");
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        auto toks = tokenize(line);
        if (!toks.empty()) fn(line_no, toks);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenario

ScenarioFile parse_scenario_file(std::string_view text) {
    ScenarioFile file;
    bool have_header = false;
    bool have_nodes = false;
    for_each_line(text, [&](int line, const std::vector<Token>& toks) {
        const auto& key = toks.front().text;
        if (!have_header) {
            if (key != "linkrev-scenario") {
                throw SyntaxError(line, toks.front().column, "expected header 'linkrev-scenario <version>'");
            }
            expect_args(toks, 2, 2, line);
            file.version = parse_int<int>(toks[1], line, "a version number");
            if (file.version != 1) throw SyntaxError(line, toks[1].column, "unsupported scenario version");
            have_header = true;
            return;
        }
        if (key == "name") {
            expect_args(toks, 2, 2, line);
            file.name = std::string(toks[1].text);
        } else if (key == "nodes") {
            expect_args(toks, 2, 2, line);
            file.node_count = parse_int<int>(toks[1], line, "a node count");
            if (file.node_count < 1) throw SyntaxError(line, toks[1].column, "node count must be at least 1");
            have_nodes = true;
        } else if (key == "edges") {
            expect_args(toks, 2, toks.size(), line);
            for (std::size_t k = 1; k < toks.size(); ++k) file.edges.push_back(parse_edge_token(toks[k], line));
        } else if (key == "edge") {
            expect_args(toks, 3, 3, line);
            file.edges.emplace_back(parse_node(toks[1], line), parse_node(toks[2], line));
        } else if (key == "heights") {
            std::vector<Height> hs;
            for (std::size_t k = 1; k < toks.size(); ++k) {
                const auto h = parse_int<Height>(toks[k], line, "an integer height");
                if (h <= 0) {
                    throw Error(ErrorKind::HeightOutOfRange,
                                "line " + std::to_string(line) + ", column " + std::to_string(toks[k].column) +
                                    ": initial height of node " + std::to_string(k) +
                                    " must be a positive integer, got " + std::to_string(h));
                }
                hs.push_back(h);
            }
            file.heights = std::move(hs);
        } else if (key == "seed") {
            expect_args(toks, 2, 2, line);
            file.seed = parse_int<std::uint64_t>(toks[1], line, "an unsigned seed");
        } else if (key == "event") {
            expect_args(toks, 3, 5, line);
            SimEvent ev;
            ev.at_step = parse_int<std::int64_t>(toks[1], line, "an event step");
            if (ev.at_step < 0) throw SyntaxError(line, toks[1].column, "event step must be nonnegative");
            const auto kind = toks[2].text;
            if (kind == "remove-node") {
                expect_args(toks, 4, 4, line);
                ev.kind = EventKind::RemoveNode;
                ev.node = parse_node(toks[3], line);
            } else if (kind == "remove-link") {
                expect_args(toks, 5, 5, line);
                ev.kind = EventKind::RemoveLink;
                const Edge e(parse_node(toks[3], line), parse_node(toks[4], line));
                ev.node = e.a;
                ev.other = e.b;
            } else if (kind == "sleep") {
                expect_args(toks, 4, 5, line);
                ev.kind = EventKind::Sleep;
                ev.node = parse_node(toks[3], line);
                if (toks.size() == 5) {
                    ev.duration = parse_int<std::int64_t>(toks[4], line, "a sleep duration");
                    if (ev.duration < 0) throw SyntaxError(line, toks[4].column, "sleep duration must be nonnegative");
                }
            } else if (kind == "wake") {
                expect_args(toks, 4, 4, line);
                ev.kind = EventKind::Wake;
                ev.node = parse_node(toks[3], line);
            } else if (kind == "add-node" || kind == "add-link") {
                throw Error(ErrorKind::AdditionForbidden, "line " + std::to_string(line) +
                                                              ": topology additions are not supported");
            } else {
                throw SyntaxError(line, toks[2].column, "unknown event kind '" + std::string(kind) + "'");
            }
            file.events.push_back(ev);
        } else {
            throw SyntaxError(line, toks.front().column, "unknown directive '" + std::string(key) + "'");
        }
    });
    if (!have_header) throw SyntaxError(1, 1, "missing 'linkrev-scenario' header");
    if (!have_nodes) throw SyntaxError(1, 1, "missing 'nodes' directive");
    return file;
}

Scenario Scenario::from_file(ScenarioFile file) {
    Scenario s;
    s.topology = Topology(file.node_count, file.edges);
    if (!s.topology.is_connected()) {
        throw Error(ErrorKind::DisconnectedGraph, "some node has no path to the destination");
    }
    if (file.heights) {
        if (static_cast<int>(file.heights->size()) != file.node_count) {
            throw Error(ErrorKind::Validation, "expected " + std::to_string(file.node_count) + " heights, got " +
                                                   std::to_string(file.heights->size()));
        }
        s.heights = HeightAssignment::from_heights(*file.heights);
    } else {
        s.heights = HeightAssignment::hop_counts(s.topology);
    }
    // The partition certificate lets t reach N + 1, so z(N + 1) must be representable.
    if (file.node_count + 1 > max_representable_t(s.heights.h_max())) {
        throw Error(ErrorKind::OverflowRisk, "z(N+1) = 2^N (2 h_max + 1) exceeds 63 bits for N=" +
                                                 std::to_string(file.node_count) +
                                                 ", h_max=" + std::to_string(s.heights.h_max()));
    }
    for (const auto& ev : file.events) {
        const bool in_range = ev.node >= 0 && ev.node <= file.node_count;
        if (!in_range) throw Error(ErrorKind::UnknownNode, "event names node " + std::to_string(ev.node));
        switch (ev.kind) {
            case EventKind::RemoveNode:
            case EventKind::Sleep:
            case EventKind::Wake:
                if (ev.node == kDestination) throw Error(ErrorKind::Validation, "events cannot target the destination");
                break;
            case EventKind::RemoveLink:
                if (!s.topology.has_edge(ev.node, ev.other)) {
                    throw Error(ErrorKind::Validation, "remove-link names a link that does not exist: " +
                                                           node_text(ev.node) + "-" + node_text(ev.other));
                }
                break;
        }
    }
    s.file = std::move(file);
    return s;
}

Scenario parse_scenario(std::string_view text) { return Scenario::from_file(parse_scenario_file(text)); }

std::string serialize_scenario(const ScenarioFile& file) {
    std::ostringstream out;
    out << "linkrev-scenario " << file.version << "\n";
    if (!file.name.empty()) out << "name " << file.name << "\n";
    out << "nodes " << file.node_count << "\n";
    if (!file.edges.empty()) {
        out << "edges";
        for (const auto& e : file.edges) out << ' ' << node_text(e.a) << '-' << node_text(e.b);
        out << "\n";
    }
    if (file.heights) {
        out << "heights";
        for (Height h : *file.heights) out << ' ' << h;
        out << "\n";
    }
    if (file.seed) out << "seed " << *file.seed << "\n";
    for (const auto& ev : file.events) {
        out << "event " << ev.at_step << ' ';
        switch (ev.kind) {
            case EventKind::RemoveNode: out << "remove-node " << node_text(ev.node); break;
            case EventKind::RemoveLink: out << "remove-link " << node_text(ev.node) << ' ' << node_text(ev.other); break;
            case EventKind::Sleep:
                out << "sleep " << node_text(ev.node);
                if (ev.duration > 0) out << ' ' << ev.duration;
                break;
            case EventKind::Wake: out << "wake " << node_text(ev.node); break;
        }
        out << "\n";
    }
    return out.str();
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Validation, "cannot open scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Schedule

Schedule parse_schedule(std::string_view text) {
    Schedule schedule;
    bool have_header = false;
    bool have_policy = false;
    for_each_line(text, [&](int line, const std::vector<Token>& toks) {
        const auto& key = toks.front().text;
        if (!have_header) {
            if (key != "linkrev-schedule") throw SyntaxError(line, toks.front().column, "expected 'linkrev-schedule 1'");
            expect_args(toks, 2, 2, line);
            if (parse_int<int>(toks[1], line, "a version number") != 1) {
                throw SyntaxError(line, toks[1].column, "unsupported schedule version");
            }
            have_header = true;
        } else if (key == "policy") {
            expect_args(toks, 2, 2, line);
            auto p = parse_policy(toks[1].text);
            if (!p) throw SyntaxError(line, toks[1].column, "unknown policy '" + std::string(toks[1].text) + "'");
            schedule.policy = *p;
            have_policy = true;
        } else if (key == "seed") {
            expect_args(toks, 2, 2, line);
            schedule.seed = parse_int<std::uint64_t>(toks[1], line, "an unsigned seed");
        } else if (key == "step") {
            expect_args(toks, 2, toks.size(), line);
            std::vector<NodeId> subset;
            for (std::size_t k = 1; k < toks.size(); ++k) subset.push_back(parse_node(toks[k], line));
            schedule.steps.push_back(std::move(subset));
        } else {
            throw SyntaxError(line, toks.front().column, "unknown directive '" + std::string(key) + "'");
        }
    });
    if (!have_header) throw SyntaxError(1, 1, "missing 'linkrev-schedule' header");
    if (!have_policy) throw SyntaxError(1, 1, "missing 'policy' directive");
    if (schedule.policy != SchedulePolicy::FixedSequence && !schedule.steps.empty()) {
        throw Error(ErrorKind::ScheduleInvalid, "step lines are only valid for the fixed policy");
    }
    return schedule;
}

std::string serialize_schedule(const Schedule& schedule) {
    std::ostringstream out;
    out << "linkrev-schedule 1\n";
    out << "policy " << policy_name(schedule.policy) << "\n";
    if (schedule.policy == SchedulePolicy::SingleRandom || schedule.policy == SchedulePolicy::SubsetRandom ||
        schedule.seed != 0) {
        out << "seed " << schedule.seed << "\n";
    }
    for (const auto& step : schedule.steps) {
        out << "step";
        for (NodeId i : step) out << ' ' << i;
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Trace export

std::optional<TraceFormat> parse_trace_format(std::string_view name) {
    if (name == "jsonl") return TraceFormat::Jsonl;
    if (name == "csv") return TraceFormat::Csv;
    if (name == "dot-frames" || name == "dot") return TraceFormat::DotFrames;
    return std::nullopt;
}

namespace {

using nlohmann::json;

json state_json(const NodeState& state) {
    return std::visit(
        [](const auto& s) -> json {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, GbFullState>) {
                return {{"h", s.h}};
            } else if constexpr (std::is_same_v<S, GbPartialState>) {
                return {{"p", s.p}, {"h", s.h}};
            } else if constexpr (std::is_same_v<S, UnboundedState>) {
                return {{"t", s.t}, {"h", s.h}};
            } else if constexpr (std::is_same_v<S, TauState>) {
                return {{"tau", static_cast<int>(s.tau)}};
            } else {
                return {{"delta", static_cast<int>(s.delta)}};
            }
        },
        state);
}

std::string hex64(std::uint64_t v) {
    std::ostringstream out;
    out << "0x" << std::hex << v;
    return out.str();
}

std::string_view event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::RemoveNode: return "remove-node";
        case EventKind::RemoveLink: return "remove-link";
        case EventKind::Sleep: return "sleep";
        case EventKind::Wake: return "wake";
    }
    return "unknown";
}

std::string emit_jsonl(const Trace& trace) {
    std::ostringstream out;
    std::size_t next_event = 0;
    auto flush_events = [&](std::int64_t upto) {
        while (next_event < trace.applied_events.size() && trace.applied_events[next_event].at_step <= upto) {
            const auto& ev = trace.applied_events[next_event++];
            json rec{{"type", "event"}, {"before_step", ev.at_step}, {"kind", event_kind_name(ev.kind)}, {"node", ev.node}};
            if (ev.kind == EventKind::RemoveLink) rec["other"] = ev.other;
            if (ev.kind == EventKind::Sleep && ev.duration > 0) rec["duration"] = ev.duration;
            out << rec.dump() << "\n";
        }
    };
    for (const auto& step : trace.steps) {
        flush_events(step.index);
        json states = json::object();
        for (const auto& [i, s] : step.new_states) states[std::to_string(i)] = state_json(s);
        json rec{{"type", "step"},       {"step", step.index},          {"stuck", step.stuck},
                 {"updated", step.updated}, {"states", states},         {"reversals", step.reversals},
                 {"dag_hash", hex64(step.dag_hash)}};
        if (trace.dags_recorded) {
            json arcs = json::array();
            for (const auto& a : step.dag.arcs()) arcs.push_back({a.from, a.to});
            rec["arcs"] = std::move(arcs);
        }
        out << rec.dump() << "\n";
    }
    flush_events(std::numeric_limits<std::int64_t>::max());
    json per_node = json::object();
    for (NodeId i = 1; i < static_cast<NodeId>(trace.totals.updates_per_node.size()); ++i) {
        per_node[std::to_string(i)] = trace.totals.updates_per_node[i];
    }
    json totals{{"type", "totals"},
                {"scenario", trace.scenario_name},
                {"scheme", scheme_name(trace.scheme)},
                {"outcome", outcome_name(trace.outcome)},
                {"diagnostic", trace.diagnostic},
                {"steps", trace.totals.steps},
                {"total_updates", trace.totals.total_updates},
                {"total_reversals", trace.totals.total_reversals},
                {"max_state_bits", trace.totals.max_state_bits},
                {"updates_per_node", per_node}};
    out << totals.dump() << "\n";
    return out.str();
}

std::string emit_csv(const Trace& trace) {
    std::ostringstream out;
    out << "scenario,scheme,outcome,steps,total_updates,total_reversals,max_state_bits,updates_per_node\n";
    out << trace.scenario_name << ',' << scheme_name(trace.scheme) << ',' << outcome_name(trace.outcome) << ','
        << trace.totals.steps << ',' << trace.totals.total_updates << ',' << trace.totals.total_reversals << ','
        << trace.totals.max_state_bits << ',';
    for (std::size_t i = 1; i < trace.totals.updates_per_node.size(); ++i) {
        if (i > 1) out << ';';
        out << trace.totals.updates_per_node[i];
    }
    out << "\n";
    return out.str();
}

void dot_frame(std::ostringstream& out, std::size_t frame, const RoutingDag& dag) {
    out << "digraph frame_" << frame << " {\n";
    out << "  D [shape=doublecircle];\n";
    for (const auto& a : dag.arcs()) out << "  " << node_text(a.from) << " -> " << node_text(a.to) << ";\n";
    out << "}\n";
}

std::string emit_dot(const Trace& trace) {
    if (!trace.dags_recorded) throw Error(ErrorKind::Validation, "dot frames need a trace recorded with DAG dumps");
    std::ostringstream out;
    dot_frame(out, 0, trace.initial_dag);
    for (std::size_t k = 0; k < trace.steps.size(); ++k) dot_frame(out, k + 1, trace.steps[k].dag);
    return out.str();
}

}  // namespace

std::string emit_trace(const Trace& trace, TraceFormat format) {
    switch (format) {
        case TraceFormat::Jsonl: return emit_jsonl(trace);
        case TraceFormat::Csv: return emit_csv(trace);
        case TraceFormat::DotFrames: return emit_dot(trace);
    }
    return {};
}

}  // namespace linkrev
