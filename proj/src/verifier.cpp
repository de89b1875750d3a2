#include "linkrev/verifier.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "linkrev/error.hpp"
#include "linkrev/reversal.hpp"
#include "linkrev/scenario_io.hpp"

namespace linkrev {

std::string report_json(const CheckReport& report) {
    nlohmann::json j{{"check", report.check},
                     {"scenario", report.scenario},
                     {"verdict", report.passed ? "pass" : "fail"},
                     {"informational", report.informational},
                     {"detail", report.detail}};
    if (report.scheme) j["scheme"] = scheme_name(*report.scheme);
    if (report.step) j["step"] = *report.step;
    if (!report.passed) {
        j["counterexample"] = {{"scenario", report.counterexample_scenario},
                               {"schedule", report.counterexample_schedule}};
    }
    return j.dump();
}

namespace {

CheckReport make_report(std::string check, const Scenario& scenario, std::optional<SchemeId> scheme) {
    CheckReport r;
    r.check = std::move(check);
    r.scenario = scenario.name();
    r.scheme = scheme;
    return r;
}

void fail(CheckReport& r, const Scenario& scenario, const Schedule& schedule, std::optional<std::int64_t> step,
          std::string detail) {
    r.passed = false;
    r.step = step;
    r.detail = std::move(detail);
    r.counterexample_scenario = serialize_scenario(scenario.file);
    r.counterexample_schedule = serialize_schedule(schedule);
}

std::string node_list(const std::vector<NodeId>& v) {
    std::ostringstream out;
    out << '{';
    for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << v[k];
    out << '}';
    return out.str();
}

/// What one recorded step looked like, rebuilt from the scenario and the trace.
struct StepView {
    const StepRecord& record;
    const Topology& live;
    const StateVector& before;
    const StateVector& after;
    const RoutingDag& dag_before;
    const RoutingDag& dag_after;
    const std::vector<std::int64_t>& counts_after;
};

struct ReplayEnd {
    Topology live;
    StateVector states;
    RoutingDag dag;
    std::vector<std::int64_t> counts;
};

/// Re-executes the trace's topology events and recorded state changes. The
/// callback returns a failure message to stop early.
std::optional<std::string> replay(const Trace& trace, const Scenario& scenario,
                                  const std::function<std::optional<std::string>(const StepView&)>& on_step,
                                  ReplayEnd* end = nullptr) {
    const auto& h0 = scenario.heights;
    Topology topo = scenario.topology;
    std::vector<bool> awake(static_cast<std::size_t>(scenario.node_count()) + 1, true);
    StateVector states = trace.initial_states;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(scenario.node_count()) + 1, 0);
    std::size_t next_event = 0;
    auto apply_events = [&](std::int64_t upto) {
        while (next_event < trace.applied_events.size() && trace.applied_events[next_event].at_step <= upto) {
            apply_topology_event(topo, awake, trace.applied_events[next_event++]);
        }
    };

    for (const auto& rec : trace.steps) {
        apply_events(rec.index);
        const Topology live = topo.restricted_to(awake);
        const RoutingDag dag_before = routing_dag(states, live, trace.scheme, h0);
        StateVector after = states;
        for (const auto& [i, s] : rec.new_states) {
            after[i] = s;
            ++counts[i];
        }
        const RoutingDag dag_after = routing_dag(after, live, trace.scheme, h0);
        if (auto msg = on_step(StepView{rec, live, states, after, dag_before, dag_after, counts})) return msg;
        states = std::move(after);
    }
    apply_events(std::numeric_limits<std::int64_t>::max());
    if (end) {
        end->live = topo.restricted_to(awake);
        end->dag = routing_dag(states, end->live, trace.scheme, h0);
        end->states = std::move(states);
        end->counts = std::move(counts);
    }
    return std::nullopt;
}

/// Per-node invariants for the state a node holds after `count` updates.
std::optional<std::string> node_invariants(SchemeId scheme, NodeId i, const NodeState& state, std::int64_t count,
                                           const Scenario& scenario) {
    const int n = scenario.node_count();
    const Height h_max = scenario.heights.h_max();
    const Height h0 = scenario.heights.initial(i);
    std::ostringstream why;
    switch (scheme) {
        case SchemeId::NoFull:
        case SchemeId::NoPartial: {
            const auto& s = std::get<UnboundedState>(state);
            if (s.t != count) {
                why << "node " << i << " has t=" << s.t << " after " << count << " updates";
                return why.str();
            }
            const auto mode = scheme == SchemeId::NoFull ? ReversalMode::Full : ReversalMode::Partial;
            const Height expected = closed_form_height(mode, s.t, h0, h_max);
            if (s.h != expected) {
                why << "node " << i << " height " << s.h << " differs from closed form " << expected << " at t=" << s.t;
                return why.str();
            }
            if (mode == ReversalMode::Full) {
                if (!(s.t * h_max < s.h && s.h <= (s.t + 1) * h_max)) {
                    why << "node " << i << " height " << s.h << " outside (t h_max, (t+1) h_max] at t=" << s.t;
                    return why.str();
                }
            } else if (s.t >= 1) {
                if (!(z_value(s.t - 1, h_max) < s.h && s.h < z_value(s.t, h_max))) {
                    why << "node " << i << " height " << s.h << " outside (z(t-1), z(t)) at t=" << s.t;
                    return why.str();
                }
            }
            break;
        }
        case SchemeId::TwoBitFull:
        case SchemeId::TwoBitPartial:
            if (state_bits(state) > 2) {
                why << "node " << i << " uses " << state_bits(state) << " state bits";
                return why.str();
            }
            if (std::get<TauState>(state).tau != static_cast<unsigned>(count & 3)) {
                why << "node " << i << " tau differs from its update count mod 4";
                return why.str();
            }
            break;
        case SchemeId::OneBitFull:
            if (state_bits(state) > 1) {
                why << "node " << i << " uses " << state_bits(state) << " state bits";
                return why.str();
            }
            if (std::get<DeltaState>(state).delta != static_cast<unsigned>(count & 1)) {
                why << "node " << i << " delta differs from its update count mod 2";
                return why.str();
            }
            break;
        default: break;
    }
    // GbPartial and the increment baseline carry no t-bound.
    if (scheme != SchemeId::GbPartial && scheme != SchemeId::BaselineIncrement && count > n) {
        why << "node " << i << " updated " << count << " times, more than N=" << n;
        return why.str();
    }
    return std::nullopt;
}

std::optional<std::string> link_invariants(SchemeId scheme, const Topology& live, const StateVector& states,
                                           const std::vector<std::int64_t>& counts) {
    for (const auto& e : live.edges()) {
        if (e.a == kDestination) continue;
        std::ostringstream why;
        if (scheme == SchemeId::GbPartial) {
            const auto pa = std::get<GbPartialState>(states[e.a]).p;
            const auto pb = std::get<GbPartialState>(states[e.b]).p;
            if (std::abs(pa - pb) > 1) {
                why << "neighbours " << e.a << " and " << e.b << " have p values " << pa << " and " << pb;
                return why.str();
            }
        } else if (scheme != SchemeId::BaselineIncrement && std::abs(counts[e.a] - counts[e.b]) > 1) {
            why << "neighbours " << e.a << " and " << e.b << " have update counts " << counts[e.a] << " and "
                << counts[e.b];
            return why.str();
        }
    }
    return std::nullopt;
}

}  // namespace

CheckReport check_step_invariants(const Trace& trace, const Scenario& scenario) {
    auto report = make_report("step-invariants", scenario, trace.scheme);
    const auto& h0 = scenario.heights;
    const auto rule = update_rule(trace.scheme);
    const GlobalConstants constants{scenario.node_count(), h0.h_max()};
    std::int64_t failed_step = -1;

    // Initial state.
    for (NodeId i = 1; i <= scenario.node_count(); ++i) {
        if (auto msg = node_invariants(trace.scheme, i, trace.initial_states[i], 0, scenario)) {
            fail(report, scenario, trace.replay_schedule(), 0, "initial state: " + *msg);
            return report;
        }
    }

    auto check = [&](const StepView& v) -> std::optional<std::string> {
        failed_step = v.record.index;
        std::ostringstream why;
        const auto stuck = stuck_set(v.dag_before, v.live);
        if (stuck != v.record.stuck) {
            why << "recorded stuck set " << node_list(v.record.stuck) << " but states give " << node_list(stuck);
            return why.str();
        }
        if (stuck.empty() == !is_destination_oriented(v.dag_before, v.live) && v.live.is_connected()) {
            return std::string("stuck-set emptiness disagrees with destination orientation");
        }
        if (v.record.updated.empty()) return std::string("step updates no node");
        for (const auto& [i, s] : v.record.new_states) {
            if (!std::binary_search(stuck.begin(), stuck.end(), i)) {
                why << "node " << i << " updated without being stuck";
                return why.str();
            }
            if (!strictly_advances(trace.scheme, i, v.before[i], s)) {
                why << "update of node " << i << " does not strictly advance its state";
                return why.str();
            }
            NodeState expected;
            if (const auto* aware = std::get_if<NeighborAwareRule>(&rule)) {
                std::vector<NodeState> nbrs;
                for (NodeId j : v.live.neighbors(i)) {
                    if (j != kDestination) nbrs.push_back(v.before[j]);
                }
                expected = (*aware)(v.before[i], nbrs);
            } else {
                expected = std::get<NeighborObliviousRule>(rule)(v.before[i], constants);
            }
            if (!(expected == s)) {
                why << "node " << i << " holds a state its update rule does not produce";
                return why.str();
            }
        }
        if (v.dag_after.hash() != v.record.dag_hash) return std::string("recorded DAG hash does not match the states");
        if (trace.dags_recorded && !(v.dag_after == v.record.dag)) {
            return std::string("recorded DAG dump does not match the states");
        }
        if (!v.dag_after.is_acyclic()) return std::string("routing graph has a directed cycle");
        for (NodeId i = 1; i <= scenario.node_count(); ++i) {
            if (auto msg = node_invariants(trace.scheme, i, v.after[i], v.counts_after[i], scenario)) return msg;
        }
        return link_invariants(trace.scheme, v.live, v.after, v.counts_after);
    };

    ReplayEnd end;
    if (auto msg = replay(trace, scenario, check, &end)) {
        fail(report, scenario, trace.replay_schedule(), failed_step, *msg);
        return report;
    }
    if (end.counts != trace.totals.updates_per_node) {
        fail(report, scenario, trace.replay_schedule(), std::nullopt, "per-node update totals disagree with the steps");
        return report;
    }
    if (trace.outcome == Outcome::Converged && !stuck_set(end.dag, end.live).empty()) {
        fail(report, scenario, trace.replay_schedule(), std::nullopt, "converged trace ends with stuck nodes");
        return report;
    }
    report.detail = std::to_string(trace.steps.size()) + " steps checked";
    return report;
}

CheckReport check_reversal_semantics(const Trace& trace, const Scenario& scenario) {
    auto report = make_report("reversal-semantics", scenario, trace.scheme);
    const bool full = is_full_reversal(trace.scheme);
    const bool partial = is_partial_reversal(trace.scheme);
    if (!full && !partial) {
        report.informational = true;
        report.detail = "no reversal semantics defined for this scheme";
        return report;
    }
    const auto n = static_cast<std::size_t>(scenario.node_count()) + 1;
    // reversed_toward[i]: neighbours that reversed their link to i since i's last update.
    std::vector<std::set<NodeId>> reversed_toward(n);
    std::vector<NodeId> must_stay_stuck;
    std::int64_t failed_step = -1;
    std::int64_t double_updates = 0;

    auto check = [&](const StepView& v) -> std::optional<std::string> {
        failed_step = v.record.index;
        std::ostringstream why;
        for (NodeId i : must_stay_stuck) {
            if (!std::binary_search(v.record.stuck.begin(), v.record.stuck.end(), i)) {
                why << "node " << i << " reversed nothing yet is no longer stuck";
                return why.str();
            }
        }
        must_stay_stuck.clear();
        for (NodeId i : v.record.updated) {
            std::set<NodeId> flipped;
            std::set<NodeId> neighbours;
            for (NodeId j : v.live.neighbors(i)) {
                neighbours.insert(j);
                // i was stuck, so every link pointed at i before the update.
                if (link_points_to(i, j, v.after, trace.scheme, scenario.heights)) flipped.insert(j);
            }
            if (full) {
                if (flipped != neighbours) {
                    why << "full reversal at node " << i << " left incoming links";
                    return why.str();
                }
                continue;
            }
            std::set<NodeId> expected;
            for (NodeId j : neighbours) {
                if (!reversed_toward[i].contains(j)) expected.insert(j);
            }
            if (expected.empty()) {
                if (trace.scheme == SchemeId::GbPartial) {
                    expected = neighbours;
                } else {
                    must_stay_stuck.push_back(i);
                    ++double_updates;
                }
            }
            if (flipped != expected) {
                why << "partial reversal at node " << i << " reversed " << node_list({flipped.begin(), flipped.end()})
                    << ", expected " << node_list({expected.begin(), expected.end()});
                return why.str();
            }
        }
        // Bookkeeping after all updates of the step are known.
        for (NodeId i : v.record.updated) {
            reversed_toward[i].clear();
            for (NodeId j : v.live.neighbors(i)) {
                if (j != kDestination && link_points_to(i, j, v.after, trace.scheme, scenario.heights)) {
                    reversed_toward[j].insert(i);
                }
            }
        }
        return std::nullopt;
    };

    if (auto msg = replay(trace, scenario, check)) {
        fail(report, scenario, trace.replay_schedule(), failed_step, *msg);
        return report;
    }
    if (!must_stay_stuck.empty() && trace.outcome == Outcome::Converged) {
        fail(report, scenario, trace.replay_schedule(), std::nullopt,
             "node " + std::to_string(must_stay_stuck.front()) + " reversed nothing in the final step");
        return report;
    }
    report.detail = std::to_string(trace.steps.size()) + " steps checked";
    if (double_updates > 0) report.detail += ", " + std::to_string(double_updates) + " all-reversed double updates";
    return report;
}

CheckReport check_initial_greedy_stability(const Trace& trace, const Scenario& scenario) {
    auto report = make_report("who-updates", scenario, trace.scheme);
    const bool mid_run_events = std::any_of(trace.applied_events.begin(), trace.applied_events.end(),
                                            [](const SimEvent& e) { return e.at_step > 0; });
    if (mid_run_events) {
        report.informational = true;
        report.detail = "topology changed mid-run; initial DAG does not govern later updates";
        return report;
    }
    Topology topo = scenario.topology;
    std::vector<bool> awake(static_cast<std::size_t>(scenario.node_count()) + 1, true);
    for (const auto& e : trace.applied_events) apply_topology_event(topo, awake, e);
    const Topology live = topo.restricted_to(awake);
    const auto reached = reaches_destination(trace.initial_dag, live);
    for (const auto& rec : trace.steps) {
        for (NodeId i : rec.updated) {
            if (reached[i]) {
                fail(report, scenario, trace.replay_schedule(), rec.index,
                     "node " + std::to_string(i) + " had an initial path to the destination but updated");
                return report;
            }
        }
    }
    std::int64_t updaters = 0;
    for (std::size_t i = 1; i < trace.totals.updates_per_node.size(); ++i) updaters += trace.totals.updates_per_node[i] > 0;
    report.detail = std::to_string(updaters) + " updating nodes, all initially without a path";
    return report;
}

CheckReport check_convergence(const Trace& trace, const Scenario& scenario) {
    auto report = make_report("convergence", scenario, trace.scheme);
    if (trace.outcome != Outcome::Converged) {
        fail(report, scenario, trace.replay_schedule(), std::nullopt,
             std::string("run ended ") + std::string(outcome_name(trace.outcome)) + ": " + trace.diagnostic);
        return report;
    }
    ReplayEnd end;
    replay(trace, scenario, [](const StepView&) { return std::nullopt; }, &end);
    if (!stuck_set(end.dag, end.live).empty() || !is_destination_oriented(end.dag, end.live)) {
        fail(report, scenario, trace.replay_schedule(), std::nullopt, "final DAG is not destination-oriented");
        return report;
    }
    const auto limit = default_step_limit(scenario.node_count());
    report.detail = "converged in " + std::to_string(trace.steps.size()) + " steps (cap " + std::to_string(limit) + ")";
    return report;
}

CheckReport check_scheme_equivalence(const Scenario& scenario, const Schedule& schedule, SchemeId reference,
                                     SchemeId shadow, std::int64_t step_limit) {
    auto report = make_report(std::string("equivalence:") + std::string(scheme_name(reference)) + "~" +
                                  std::string(scheme_name(shadow)),
                              scenario, shadow);
    const std::int64_t limit = step_limit > 0 ? step_limit : default_step_limit(scenario.node_count());
    SimOptions options;
    options.record_dags = false;
    Simulator ref(scenario, reference, options);
    Simulator sh(scenario, shadow, options);
    Scheduler scheduler(schedule);
    std::vector<std::vector<NodeId>> chosen;

    while (true) {
        ref.apply_due_events();
        sh.apply_due_events();
        const auto stuck_ref = ref.stuck_nodes();
        const auto stuck_sh = sh.stuck_nodes();
        const auto step = ref.step_count();
        if (stuck_ref != stuck_sh) {
            fail(report, scenario, Schedule::fixed(chosen), step,
                 "stuck sets differ: " + node_list(stuck_ref) + " vs " + node_list(stuck_sh));
            return report;
        }
        if (!(ref.current_dag() == sh.current_dag())) {
            fail(report, scenario, Schedule::fixed(chosen), step, "routing DAGs differ");
            return report;
        }
        if (stuck_ref.empty()) {
            if (ref.has_pending_events()) {
                ref.apply_next_pending_events();
                sh.apply_next_pending_events();
                continue;
            }
            break;
        }
        if (step >= limit) {
            report.detail = "step limit reached with identical sequences";
            return report;
        }
        auto subset = scheduler.choose(stuck_ref);
        chosen.push_back(subset);
        ref.step_with(subset);
        try {
            sh.step_with(subset);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ScheduleInvalid) throw;
            fail(report, scenario, Schedule::fixed(chosen), step, std::string("ScheduleReplayMismatch: ") + e.what());
            return report;
        }
    }
    report.detail = std::to_string(chosen.size()) + " steps identical";
    return report;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

namespace {

std::vector<std::int64_t> encode(const StateVector& states) {
    std::vector<std::int64_t> key;
    key.reserve(states.size() * 2);
    for (std::size_t i = 1; i < states.size(); ++i) {
        std::visit(
            [&key](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, GbFullState>) {
                    key.push_back(s.h);
                } else if constexpr (std::is_same_v<S, GbPartialState>) {
                    key.push_back(s.p);
                    key.push_back(s.h);
                } else if constexpr (std::is_same_v<S, UnboundedState>) {
                    key.push_back(s.t);
                    key.push_back(s.h);
                } else if constexpr (std::is_same_v<S, TauState>) {
                    key.push_back(s.tau);
                } else {
                    key.push_back(s.delta);
                }
            },
            states[i]);
    }
    return key;
}

class Enumerator {
public:
    Enumerator(const Scenario& scenario, SchemeId scheme, EnumerationOptions options)
        : scenario_(scenario),
          scheme_(scheme),
          options_(options),
          rule_(update_rule(scheme)),
          constants_{scenario.node_count(), scenario.heights.h_max()} {}

    EnumerationResult run() {
        StateVector start = initial_states(scheme_, scenario_.heights);
        visit(start);
        result_.states_explored = seen_.size();
        return std::move(result_);
    }

private:
    std::vector<NodeId> stuck(const StateVector& states) const {
        std::vector<NodeId> out;
        const auto& topo = scenario_.topology;
        for (NodeId i = 1; i <= topo.node_count(); ++i) {
            bool has_out = false;
            for (NodeId j : topo.neighbors(i)) {
                if (link_points_to(i, j, states, scheme_, scenario_.heights)) {
                    has_out = true;
                    break;
                }
            }
            if (!has_out) out.push_back(i);
        }
        return out;
    }

    NodeState apply(NodeId i, const StateVector& snapshot) const {
        if (const auto* aware = std::get_if<NeighborAwareRule>(&rule_)) {
            std::vector<NodeState> nbrs;
            for (NodeId j : scenario_.topology.neighbors(i)) {
                if (j != kDestination) nbrs.push_back(snapshot[j]);
            }
            return (*aware)(snapshot[i], nbrs);
        }
        return std::get<NeighborObliviousRule>(rule_)(snapshot[i], constants_);
    }

    void visit(const StateVector& states) {
        if (!seen_.insert(encode(states)).second) return;
        if (seen_.size() > options_.max_states) {
            throw Error(ErrorKind::ExplosionGuard,
                        "more than " + std::to_string(options_.max_states) + " distinct states explored");
        }
        const auto s = stuck(states);
        if (s.empty()) {
            ++result_.terminal_states;
            RoutingDag dag = routing_dag(states, scenario_.topology, scheme_, scenario_.heights);
            if (!is_destination_oriented(dag, scenario_.topology)) result_.all_destination_oriented = false;
            if (std::find(result_.final_dags.begin(), result_.final_dags.end(), dag) == result_.final_dags.end()) {
                result_.final_dags.push_back(std::move(dag));
                result_.witnesses.push_back(Schedule::fixed(path_));
            }
            return;
        }
        if (static_cast<std::int64_t>(path_.size()) >= default_step_limit(scenario_.node_count())) {
            throw Error(ErrorKind::ExplosionGuard, "schedule longer than the step limit");
        }
        const std::size_t k = s.size();
        if (options_.branching == Branching::Singletons) {
            for (NodeId i : s) branch(states, {i});
            return;
        }
        for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
            std::vector<NodeId> subset;
            for (std::size_t b = 0; b < k; ++b) {
                if (mask & (1u << b)) subset.push_back(s[b]);
            }
            branch(states, subset);
        }
    }

    void branch(const StateVector& states, const std::vector<NodeId>& subset) {
        StateVector next = states;
        for (NodeId i : subset) next[i] = apply(i, states);
        path_.push_back(subset);
        visit(next);
        path_.pop_back();
    }

    const Scenario& scenario_;
    SchemeId scheme_;
    EnumerationOptions options_;
    UpdateRule rule_;
    GlobalConstants constants_;
    std::set<std::vector<std::int64_t>> seen_;
    std::vector<std::vector<NodeId>> path_;
    EnumerationResult result_;
};

}  // namespace

EnumerationResult enumerate_all_schedules(const Scenario& scenario, SchemeId scheme, EnumerationOptions options) {
    if (scenario.node_count() > options.max_nodes) {
        throw Error(ErrorKind::Validation, "exhaustive enumeration is limited to N <= " + std::to_string(options.max_nodes));
    }
    if (!scenario.file.events.empty()) throw Error(ErrorKind::Validation, "exhaustive enumeration needs a static scenario");
    return Enumerator(scenario, scheme, options).run();
}

CheckReport check_order_invariance(const Scenario& scenario, SchemeId scheme, EnumerationOptions options) {
    auto report = make_report(options.branching == Branching::Subsets ? "order-invariance:subsets"
                                                                      : "order-invariance:singletons",
                              scenario, scheme);
    const auto result = enumerate_all_schedules(scenario, scheme, options);
    if (scheme == SchemeId::BaselineIncrement) report.informational = true;
    if (result.final_dags.size() != 1 || !result.all_destination_oriented) {
        report.passed = false;
        report.detail = std::to_string(result.final_dags.size()) + " distinct final DAGs over " +
                        std::to_string(result.states_explored) + " states";
        if (!result.all_destination_oriented) report.detail += "; some terminal DAG is not destination-oriented";
        report.counterexample_scenario = serialize_scenario(scenario.file);
        for (const auto& w : result.witnesses) report.counterexample_schedule += serialize_schedule(w);
        return report;
    }
    report.detail = "1 final DAG over " + std::to_string(result.states_explored) + " states";
    return report;
}

std::span<const EquivalencePair> equivalence_pairs() {
    static constexpr EquivalencePair pairs[] = {
        {SchemeId::NoFull, SchemeId::TwoBitFull, false},
        {SchemeId::NoFull, SchemeId::OneBitFull, false},
        {SchemeId::NoFull, SchemeId::GbFull, false},
        {SchemeId::NoPartial, SchemeId::TwoBitPartial, false},
        {SchemeId::NoPartial, SchemeId::GbPartial, true},
    };
    return pairs;
}

std::vector<CheckReport> verify_scenario(const Scenario& scenario, const BatteryOptions& options) {
    std::vector<CheckReport> out;
    SimOptions sim;
    sim.step_limit = options.step_limit;
    for (SchemeId scheme : options.schemes) {
        const Trace trace = run(scenario, scheme, options.schedule, sim);
        out.push_back(check_convergence(trace, scenario));
        out.push_back(check_step_invariants(trace, scenario));
        out.push_back(check_reversal_semantics(trace, scenario));
        out.push_back(check_initial_greedy_stability(trace, scenario));
        // The increment-by-one baseline carries no guarantees; its reports are for contrast.
        if (scheme == SchemeId::BaselineIncrement) {
            for (auto it = out.end() - 4; it != out.end(); ++it) it->informational = true;
        }
    }
    auto requested = [&](SchemeId s) {
        return std::find(options.schemes.begin(), options.schemes.end(), s) != options.schemes.end();
    };
    for (const auto& pair : equivalence_pairs()) {
        if (!requested(pair.reference) || !requested(pair.shadow)) continue;
        auto report = check_scheme_equivalence(scenario, options.schedule, pair.reference, pair.shadow,
                                               options.step_limit);
        report.informational = pair.informational;
        out.push_back(std::move(report));
    }
    const bool small_static = scenario.node_count() <= EnumerationOptions{}.max_nodes && scenario.file.events.empty();
    if (options.order_invariance && small_static) {
        for (SchemeId scheme : options.schemes) {
            for (auto branching : {Branching::Singletons, Branching::Subsets}) {
                EnumerationOptions e;
                e.branching = branching;
                out.push_back(check_order_invariance(scenario, scheme, e));
            }
        }
    }
    return out;
}

}  // namespace linkrev
