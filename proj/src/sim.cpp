#include "linkrev/sim.hpp"

#include <algorithm>
#include <string>

#include "linkrev/error.hpp"

namespace linkrev {

std::string_view policy_name(SchedulePolicy policy) {
    switch (policy) {
        case SchedulePolicy::SingleRandom: return "single-random";
        case SchedulePolicy::SubsetRandom: return "subset-random";
        case SchedulePolicy::Synchronous: return "synchronous";
        case SchedulePolicy::FixedSequence: return "fixed";
    }
    return "unknown";
}

std::optional<SchedulePolicy> parse_policy(std::string_view name) {
    for (auto p : {SchedulePolicy::SingleRandom, SchedulePolicy::SubsetRandom, SchedulePolicy::Synchronous,
                   SchedulePolicy::FixedSequence}) {
        if (policy_name(p) == name) return p;
    }
    return std::nullopt;
}

std::string_view outcome_name(Outcome outcome) {
    switch (outcome) {
        case Outcome::Converged: return "converged";
        case Outcome::StepLimit: return "step-limit";
        case Outcome::Partitioned: return "partitioned";
        case Outcome::Aborted: return "aborted";
    }
    return "unknown";
}

std::int64_t default_step_limit(int node_count) {
    return 4 * static_cast<std::int64_t>(node_count) * node_count;
}

// ---------------------------------------------------------------------------
// Scheduler

Scheduler::Scheduler(Schedule schedule) : schedule_(std::move(schedule)), rng_(schedule_.seed) {}

std::vector<NodeId> Scheduler::choose(std::span<const NodeId> stuck) {
    if (stuck.empty()) throw Error(ErrorKind::EmptyStuckSetButCalled, "no stuck node to schedule");
    switch (schedule_.policy) {
        case SchedulePolicy::SingleRandom: return {stuck[rng_() % stuck.size()]};
        case SchedulePolicy::SubsetRandom: {
            std::vector<NodeId> picked;
            for (NodeId i : stuck) {
                if (rng_() & 1u) picked.push_back(i);
            }
            if (picked.empty()) picked.push_back(stuck[rng_() % stuck.size()]);
            return picked;
        }
        case SchedulePolicy::Synchronous: return {stuck.begin(), stuck.end()};
        case SchedulePolicy::FixedSequence: {
            if (cursor_ >= schedule_.steps.size()) {
                throw Error(ErrorKind::ScheduleInvalid,
                            "fixed schedule exhausted after " + std::to_string(cursor_) + " steps");
            }
            auto picked = schedule_.steps[cursor_];
            std::sort(picked.begin(), picked.end());
            for (NodeId i : picked) {
                if (!std::binary_search(stuck.begin(), stuck.end(), i)) {
                    throw Error(ErrorKind::ScheduleInvalid, "step " + std::to_string(cursor_) + " schedules node " +
                                                                std::to_string(i) + ", which is not stuck");
                }
            }
            ++cursor_;
            return picked;
        }
    }
    throw Error(ErrorKind::ScheduleInvalid, "unknown schedule policy");
}

Schedule Trace::replay_schedule() const {
    std::vector<std::vector<NodeId>> seq;
    seq.reserve(steps.size());
    for (const auto& s : steps) seq.push_back(s.updated);
    return Schedule::fixed(std::move(seq));
}

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(const Scenario& scenario, SchemeId scheme, SimOptions options)
    : scheme_(scheme),
      options_(options),
      heights_(scenario.heights),
      constants_{scenario.node_count(), scenario.heights.h_max()},
      rule_(update_rule(scheme)),
      topology_(scenario.topology),
      awake_(static_cast<std::size_t>(scenario.node_count()) + 1, true),
      states_(initial_states(scheme, scenario.heights)),
      updates_(static_cast<std::size_t>(scenario.node_count()) + 1, 0),
      pending_(scenario.file.events) {
    std::stable_sort(pending_.begin(), pending_.end(),
                     [](const SimEvent& a, const SimEvent& b) { return a.at_step < b.at_step; });
    refresh_live();
}

bool Simulator::is_awake(NodeId i) const { return i == kDestination || awake_.at(i); }

void Simulator::refresh_live() { live_ = topology_.restricted_to(awake_); }

bool Simulator::hello_round(NodeId i) const {
    if (!live_.is_active(i)) return false;
    for (NodeId j : live_.neighbors(i)) {
        if (link_points_to(i, j, states_, scheme_, heights_)) return false;  // j acks
    }
    return true;
}

std::vector<NodeId> Simulator::stuck_nodes() const {
    std::vector<NodeId> out;
    for (NodeId i = 1; i <= live_.node_count(); ++i) {
        if (hello_round(i)) out.push_back(i);
    }
    return out;
}

RoutingDag Simulator::current_dag() const { return routing_dag(states_, live_, scheme_, heights_); }

bool apply_topology_event(Topology& topology, std::vector<bool>& awake, const SimEvent& event) {
    const int n = topology.node_count();
    auto check_node = [n](NodeId i) {
        if (i <= 0 || i > n) throw Error(ErrorKind::UnknownNode, "event names node " + std::to_string(i));
    };
    switch (event.kind) {
        case EventKind::RemoveNode:
            if (event.node == kDestination) throw Error(ErrorKind::Validation, "the destination cannot be removed");
            check_node(event.node);
            topology = topology.without_node(event.node);
            awake[event.node] = false;
            return !topology.is_connected();
        case EventKind::RemoveLink:
            topology = topology.without_edge(Edge(event.node, event.other));
            return !topology.is_connected();
        case EventKind::Sleep:
            check_node(event.node);
            awake[event.node] = false;
            return false;
        case EventKind::Wake:
            check_node(event.node);
            if (topology.is_active(event.node)) awake[event.node] = true;
            return false;
    }
    return false;
}

void Simulator::apply_event(const SimEvent& event) {
    if (apply_topology_event(topology_, awake_, event)) partitioned_by_event_ = true;
    if (event.kind == EventKind::Sleep && event.duration > 0) {
        SimEvent wake{step_count_ + event.duration, EventKind::Wake, event.node, 0, 0};
        auto pos = std::upper_bound(pending_.begin(), pending_.end(), wake.at_step,
                                    [](std::int64_t t, const SimEvent& e) { return t < e.at_step; });
        pending_.insert(pos, wake);
    }
    SimEvent applied = event;
    applied.at_step = step_count_;
    applied_.push_back(applied);
    refresh_live();
}

void Simulator::apply_due_events() {
    while (!pending_.empty() && pending_.front().at_step <= step_count_) {
        const SimEvent e = pending_.front();
        pending_.erase(pending_.begin());
        apply_event(e);
    }
}

void Simulator::apply_next_pending_events() {
    if (pending_.empty()) return;
    const std::int64_t at = pending_.front().at_step;
    while (!pending_.empty() && pending_.front().at_step == at) {
        const SimEvent e = pending_.front();
        pending_.erase(pending_.begin());
        apply_event(e);
    }
}

NodeState Simulator::updated_state(NodeId i, const StateVector& snapshot) const {
    if (const auto* aware = std::get_if<NeighborAwareRule>(&rule_)) {
        std::vector<NodeState> neighbor_states;
        for (NodeId j : live_.neighbors(i)) {
            if (j != kDestination) neighbor_states.push_back(snapshot[j]);
        }
        return (*aware)(snapshot[i], neighbor_states);
    }
    return std::get<NeighborObliviousRule>(rule_)(snapshot[i], constants_);
}

StepRecord Simulator::step(Scheduler& scheduler) {
    const auto stuck = stuck_nodes();
    if (stuck.empty()) throw Error(ErrorKind::EmptyStuckSetButCalled, "network is already destination-oriented");
    const auto subset = scheduler.choose(stuck);
    return step_with(subset);
}

StepRecord Simulator::step_with(std::span<const NodeId> subset) {
    const auto stuck = stuck_nodes();
    if (stuck.empty()) throw Error(ErrorKind::EmptyStuckSetButCalled, "network is already destination-oriented");
    std::vector<NodeId> chosen(subset.begin(), subset.end());
    std::sort(chosen.begin(), chosen.end());
    if (chosen.empty()) throw Error(ErrorKind::ScheduleInvalid, "a step must update at least one node");
    if (std::adjacent_find(chosen.begin(), chosen.end()) != chosen.end()) {
        throw Error(ErrorKind::ScheduleInvalid, "a node is scheduled twice in one step");
    }
    for (NodeId i : chosen) {
        if (!std::binary_search(stuck.begin(), stuck.end(), i)) {
            throw Error(ErrorKind::ScheduleInvalid, "node " + std::to_string(i) + " is not stuck");
        }
    }

    const RoutingDag before = current_dag();
    const StateVector snapshot = states_;
    StepRecord record;
    record.index = step_count_;
    record.stuck = stuck;
    record.updated = chosen;
    for (NodeId i : chosen) {
        NodeState next = updated_state(i, snapshot);
        states_[i] = next;
        ++updates_[i];
        record.new_states.emplace_back(i, std::move(next));
    }
    RoutingDag after = current_dag();
    for (std::size_t k = 0; k < after.arcs().size(); ++k) {
        if (!(after.arcs()[k] == before.arcs()[k])) ++record.reversals;
    }
    record.dag_hash = after.hash();
    if (options_.record_dags) record.dag = std::move(after);
    ++step_count_;
    return record;
}

// ---------------------------------------------------------------------------

Trace run(const Scenario& scenario, SchemeId scheme, const Schedule& schedule, SimOptions options) {
    const int n = scenario.node_count();
    const std::int64_t limit = options.step_limit > 0 ? options.step_limit : default_step_limit(n);
    Simulator sim(scenario, scheme, options);
    Scheduler scheduler(schedule);

    Trace trace;
    trace.scheme = scheme;
    trace.scenario_name = scenario.name();
    trace.node_count = n;
    trace.dags_recorded = options.record_dags;
    trace.initial_states = sim.states();
    trace.totals.updates_per_node.assign(static_cast<std::size_t>(n) + 1, 0);
    for (NodeId i = 1; i <= n; ++i) {
        trace.totals.max_state_bits = std::max(trace.totals.max_state_bits, state_bits(sim.states()[i]));
    }

    bool initial_captured = false;
    auto finish = [&](Outcome outcome, std::string diagnostic) {
        trace.outcome = outcome;
        trace.diagnostic = std::move(diagnostic);
    };

    try {
        while (true) {
            sim.apply_due_events();
            if (!initial_captured) {
                trace.initial_dag = sim.current_dag();
                initial_captured = true;
            }
            if (sim.stuck_nodes().empty()) {
                if (sim.has_pending_events()) {
                    sim.apply_next_pending_events();
                    continue;
                }
                finish(Outcome::Converged, "");
                break;
            }
            if (sim.step_count() >= limit) {
                if (sim.partitioned_by_event() || !sim.live_topology().is_connected()) {
                    finish(Outcome::Partitioned, "partition detected by connectivity check at step limit");
                } else {
                    finish(Outcome::StepLimit, "step limit " + std::to_string(limit) + " reached on a connected graph");
                }
                break;
            }
            StepRecord rec = sim.step(scheduler);
            for (const auto& [i, s] : rec.new_states) {
                trace.totals.max_state_bits = std::max(trace.totals.max_state_bits, state_bits(s));
            }
            trace.totals.total_reversals += rec.reversals;
            trace.totals.total_updates += static_cast<std::int64_t>(rec.updated.size());
            trace.steps.push_back(std::move(rec));

            if (tracks_update_count(scheme)) {
                const auto& counts = sim.update_counts();
                const auto worst = std::max_element(counts.begin(), counts.end());
                if (*worst > n) {
                    finish(Outcome::Partitioned, "partition certificate t_i>N: node " +
                                                     std::to_string(worst - counts.begin()) + " reached t=" +
                                                     std::to_string(*worst) + " > N=" + std::to_string(n));
                    break;
                }
            }
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::EmptyNeighborhood && (sim.partitioned_by_event() || !sim.live_topology().is_connected())) {
            finish(Outcome::Partitioned, std::string("partition detected: ") + e.what());
        } else if (e.kind() == ErrorKind::NonAdjacentTau || e.kind() == ErrorKind::EmptyNeighborhood ||
                   e.kind() == ErrorKind::Overflow) {
            finish(Outcome::Aborted, e.what());
        } else {
            throw;
        }
    }

    trace.applied_events = sim.applied_events();
    trace.totals.updates_per_node = sim.update_counts();
    trace.totals.steps = static_cast<std::int64_t>(trace.steps.size());
    return trace;
}

}  // namespace linkrev
