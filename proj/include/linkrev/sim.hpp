#pragma once

// Deterministic discrete-event simulation of link reversal: hello/ack stuck
// detection, scheduled updates from a pre-step snapshot, removal/sleep events
// and trace recording.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linkrev/core_model.hpp"
#include "linkrev/reversal.hpp"
#include "linkrev/scenario.hpp"

namespace linkrev {

enum class SchedulePolicy : std::uint8_t {
    SingleRandom,   // one uniformly chosen stuck node per step
    SubsetRandom,   // each stuck node independently with probability 1/2 (at least one)
    Synchronous,    // every stuck node
    FixedSequence,  // explicit node subsets, one per step
};

std::string_view policy_name(SchedulePolicy policy);
std::optional<SchedulePolicy> parse_policy(std::string_view name);

struct Schedule {
    SchedulePolicy policy = SchedulePolicy::SingleRandom;
    std::uint64_t seed = 0;
    std::vector<std::vector<NodeId>> steps;  // FixedSequence only

    static Schedule single_random(std::uint64_t seed) { return {SchedulePolicy::SingleRandom, seed, {}}; }
    static Schedule subset_random(std::uint64_t seed) { return {SchedulePolicy::SubsetRandom, seed, {}}; }
    static Schedule synchronous() { return {SchedulePolicy::Synchronous, 0, {}}; }
    static Schedule fixed(std::vector<std::vector<NodeId>> steps) {
        return {SchedulePolicy::FixedSequence, 0, std::move(steps)};
    }

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Stateful realization of a Schedule.
class Scheduler {
public:
    explicit Scheduler(Schedule schedule);

    /// Picks a nonempty subset of `stuck` (ascending). FixedSequence steps that
    /// name non-stuck nodes, or an exhausted sequence, throw ScheduleInvalid.
    std::vector<NodeId> choose(std::span<const NodeId> stuck);

private:
    Schedule schedule_;
    std::mt19937_64 rng_;
    std::size_t cursor_ = 0;
};

struct SimOptions {
    /// 0 selects the default cap of 4 N^2 steps.
    std::int64_t step_limit = 0;
    /// Keep a full DAG dump per step (needed by the reversal-semantics check and dot frames).
    bool record_dags = true;
};

std::int64_t default_step_limit(int node_count);

struct StepRecord {
    std::int64_t index = 0;
    std::vector<NodeId> stuck;
    std::vector<NodeId> updated;
    std::vector<std::pair<NodeId, NodeState>> new_states;
    std::uint64_t dag_hash = 0;
    std::int64_t reversals = 0;
    RoutingDag dag;  // empty unless SimOptions::record_dags
};

enum class Outcome : std::uint8_t { Converged, StepLimit, Partitioned, Aborted };
std::string_view outcome_name(Outcome outcome);

struct TraceTotals {
    std::vector<std::int64_t> updates_per_node;  // indexed by NodeId, slot 0 unused
    std::int64_t total_updates = 0;
    std::int64_t total_reversals = 0;
    std::int64_t steps = 0;
    int max_state_bits = 0;
};

struct Trace {
    SchemeId scheme = SchemeId::NoFull;
    std::string scenario_name;
    int node_count = 0;
    StateVector initial_states;
    RoutingDag initial_dag;
    std::vector<SimEvent> applied_events;  // at_step rewritten to the step they preceded
    std::vector<StepRecord> steps;
    TraceTotals totals;
    Outcome outcome = Outcome::Converged;
    std::string diagnostic;
    bool dags_recorded = true;

    /// The updated subsets, as a schedule that replays this trace.
    Schedule replay_schedule() const;
};

/// Applies the structural part of an event to a topology and awake mask.
/// Returns true when a removal left some active node cut off from the destination.
bool apply_topology_event(Topology& topology, std::vector<bool>& awake, const SimEvent& event);

class Simulator {
public:
    Simulator(const Scenario& scenario, SchemeId scheme, SimOptions options = {});

    SchemeId scheme() const noexcept { return scheme_; }
    const StateVector& states() const noexcept { return states_; }
    /// Topology after removals (sleeping nodes still present).
    const Topology& topology() const noexcept { return topology_; }
    /// Topology restricted to awake nodes; what hello rounds observe.
    const Topology& live_topology() const noexcept { return live_; }
    const HeightAssignment& heights() const noexcept { return heights_; }
    bool is_awake(NodeId i) const;
    std::int64_t step_count() const noexcept { return step_count_; }
    const std::vector<std::int64_t>& update_counts() const noexcept { return updates_; }
    const std::vector<SimEvent>& applied_events() const noexcept { return applied_; }

    /// Node i broadcasts a hello and waits for acks from awake lower neighbours;
    /// true (stuck) if none arrive.
    bool hello_round(NodeId i) const;
    std::vector<NodeId> stuck_nodes() const;
    RoutingDag current_dag() const;

    /// Applies one removal/sleep/wake. Surviving node states are untouched.
    void apply_event(const SimEvent& event);
    /// Applies queued scenario events due at the current step.
    void apply_due_events();
    bool has_pending_events() const { return !pending_.empty(); }
    /// Applies the earliest pending events now (used when the network is idle).
    void apply_next_pending_events();
    /// True once a removal has left some active node without a path to the destination.
    bool partitioned_by_event() const noexcept { return partitioned_by_event_; }

    StepRecord step(Scheduler& scheduler);
    /// Updates exactly `subset`, which must be a nonempty subset of the stuck set.
    StepRecord step_with(std::span<const NodeId> subset);

private:
    void refresh_live();
    NodeState updated_state(NodeId i, const StateVector& snapshot) const;

    SchemeId scheme_;
    SimOptions options_;
    HeightAssignment heights_;
    GlobalConstants constants_;
    UpdateRule rule_;
    Topology topology_;
    Topology live_;
    std::vector<bool> awake_;
    StateVector states_;
    std::vector<std::int64_t> updates_;
    std::vector<SimEvent> pending_;  // sorted by at_step
    std::vector<SimEvent> applied_;
    std::int64_t step_count_ = 0;
    bool partitioned_by_event_ = false;
};

/// Runs to convergence, the step limit, or a partition verdict. For NoFull and
/// NoPartial an update count above N certifies a partition; other schemes fall
/// back to a connectivity check at the step limit.
Trace run(const Scenario& scenario, SchemeId scheme, const Schedule& schedule, SimOptions options = {});

}  // namespace linkrev
