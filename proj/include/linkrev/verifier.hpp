#pragma once

// Executable forms of the convergence, invariance and reversal-semantics
// properties, run against simulator traces.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linkrev/scenario.hpp"
#include "linkrev/sim.hpp"

namespace linkrev {

struct CheckReport {
    std::string check;
    std::string scenario;
    std::optional<SchemeId> scheme;
    bool passed = true;
    /// Informational checks never gate a verification run.
    bool informational = false;
    std::optional<std::int64_t> step;
    std::string detail;
    /// Replayable counterexample: scenario text and the schedule that reproduces it.
    std::string counterexample_scenario;
    std::string counterexample_schedule;
};

/// One JSON object per report, no trailing newline.
std::string report_json(const CheckReport& report);

/// Replays the trace and, at every step, checks: recorded stuck sets and DAG
/// hashes, acyclicity, stuck-set/orientation agreement, strictly advancing
/// updates, recomputed rule outputs, closed-form heights and height bounds,
/// |t_i - t_j| <= 1 on links, t_i <= N, and tau/delta consistency with the
/// update count.
CheckReport check_step_invariants(const Trace& trace, const Scenario& scenario);

/// Full schemes: every updater ends with all links outgoing. Partial schemes:
/// the reversed links are exactly those not reversed toward the node since its
/// last update; for NoPartial/TwoBitPartial an all-reversed node reverses nothing
/// and stays stuck, for GbPartial it reverses everything at once.
CheckReport check_reversal_semantics(const Trace& trace, const Scenario& scenario);

/// Only nodes without an initial directed path to the destination ever update.
CheckReport check_initial_greedy_stability(const Trace& trace, const Scenario& scenario);

/// Converged with an empty final stuck set and a destination-oriented DAG.
CheckReport check_convergence(const Trace& trace, const Scenario& scenario);

/// Drives `reference` with `schedule` and replays its choices, by node identity,
/// on `shadow`; stuck sets and DAGs must agree at every step.
CheckReport check_scheme_equivalence(const Scenario& scenario, const Schedule& schedule, SchemeId reference,
                                     SchemeId shadow, std::int64_t step_limit = 0);

enum class Branching { Singletons, Subsets };

struct EnumerationOptions {
    int max_nodes = 5;
    std::size_t max_states = 1'000'000;
    Branching branching = Branching::Subsets;
};

struct EnumerationResult {
    std::vector<RoutingDag> final_dags;       // distinct, in discovery order
    std::vector<Schedule> witnesses;          // one schedule reaching each final DAG
    std::size_t states_explored = 0;
    std::size_t terminal_states = 0;
    bool all_destination_oriented = true;
};

/// Explores every schedule (all nonempty subsets of the stuck set, or single
/// nodes) from the initial state. Throws Validation when N > max_nodes or the
/// scenario has events, ExplosionGuard past max_states.
EnumerationResult enumerate_all_schedules(const Scenario& scenario, SchemeId scheme, EnumerationOptions options = {});

/// Passes when enumeration yields exactly one final DAG and it is destination-oriented.
CheckReport check_order_invariance(const Scenario& scenario, SchemeId scheme, EnumerationOptions options = {});

struct BatteryOptions {
    std::vector<SchemeId> schemes{kReversalSchemes.begin(), kReversalSchemes.end()};
    Schedule schedule = Schedule::single_random(0);
    std::int64_t step_limit = 0;
    /// Adds exhaustive order-invariance checks for static scenarios with N <= 5.
    bool order_invariance = true;
};

/// Runs every scheme on the scenario and applies all trace checks, the
/// equivalence checks for each related pair of requested schemes, and
/// optionally exhaustive order-invariance. Reports come back in a fixed order.
std::vector<CheckReport> verify_scenario(const Scenario& scenario, const BatteryOptions& options);

/// Pairs expected to produce identical stuck-set and DAG sequences, plus the
/// NoPartial/GbPartial pair, which is compared informationally only.
struct EquivalencePair {
    SchemeId reference;
    SchemeId shadow;
    bool informational;
};
std::span<const EquivalencePair> equivalence_pairs();

}  // namespace linkrev
