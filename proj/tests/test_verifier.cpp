#include <doctest.h>

#include <nlohmann/json.hpp>

#include "linkrev/error.hpp"
#include "linkrev/generators.hpp"
#include "linkrev/scenario_io.hpp"
#include "linkrev/verifier.hpp"

using namespace linkrev;

namespace {

Scenario all_reversed_example() {
    return parse_scenario("linkrev-scenario 1\nname all-reversed\nnodes 3\nedges D-2 1-2 1-3\nheights 1 2 3\n");
}

}  // namespace

TEST_CASE("converged traces pass every trace check") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto sc = random_void_scenario(4 + static_cast<int>(seed % 7), seed);
        for (SchemeId s : kAllSchemes) {
            CAPTURE(scheme_name(s));
            const auto trace = run(sc, s, Schedule::subset_random(seed));
            CHECK(check_step_invariants(trace, sc).passed);
            CHECK(check_reversal_semantics(trace, sc).passed);
            CHECK(check_initial_greedy_stability(trace, sc).passed);
            CHECK(check_convergence(trace, sc).passed);
        }
    }
}

TEST_CASE("a t jump of two between neighbours is caught with its step") {
    const auto sc = random_void_scenario(8, 11);
    auto trace = run(sc, SchemeId::NoFull, Schedule::single_random(11));
    REQUIRE_FALSE(trace.steps.empty());
    // Push the first updater two counts ahead and keep the recorded hash consistent.
    auto& rec = trace.steps.front();
    auto& state = std::get<UnboundedState>(rec.new_states.front().second);
    state.t += 1;
    state.h += sc.heights.h_max();
    const auto report = check_step_invariants(trace, sc);
    CHECK_FALSE(report.passed);
    REQUIRE(report.step);
    CHECK(*report.step == 0);
    CHECK_FALSE(report.counterexample_scenario.empty());
    CHECK_FALSE(report.counterexample_schedule.empty());
}

TEST_CASE("a height off its closed form is caught") {
    const auto sc = running_example();
    auto trace = run(sc, SchemeId::NoPartial, Schedule::single_random(0));
    std::get<UnboundedState>(trace.steps[0].new_states[0].second).h += 1;
    const auto report = check_step_invariants(trace, sc);
    CHECK_FALSE(report.passed);
    CHECK(*report.step == 0);
}

TEST_CASE("recorded stuck set and hash must match the states") {
    const auto sc = random_void_scenario(6, 2);
    auto trace = run(sc, SchemeId::GbPartial, Schedule::single_random(2));
    auto bad_hash = trace;
    bad_hash.steps.back().dag_hash ^= 1;
    CHECK_FALSE(check_step_invariants(bad_hash, sc).passed);
    auto bad_stuck = trace;
    bad_stuck.steps.front().stuck.push_back(99);
    CHECK_FALSE(check_step_invariants(bad_stuck, sc).passed);
}

TEST_CASE("failure reports are replayable") {
    // A cap of one step makes convergence fail on a two-step scenario.
    const auto sc = all_reversed_example();
    SimOptions o;
    o.step_limit = 1;
    const auto report = check_convergence(run(sc, SchemeId::NoFull, Schedule::synchronous(), o), sc);
    CHECK_FALSE(report.passed);
    const auto replayed = run(parse_scenario(report.counterexample_scenario), SchemeId::NoFull,
                              parse_schedule(report.counterexample_schedule), o);
    CHECK_FALSE(check_convergence(replayed, sc).passed);
    const auto j = nlohmann::json::parse(report_json(report));
    CHECK(j["verdict"] == "fail");
    CHECK(j["check"] == "convergence");
    CHECK(j["scheme"] == "no-full");

    // Equivalence counterexamples replay to the same diverging step.
    const auto diff = check_scheme_equivalence(sc, Schedule::single_random(4), SchemeId::NoPartial, SchemeId::GbPartial);
    REQUIRE_FALSE(diff.passed);
    const auto again = check_scheme_equivalence(parse_scenario(diff.counterexample_scenario),
                                                parse_schedule(diff.counterexample_schedule), SchemeId::NoPartial,
                                                SchemeId::GbPartial);
    CHECK_FALSE(again.passed);
    CHECK(again.step == diff.step);
}

TEST_CASE("reversal semantics: full schemes turn every link outward") {
    for (SchemeId s : {SchemeId::GbFull, SchemeId::NoFull, SchemeId::TwoBitFull, SchemeId::OneBitFull}) {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const auto sc = random_void_scenario(5 + static_cast<int>(seed % 6), seed);
            CHECK(check_reversal_semantics(run(sc, s, Schedule::single_random(seed)), sc).passed);
        }
    }
}

TEST_CASE("reversal semantics: the all-reversed case") {
    const auto sc = all_reversed_example();
    const auto np = run(sc, SchemeId::NoPartial, Schedule::single_random(0));
    const auto r = check_reversal_semantics(np, sc);
    CHECK(r.passed);
    CHECK(r.detail.find("1 all-reversed double updates") != std::string::npos);
    // Node 3 appears in two successive stuck sets.
    REQUIRE(np.steps.size() == 3);
    CHECK(np.steps[1].stuck == std::vector<NodeId>{3});
    CHECK(np.steps[2].stuck == std::vector<NodeId>{3});

    const auto gp = run(sc, SchemeId::GbPartial, Schedule::single_random(0));
    CHECK(check_reversal_semantics(gp, sc).passed);
    CHECK(gp.totals.updates_per_node[3] == 1);

    // A NoPartial trace doctored to skip the empty update fails the check.
    auto doctored = np;
    doctored.steps.erase(doctored.steps.begin() + 1);
    doctored.steps[1].index = 1;
    CHECK_FALSE(check_reversal_semantics(doctored, sc).passed);
}

TEST_CASE("who-updates") {
    const auto sc = running_example();
    for (SchemeId s : kAllSchemes) {
        const auto trace = run(sc, s, Schedule::single_random(0));
        CHECK(check_initial_greedy_stability(trace, sc).passed);
    }
    const auto oriented = parse_scenario("linkrev-scenario 1\nnodes 3\nedges D-1 1-2 2-3\nheights 1 2 3\n");
    const auto trace = run(oriented, SchemeId::NoFull, Schedule::single_random(0));
    CHECK(trace.totals.total_updates == 0);
    CHECK(check_initial_greedy_stability(trace, oriented).passed);

    auto tampered = run(sc, SchemeId::NoFull, Schedule::single_random(0));
    tampered.steps[0].updated = {1};
    CHECK_FALSE(check_initial_greedy_stability(tampered, sc).passed);
}

TEST_CASE("scheme equivalence") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto sc = random_void_scenario(4 + static_cast<int>(seed % 9), seed);
        for (const auto& pair : equivalence_pairs()) {
            if (pair.informational) continue;
            CHECK(check_scheme_equivalence(sc, Schedule::subset_random(seed), pair.reference, pair.shadow).passed);
        }
    }
    // NoPartial and GbPartial part ways on the all-reversed case.
    const auto r = check_scheme_equivalence(all_reversed_example(), Schedule::synchronous(), SchemeId::NoPartial,
                                            SchemeId::GbPartial);
    CHECK_FALSE(r.passed);
    CHECK(*r.step == 2);
    // A replay by node identity fails as a verdict, not an exception.
    const auto mismatch = check_scheme_equivalence(all_reversed_example(), Schedule::synchronous(),
                                                   SchemeId::GbPartial, SchemeId::NoPartial);
    CHECK_FALSE(mismatch.passed);
}

TEST_CASE("exhaustive enumeration on small scenarios") {
    for (SchemeId s : {SchemeId::NoFull, SchemeId::NoPartial, SchemeId::GbFull, SchemeId::GbPartial}) {
        CAPTURE(scheme_name(s));
        const auto r = enumerate_all_schedules(running_example(), s);
        CHECK(r.final_dags.size() == 1);
        CHECK(r.all_destination_oriented);
        CHECK(r.witnesses.size() == 1);
    }
    const auto oriented = parse_scenario("linkrev-scenario 1\nnodes 3\nedges D-1 1-2 2-3\nheights 1 2 3\n");
    const auto r = enumerate_all_schedules(oriented, SchemeId::NoFull);
    REQUIRE(r.final_dags.size() == 1);
    CHECK(r.states_explored == 1);
    CHECK(r.witnesses[0].steps.empty());
    CHECK(r.final_dags[0] == routing_dag(initial_states(SchemeId::NoFull, oriented.heights), oriented.topology,
                                         SchemeId::NoFull, oriented.heights));
}

TEST_CASE("enumeration is independent of branching order") {
    for (const auto& sc : hand_picked_scenarios()) {
        for (SchemeId s : {SchemeId::NoPartial, SchemeId::GbFull}) {
            CAPTURE(sc.name());
            CAPTURE(scheme_name(s));
            EnumerationOptions singles;
            singles.branching = Branching::Singletons;
            const auto a = enumerate_all_schedules(sc, s, singles);
            const auto b = enumerate_all_schedules(sc, s);
            CHECK(a.final_dags == b.final_dags);
            REQUIRE(a.final_dags.size() == 1);
            REQUIRE(b.witnesses.size() == 1);
            // Every witness replays to its final DAG.
            const auto trace = run(sc, s, b.witnesses[0]);
            REQUIRE_FALSE(trace.steps.empty());
            CHECK(trace.steps.back().dag == b.final_dags[0]);
        }
    }
}

TEST_CASE("enumeration guards") {
    const auto big = random_void_scenario(6, 0);
    CHECK_THROWS_AS(enumerate_all_schedules(big, SchemeId::NoFull), Error);
    EnumerationOptions tight;
    tight.max_states = 2;
    CHECK_THROWS_AS(enumerate_all_schedules(hand_picked_scenarios()[0], SchemeId::NoPartial, tight), Error);
    auto with_event = running_example().file;
    with_event.events.push_back({0, EventKind::Sleep, 1, 0, 0});
    CHECK_THROWS_AS(enumerate_all_schedules(Scenario::from_file(with_event), SchemeId::NoFull), Error);
}

TEST_CASE("hand-picked scenarios all start with a void") {
    const auto all = hand_picked_scenarios();
    CHECK(all.size() == 20);
    for (const auto& sc : all) {
        CAPTURE(sc.name());
        CHECK(sc.node_count() == 5);
        const auto dag = routing_dag(initial_states(SchemeId::NoFull, sc.heights), sc.topology, SchemeId::NoFull,
                                     sc.heights);
        CHECK_FALSE(stuck_set(dag, sc.topology).empty());
    }
}

TEST_CASE("verify_scenario battery") {
    BatteryOptions o;
    const auto reports = verify_scenario(running_example(), o);
    // 7 schemes x 4 trace checks, 5 equivalence pairs, 7 x 2 enumerations.
    CHECK(reports.size() == 28 + 5 + 14);
    for (const auto& r : reports) {
        CAPTURE(r.check);
        CHECK((r.passed || r.informational));
    }
    o.schemes = {SchemeId::NoFull, SchemeId::BaselineIncrement};
    o.order_invariance = false;
    const auto base = verify_scenario(random_void_scenario(9, 1), o);
    CHECK(base.size() == 8);
    for (std::size_t k = 4; k < 8; ++k) CHECK(base[k].informational);
}
