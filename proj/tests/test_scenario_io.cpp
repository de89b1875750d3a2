#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "linkrev/error.hpp"
#include "linkrev/generators.hpp"
#include "linkrev/scenario_io.hpp"

using namespace linkrev;

namespace {

constexpr const char* kExample = R"(linkrev-scenario 1
# the small example with a stuck node
name running-example
nodes 3
edges D-1, 1-3, 2-3
heights 1 2 3
)";

template <typename Fn>
ErrorKind error_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Validation;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("parse the running example") {
    const auto sc = parse_scenario(kExample);
    CHECK(sc.name() == "running-example");
    CHECK(sc.node_count() == 3);
    CHECK(sc.heights.h_max() == 3);
    CHECK(sc.topology.edges() == std::vector<Edge>{{0, 1}, {1, 3}, {2, 3}});
    CHECK(sc.file == running_example().file);
}

TEST_CASE("heights default to hop counts") {
    const auto sc = parse_scenario("linkrev-scenario 1\nnodes 3\nedge D 1\nedge 1 2\nedges 2-3\n");
    CHECK(sc.heights.initial(1) == 1);
    CHECK(sc.heights.initial(3) == 3);
    CHECK_FALSE(sc.file.heights);
}

TEST_CASE("duplicate initial heights are allowed") {
    const auto sc = parse_scenario("linkrev-scenario 1\nnodes 2\nedges D-1 D-2\nheights 4 4\n");
    CHECK(sc.heights.h_max() == 4);
}

TEST_CASE("validation errors") {
    CHECK(error_of([] { parse_scenario("linkrev-scenario 1\nnodes 3\nedges D-1 1-3 2-3\nheights 1 0 3\n"); }) ==
          ErrorKind::HeightOutOfRange);
    CHECK(error_of([] { parse_scenario("linkrev-scenario 1\nnodes 3\nedges D-1 2-3\n"); }) ==
          ErrorKind::DisconnectedGraph);
    CHECK(error_of([] { parse_scenario("linkrev-scenario 1\nnodes 3\nedges D-1 1-2 2-3\nheights 1 2\n"); }) ==
          ErrorKind::Validation);
    CHECK(error_of([] { parse_scenario("linkrev-scenario 1\nnodes 2\nedges D-1 1-2\nevent 0 add-node 3\n"); }) ==
          ErrorKind::AdditionForbidden);
    CHECK(error_of([] { parse_scenario("linkrev-scenario 1\nnodes 2\nedges D-1 1-2\nevent 0 add-link 2 D\n"); }) ==
          ErrorKind::AdditionForbidden);
    CHECK(error_of([] { parse_scenario("linkrev-scenario 1\nnodes 2\nedges D-1 1-2\nevent 0 remove-node D\n"); }) ==
          ErrorKind::Validation);
    CHECK(error_of([] { parse_scenario("linkrev-scenario 1\nnodes 2\nedges D-1 1-2\nevent 0 remove-link D 2\n"); }) ==
          ErrorKind::Validation);
    CHECK(error_of([] { parse_scenario("linkrev-scenario 1\nnodes 2\nedges D-1 1-1\n"); }) ==
          ErrorKind::InvalidTopology);
}

TEST_CASE("overflow risk is rejected at load") {
    // 62 nodes on a chain: z(63) with h_max = 62 cannot fit in 63 bits.
    std::string text = "linkrev-scenario 1\nnodes 62\nedges D-1";
    for (int i = 1; i < 62; ++i) text += " " + std::to_string(i) + "-" + std::to_string(i + 1);
    text += "\n";
    CHECK(error_of([&] { parse_scenario(text); }) == ErrorKind::OverflowRisk);
    // Small scenarios are fine.
    CHECK_NOTHROW(parse_scenario(kExample));
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse_scenario("linkrev-scenario 1\nnodes 3\nedges D-1 1-x\n");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 13);
    }
    try {
        parse_scenario("linkrev-scenario 1\nnodes 3\n  bogus 4\n");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parse_scenario("nodes 3\nedges D-1\n"), SyntaxError);
    CHECK_THROWS_AS(parse_scenario("linkrev-scenario 2\nnodes 1\nedges D-1\n"), SyntaxError);
}

TEST_CASE("scenario round trip") {
    auto check_round_trip = [](const ScenarioFile& f) {
        const auto text = serialize_scenario(f);
        CHECK(parse_scenario_file(text) == f);
        CHECK(serialize_scenario(parse_scenario_file(text)) == text);
    };
    check_round_trip(parse_scenario_file(kExample));
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        check_round_trip(random_void_scenario(3 + static_cast<int>(seed % 10), seed).file);
        check_round_trip(random_partition_scenario(4 + static_cast<int>(seed % 8), seed).file);
    }
    ScenarioFile f = running_example().file;
    f.seed = 99;
    f.events = {{0, EventKind::Sleep, 2, 0, 3}, {2, EventKind::Wake, 2, 0, 0}, {4, EventKind::RemoveLink, 1, 3, 0},
                {5, EventKind::RemoveNode, 3, 0, 0}, {6, EventKind::Sleep, 1, 0, 0}};
    check_round_trip(f);
}

TEST_CASE("schedule round trip") {
    for (const auto& s : {Schedule::single_random(12), Schedule::subset_random(0), Schedule::synchronous(),
                          Schedule::fixed({{2}, {1, 3}, {5}})}) {
        CHECK(parse_schedule(serialize_schedule(s)) == s);
    }
    CHECK_THROWS_AS(parse_schedule("linkrev-schedule 1\npolicy fixed\nstep\n"), SyntaxError);
    CHECK_THROWS_AS(parse_schedule("linkrev-schedule 1\npolicy sideways\n"), SyntaxError);
}

TEST_CASE("jsonl trace: one step record plus totals") {
    const auto trace = run(running_example(), SchemeId::NoFull, Schedule::single_random(0));
    const auto out = lines(emit_trace(trace, TraceFormat::Jsonl));
    REQUIRE(out.size() == 2);
    const auto step = nlohmann::json::parse(out[0]);
    CHECK(step["type"] == "step");
    CHECK(step["stuck"] == nlohmann::json::array({2}));
    CHECK(step["states"]["2"]["t"] == 1);
    CHECK(step["states"]["2"]["h"] == 5);
    const auto totals = nlohmann::json::parse(out[1]);
    CHECK(totals["type"] == "totals");
    CHECK(totals["outcome"] == "converged");
    CHECK(totals["total_updates"] == trace.totals.total_updates);
    CHECK(totals["updates_per_node"]["2"] == 1);
}

TEST_CASE("jsonl trace is a stream: every prefix line parses") {
    auto file = random_void_scenario(9, 5).file;
    file.events.push_back({1, EventKind::Sleep, 1, 0, 2});
    const auto trace = run(Scenario::from_file(file), SchemeId::NoPartial, Schedule::subset_random(5));
    for (const auto& l : lines(emit_trace(trace, TraceFormat::Jsonl))) {
        CHECK(nlohmann::json::accept(l));
    }
}

TEST_CASE("csv totals row matches trace totals") {
    const auto trace = run(random_void_scenario(7, 3), SchemeId::GbPartial, Schedule::single_random(3));
    const auto out = lines(emit_trace(trace, TraceFormat::Csv));
    REQUIRE(out.size() == 2);
    CHECK(out[0] == "scenario,scheme,outcome,steps,total_updates,total_reversals,max_state_bits,updates_per_node");
    std::ostringstream expected;
    expected << trace.scenario_name << ",gb-partial,converged," << trace.totals.steps << ','
             << trace.totals.total_updates << ',' << trace.totals.total_reversals << ',' << trace.totals.max_state_bits
             << ',';
    CHECK(out[1].starts_with(expected.str()));
}

TEST_CASE("dot frames: steps + 1 digraphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto trace = run(random_void_scenario(8, seed), SchemeId::NoFull, Schedule::single_random(seed));
        const auto text = emit_trace(trace, TraceFormat::DotFrames);
        std::size_t frames = 0;
        for (const auto& l : lines(text)) frames += l.starts_with("digraph ");
        CHECK(frames == trace.steps.size() + 1);
    }
    SimOptions no_dump;
    no_dump.record_dags = false;
    const auto trace = run(running_example(), SchemeId::NoFull, Schedule::single_random(0), no_dump);
    CHECK_THROWS_AS(emit_trace(trace, TraceFormat::DotFrames), Error);
}

TEST_CASE("trace format names") {
    CHECK(parse_trace_format("jsonl") == TraceFormat::Jsonl);
    CHECK(parse_trace_format("csv") == TraceFormat::Csv);
    CHECK(parse_trace_format("dot-frames") == TraceFormat::DotFrames);
    CHECK_FALSE(parse_trace_format("xml"));
}
