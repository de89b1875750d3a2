// Python bindings: scenario parsing, simulation, verification and enumeration.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "linkrev/error.hpp"
#include "linkrev/generators.hpp"
#include "linkrev/scenario_io.hpp"
#include "linkrev/verifier.hpp"

namespace py = pybind11;
using namespace linkrev;

namespace {

SchemeId scheme_from(const std::string& name) {
    if (auto s = parse_scheme(name)) return *s;
    throw Error(ErrorKind::Validation, "unknown scheme '" + name + "'");
}

// Accepts a policy name or the full text of a schedule file.
Schedule schedule_from(const std::string& arg, std::uint64_t seed) {
    if (arg.starts_with("linkrev-schedule")) return parse_schedule(arg);
    const auto policy = parse_policy(arg);
    if (!policy || *policy == SchedulePolicy::FixedSequence) {
        throw Error(ErrorKind::Validation, "schedule must be a random policy name or schedule file text");
    }
    return {*policy, seed, {}};
}

py::dict report_dict(const CheckReport& r) {
    py::dict d;
    d["check"] = r.check;
    d["scenario"] = r.scenario;
    d["scheme"] = r.scheme ? py::cast(std::string(scheme_name(*r.scheme))) : py::none();
    d["passed"] = r.passed;
    d["informational"] = r.informational;
    d["step"] = r.step ? py::cast(*r.step) : py::none();
    d["detail"] = r.detail;
    d["counterexample_scenario"] = r.counterexample_scenario;
    d["counterexample_schedule"] = r.counterexample_schedule;
    return d;
}

}  // namespace

PYBIND11_MODULE(_linkrev, m) {
    m.doc() = "Link reversal routing simulator and verifier";

    auto error = py::register_exception<Error>(m, "LinkrevError", PyExc_ValueError);
    py::register_exception<SyntaxError>(m, "ScenarioSyntaxError", error.ptr());

    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("name", &Scenario::name)
        .def_property_readonly("node_count", &Scenario::node_count)
        .def_property_readonly("edges",
                               [](const Scenario& s) {
                                   std::vector<std::pair<NodeId, NodeId>> out;
                                   for (const auto& e : s.file.edges) out.emplace_back(e.a, e.b);
                                   return out;
                               })
        .def_property_readonly("text", [](const Scenario& s) { return serialize_scenario(s.file); })
        .def("__repr__", [](const Scenario& s) {
            return "<Scenario " + s.name() + " N=" + std::to_string(s.node_count()) + ">";
        });

    m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); }, py::arg("text"));

    m.def("scheme_names", [] {
        std::vector<std::string> out;
        for (SchemeId s : kAllSchemes) out.emplace_back(scheme_name(s));
        return out;
    });

    m.def(
        "run",
        [](const Scenario& sc, const std::string& scheme, const std::string& schedule, std::uint64_t seed,
           std::int64_t step_limit, const std::string& format) {
            SimOptions o;
            o.step_limit = step_limit;
            const auto trace_format = parse_trace_format(format);
            if (!trace_format) throw Error(ErrorKind::Validation, "unknown trace format '" + format + "'");
            o.record_dags = *trace_format == TraceFormat::DotFrames;
            Trace trace;
            {
                py::gil_scoped_release release;
                trace = run(sc, scheme_from(scheme), schedule_from(schedule, seed), o);
            }
            py::dict d;
            d["outcome"] = std::string(outcome_name(trace.outcome));
            d["diagnostic"] = trace.diagnostic;
            d["steps"] = trace.totals.steps;
            d["total_updates"] = trace.totals.total_updates;
            d["total_reversals"] = trace.totals.total_reversals;
            d["max_state_bits"] = trace.totals.max_state_bits;
            d["updates_per_node"] =
                std::vector<std::int64_t>(trace.totals.updates_per_node.begin() + 1, trace.totals.updates_per_node.end());
            d["trace"] = emit_trace(trace, *trace_format);
            return d;
        },
        py::arg("scenario"), py::arg("scheme") = "no-full", py::arg("schedule") = "single-random",
        py::arg("seed") = 0, py::arg("step_limit") = 0, py::arg("format") = "jsonl");

    m.def(
        "verify",
        [](const Scenario& sc, std::optional<std::vector<std::string>> schemes, const std::string& schedule,
           std::uint64_t seed, bool order_invariance) {
            BatteryOptions o;
            if (schemes) {
                o.schemes.clear();
                for (const auto& s : *schemes) o.schemes.push_back(scheme_from(s));
            }
            o.schedule = schedule_from(schedule, seed);
            o.order_invariance = order_invariance;
            std::vector<CheckReport> reports;
            {
                py::gil_scoped_release release;
                reports = verify_scenario(sc, o);
            }
            py::list out;
            for (const auto& r : reports) out.append(report_dict(r));
            return out;
        },
        py::arg("scenario"), py::arg("schemes") = py::none(), py::arg("schedule") = "single-random",
        py::arg("seed") = 0, py::arg("order_invariance") = true);

    m.def(
        "enumerate",
        [](const Scenario& sc, const std::string& scheme, const std::string& branching) {
            EnumerationOptions o;
            if (branching == "singletons") {
                o.branching = Branching::Singletons;
            } else if (branching != "subsets") {
                throw Error(ErrorKind::Validation, "branching must be 'subsets' or 'singletons'");
            }
            const auto r = enumerate_all_schedules(sc, scheme_from(scheme), o);
            py::dict d;
            d["final_dags"] = r.final_dags.size();
            d["states_explored"] = r.states_explored;
            d["terminal_states"] = r.terminal_states;
            d["all_destination_oriented"] = r.all_destination_oriented;
            std::vector<std::string> witnesses;
            for (const auto& w : r.witnesses) witnesses.push_back(serialize_schedule(w));
            d["witnesses"] = witnesses;
            return d;
        },
        py::arg("scenario"), py::arg("scheme"), py::arg("branching") = "subsets");

    m.def("random_void_scenario", &random_void_scenario, py::arg("n"), py::arg("seed"));
    m.def("random_partition_scenario", &random_partition_scenario, py::arg("n"), py::arg("seed"));
    m.def("all_connected_topologies", &all_connected_topologies, py::arg("n"));
    m.def("hand_picked_scenarios", &hand_picked_scenarios);
    m.def("running_example", &running_example);
}
