// linkrev: run, verify, compare and sweep link-reversal routing schemes.
//
// Exit codes: 0 converged/verified, 2 property failure, 3 partition, 4 input error.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "linkrev/error.hpp"
#include "linkrev/generators.hpp"
#include "linkrev/scenario_io.hpp"
#include "linkrev/sim.hpp"
#include "linkrev/verifier.hpp"

namespace {

using namespace linkrev;

constexpr int kExitOk = 0;
constexpr int kExitProperty = 2;
constexpr int kExitPartition = 3;
constexpr int kExitInput = 4;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::int64_t env_step_limit() {
    if (const char* v = std::getenv("LINKREV_STEP_LIMIT")) {
        try {
            return std::stoll(v);
        } catch (const std::exception&) {
            throw InputError(std::string("LINKREV_STEP_LIMIT is not an integer: ") + v);
        }
    }
    return 0;
}

SchemeId scheme_arg(const std::string& name) {
    if (auto s = parse_scheme(name)) return *s;
    throw InputError("unknown scheme '" + name + "'");
}

std::vector<SchemeId> scheme_list(const std::string& arg) {
    if (arg == "all") return {kReversalSchemes.begin(), kReversalSchemes.end()};
    std::vector<SchemeId> out;
    std::stringstream in(arg);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(scheme_arg(item));
    }
    return out;
}

/// A policy name or the path of a schedule file.
Schedule schedule_arg(const std::string& arg, std::uint64_t seed) {
    if (auto p = parse_policy(arg)) {
        switch (*p) {
            case SchedulePolicy::SingleRandom: return Schedule::single_random(seed);
            case SchedulePolicy::SubsetRandom: return Schedule::subset_random(seed);
            case SchedulePolicy::Synchronous: return Schedule::synchronous();
            case SchedulePolicy::FixedSequence: throw InputError("the fixed policy needs a schedule file");
        }
    }
    std::ifstream in(arg);
    if (!in) throw InputError("'" + arg + "' is neither a schedule policy nor a readable schedule file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_schedule(buf.str());
    } catch (const Error& e) {
        throw InputError(arg + ": " + e.what());
    }
}

Scenario scenario_arg(const std::string& path) {
    try {
        return load_scenario(path);
    } catch (const Error& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string per_node(const std::vector<std::int64_t>& counts) {
    std::ostringstream out;
    for (std::size_t i = 1; i < counts.size(); ++i) out << (i > 1 ? " " : "") << i << '=' << counts[i];
    return out.str();
}

/// Runs fn(k) for k in [0, count) on `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto worker = [&] {
        for (std::size_t k; (k = next++) < count;) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// ---------------------------------------------------------------------------

struct RunArgs {
    std::string scenario;
    std::string scheme = "no-full";
    std::string schedule = "single-random";
    std::uint64_t seed = 0;
    std::int64_t step_limit = 0;
    std::string trace_out;
    std::string format = "jsonl";
};

int cmd_run(const RunArgs& a) {
    const Scenario scenario = scenario_arg(a.scenario);
    const SchemeId scheme = scheme_arg(a.scheme);
    const auto format = parse_trace_format(a.format);
    if (!format) throw InputError("unknown trace format '" + a.format + "'");
    SimOptions options;
    options.step_limit = a.step_limit ? a.step_limit : env_step_limit();
    options.record_dags = !a.trace_out.empty() && *format == TraceFormat::DotFrames;
    const Trace trace = run(scenario, scheme, schedule_arg(a.schedule, a.seed), options);

    if (!a.trace_out.empty()) {
        std::ofstream out(a.trace_out, std::ios::binary);
        if (!out) throw InputError("cannot write " + a.trace_out);
        out << emit_trace(trace, *format);
    }
    const auto& t = trace.totals;
    std::cout << outcome_name(trace.outcome) << " steps=" << t.steps << " updates=" << t.total_updates
              << " reversals=" << t.total_reversals << "\n";
    std::cout << "per-node " << per_node(t.updates_per_node) << "\n";
    switch (trace.outcome) {
        case Outcome::Converged: return kExitOk;
        case Outcome::Partitioned:
            std::cerr << "partitioned: " << trace.diagnostic << "\n";
            return kExitPartition;
        default:
            std::cerr << outcome_name(trace.outcome) << ": " << trace.diagnostic << "\n";
            return kExitProperty;
    }
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string scenario;
    std::vector<int> random;  // N, seed count
    int exhaustive = 0;
    std::string scheme = "all";
    std::string schedule = "single-random";
    std::uint64_t seed = 0;
    std::int64_t step_limit = 0;
    unsigned jobs = 0;
    bool json = false;
    bool quiet = false;
};

struct Task {
    std::function<std::vector<CheckReport>()> work;
    std::vector<CheckReport> reports;
};

int print_reports(const std::vector<Task>& tasks, const VerifyArgs& a) {
    std::size_t total = 0, failed = 0, informational = 0;
    std::vector<const CheckReport*> failures;
    if (!a.json && !a.quiet) {
        std::cout << std::left << std::setw(40) << "check" << std::setw(26) << "scenario" << std::setw(17) << "scheme"
                  << std::setw(6) << "verdict" << "  detail\n";
    }
    for (const auto& task : tasks) {
        for (const auto& r : task.reports) {
            ++total;
            if (r.informational) ++informational;
            if (!r.passed && !r.informational) {
                ++failed;
                failures.push_back(&r);
            }
            if (a.json) {
                std::cout << report_json(r) << "\n";
            } else if (!a.quiet || (!r.passed && !r.informational)) {
                std::string verdict = r.passed ? "pass" : "FAIL";
                if (r.informational) verdict = r.passed ? "info" : "diff";
                std::cout << std::left << std::setw(40) << r.check << std::setw(26) << r.scenario << std::setw(17)
                          << (r.scheme ? std::string(scheme_name(*r.scheme)) : "-") << std::setw(6) << verdict << "  "
                          << r.detail;
                if (r.step) std::cout << " (step " << *r.step << ")";
                std::cout << "\n";
            }
        }
    }
    if (!a.json) {
        for (const auto* r : failures) {
            std::cout << "\ncounterexample for " << r->check << " on " << r->scenario << ":\n"
                      << r->counterexample_scenario << r->counterexample_schedule;
        }
        std::cout << "checks=" << total << " passed=" << (total - failed - informational) << " failed=" << failed
                  << " informational=" << informational << "\n";
    }
    return failed ? kExitProperty : kExitOk;
}

int cmd_verify(const VerifyArgs& a) {
    const int sources = !a.scenario.empty() + !a.random.empty() + (a.exhaustive > 0);
    if (sources != 1) throw InputError("verify takes exactly one of: a scenario file, --random N SEEDS, --exhaustive N");
    const auto schemes = a.scheme == "all" ? std::vector<SchemeId>{} : scheme_list(a.scheme);

    std::vector<Task> tasks;
    if (!a.scenario.empty() || !a.random.empty()) {
        BatteryOptions options;
        if (!schemes.empty()) options.schemes = schemes;
        options.step_limit = a.step_limit ? a.step_limit : env_step_limit();
        if (!a.scenario.empty()) {
            const Scenario scenario = scenario_arg(a.scenario);
            options.schedule = schedule_arg(a.schedule, a.seed);
            tasks.push_back({[scenario, options] { return verify_scenario(scenario, options); }, {}});
        } else {
            if (a.random.size() != 2 || a.random[0] < 2 || a.random[1] < 1) {
                throw InputError("--random takes N >= 2 and a seed count >= 1");
            }
            options.order_invariance = false;
            const int n = a.random[0];
            for (int k = 0; k < a.random[1]; ++k) {
                const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(k);
                auto opts = options;
                opts.schedule = schedule_arg(a.schedule, seed);
                tasks.push_back({[n, seed, opts] { return verify_scenario(random_void_scenario(n, seed), opts); }, {}});
            }
        }
    } else {
        if (a.exhaustive < 1 || a.exhaustive > 5) throw InputError("--exhaustive takes 1 <= N <= 5");
        const std::vector<SchemeId> enum_schemes =
            schemes.empty() ? std::vector<SchemeId>{SchemeId::NoFull, SchemeId::NoPartial, SchemeId::GbFull,
                                                    SchemeId::GbPartial}
                            : schemes;
        for (auto& scenario : all_connected_topologies(a.exhaustive)) {
            const RoutingDag dag = routing_dag(initial_states(SchemeId::NoFull, scenario.heights), scenario.topology,
                                               SchemeId::NoFull, scenario.heights);
            if (stuck_set(dag, scenario.topology).empty()) continue;  // no void
            tasks.push_back({[scenario, enum_schemes] {
                                 std::vector<CheckReport> out;
                                 for (SchemeId s : enum_schemes) {
                                     for (auto b : {Branching::Singletons, Branching::Subsets}) {
                                         EnumerationOptions e;
                                         e.branching = b;
                                         out.push_back(check_order_invariance(scenario, s, e));
                                     }
                                 }
                                 return out;
                             },
                             {}});
        }
    }
    const unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
    parallel_for(tasks.size(), jobs, [&](std::size_t k) { tasks[k].reports = tasks[k].work(); });
    return print_reports(tasks, a);
}

// ---------------------------------------------------------------------------

struct CompareArgs {
    std::string scenario;
    std::string schemes;
    std::string schedule = "single-random";
    std::uint64_t seed = 0;
    std::int64_t step_limit = 0;
};

int cmd_compare(const CompareArgs& a) {
    const Scenario scenario = scenario_arg(a.scenario);
    const auto schemes = scheme_list(a.schemes);
    if (schemes.size() < 2) throw InputError("compare needs at least two schemes");
    const Schedule schedule = schedule_arg(a.schedule, a.seed);
    SimOptions options;
    options.step_limit = a.step_limit ? a.step_limit : env_step_limit();
    options.record_dags = false;

    std::vector<Trace> traces;
    for (SchemeId s : schemes) traces.push_back(run(scenario, s, schedule, options));

    std::cout << std::left << std::setw(20) << "scheme" << std::right << std::setw(8) << "steps" << std::setw(9)
              << "updates" << std::setw(11) << "reversals" << std::setw(10) << "max-bits" << "  outcome\n";
    for (const auto& t : traces) {
        std::cout << std::left << std::setw(20) << scheme_name(t.scheme) << std::right << std::setw(8) << t.totals.steps
                  << std::setw(9) << t.totals.total_updates << std::setw(11) << t.totals.total_reversals
                  << std::setw(10) << t.totals.max_state_bits << "  " << outcome_name(t.outcome) << "\n";
    }
    for (const auto& t : traces) std::cout << "per-node " << scheme_name(t.scheme) << ": " << per_node(t.totals.updates_per_node) << "\n";

    bool mismatch = false;
    for (std::size_t x = 0; x < schemes.size(); ++x) {
        for (std::size_t y = x + 1; y < schemes.size(); ++y) {
            const auto pairs = equivalence_pairs();
            auto match = std::find_if(pairs.begin(), pairs.end(), [&](const EquivalencePair& p) {
                return (p.reference == schemes[x] && p.shadow == schemes[y]) ||
                       (p.reference == schemes[y] && p.shadow == schemes[x]);
            });
            const bool related_full = is_full_reversal(schemes[x]) && is_full_reversal(schemes[y]);
            const bool related_partial = schemes[x] != SchemeId::GbPartial && schemes[y] != SchemeId::GbPartial &&
                                         is_partial_reversal(schemes[x]) && is_partial_reversal(schemes[y]);
            if (match == pairs.end() && !related_full && !related_partial) continue;
            const bool informational = match != pairs.end() && match->informational;
            const auto r = check_scheme_equivalence(scenario, schedule, schemes[x], schemes[y], options.step_limit);
            std::cout << "equivalence " << scheme_name(schemes[x]) << "~" << scheme_name(schemes[y]) << ": "
                      << (r.passed ? "identical" : "differs") << " (" << r.detail;
            if (r.step) std::cout << ", step " << *r.step;
            std::cout << ")" << (informational ? " [informational]" : "") << "\n";
            if (!r.passed && !informational) mismatch = true;
        }
    }
    return mismatch ? kExitProperty : kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
    int n_min = 4;
    int n_max = 12;
    int seeds = 10;
    std::uint64_t seed = 0;
    std::string scheme = "all";
    std::string schedule = "single-random";
    std::int64_t step_limit = 0;
    unsigned jobs = 0;
};

int cmd_sweep(const SweepArgs& a) {
    if (a.n_min < 2 || a.n_max < a.n_min || a.seeds < 1) throw InputError("sweep needs 2 <= n-min <= n-max and seeds >= 1");
    const auto schemes = scheme_list(a.scheme);
    struct Row {
        int n;
        std::uint64_t seed;
        std::vector<std::string> lines;
        bool converged = true;
    };
    std::vector<Row> rows;
    for (int n = a.n_min; n <= a.n_max; ++n) {
        for (int k = 0; k < a.seeds; ++k) rows.push_back({n, a.seed + static_cast<std::uint64_t>(k), {}});
    }
    SimOptions options;
    options.step_limit = a.step_limit ? a.step_limit : env_step_limit();
    options.record_dags = false;
    const unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
    parallel_for(rows.size(), jobs, [&](std::size_t k) {
        auto& row = rows[k];
        const Scenario scenario = random_void_scenario(row.n, row.seed);
        for (SchemeId s : schemes) {
            const Trace t = run(scenario, s, schedule_arg(a.schedule, row.seed), options);
            std::ostringstream line;
            line << scenario.name() << ',' << row.n << ',' << scheme_name(s) << ',' << outcome_name(t.outcome) << ','
                 << t.totals.steps << ',' << t.totals.total_updates << ',' << t.totals.total_reversals << ','
                 << t.totals.max_state_bits;
            row.lines.push_back(line.str());
            if (t.outcome != Outcome::Converged && s != SchemeId::BaselineIncrement) row.converged = false;
        }
    });
    std::cout << "scenario,n,scheme,outcome,steps,total_updates,total_reversals,max_state_bits\n";
    bool all = true;
    for (const auto& row : rows) {
        for (const auto& l : row.lines) std::cout << l << "\n";
        all = all && row.converged;
    }
    return all ? kExitOk : kExitProperty;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link reversal routing simulator and verifier"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Simulate one scheme on a scenario");
    run_cmd->add_option("scenario", run_args.scenario, "Scenario file")->required();
    run_cmd->add_option("--scheme", run_args.scheme, "Scheme name");
    run_cmd->add_option("--schedule", run_args.schedule, "Schedule policy or schedule file");
    run_cmd->add_option("--seed", run_args.seed, "Scheduler seed");
    run_cmd->add_option("--step-limit", run_args.step_limit, "Step cap (default 4 N^2, or LINKREV_STEP_LIMIT)");
    run_cmd->add_option("--trace-out", run_args.trace_out, "Write the trace to this file");
    run_cmd->add_option("--format", run_args.format, "Trace format: jsonl, csv or dot-frames");

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "Run the verifier battery");
    verify_cmd->add_option("scenario", verify_args.scenario, "Scenario file");
    verify_cmd->add_option("--random", verify_args.random, "N and number of seeded random scenarios")->expected(2);
    verify_cmd->add_option("--exhaustive", verify_args.exhaustive, "All connected N-node topologies with a void");
    verify_cmd->add_option("--scheme", verify_args.scheme, "all, or a comma-separated scheme list");
    verify_cmd->add_option("--schedule", verify_args.schedule, "Schedule policy or schedule file");
    verify_cmd->add_option("--seed", verify_args.seed, "Scheduler seed; first seed for --random");
    verify_cmd->add_option("--step-limit", verify_args.step_limit, "Step cap");
    verify_cmd->add_option("-j,--jobs", verify_args.jobs, "Worker threads");
    verify_cmd->add_flag("--json", verify_args.json, "One JSON report per line");
    verify_cmd->add_flag("-q,--quiet", verify_args.quiet, "Only print failures and the summary");

    CompareArgs compare_args;
    auto* compare_cmd = app.add_subcommand("compare", "Side-by-side scheme comparison");
    compare_cmd->add_option("scenario", compare_args.scenario, "Scenario file")->required();
    compare_cmd->add_option("--schemes", compare_args.schemes, "Comma-separated scheme list")->required();
    compare_cmd->add_option("--schedule", compare_args.schedule, "Schedule policy or schedule file");
    compare_cmd->add_option("--seed", compare_args.seed, "Scheduler seed");
    compare_cmd->add_option("--step-limit", compare_args.step_limit, "Step cap");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "CSV totals over random scenario families");
    sweep_cmd->add_option("--n-min", sweep_args.n_min, "Smallest N");
    sweep_cmd->add_option("--n-max", sweep_args.n_max, "Largest N");
    sweep_cmd->add_option("--seeds", sweep_args.seeds, "Scenarios per N");
    sweep_cmd->add_option("--seed", sweep_args.seed, "First seed");
    sweep_cmd->add_option("--scheme", sweep_args.scheme, "all, or a comma-separated scheme list");
    sweep_cmd->add_option("--schedule", sweep_args.schedule, "Schedule policy");
    sweep_cmd->add_option("--step-limit", sweep_args.step_limit, "Step cap");
    sweep_cmd->add_option("-j,--jobs", sweep_args.jobs, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*run_cmd) return cmd_run(run_args);
        if (*verify_cmd) return cmd_verify(verify_args);
        if (*compare_cmd) return cmd_compare(compare_args);
        if (*sweep_cmd) return cmd_sweep(sweep_args);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::ExplosionGuard ? kExitProperty : kExitInput;
    }
    return kExitInput;
}
