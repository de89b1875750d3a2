#pragma once

// Text formats: scenario files, schedule files, trace exports and check reports.
//
// Scenario grammar (line oriented, '#' starts a comment):
//
//   linkrev-scenario 1
//   name <token>                        optional
//   nodes <N>
//   edges D-1 1-3 2-3                   one or more; tokens separated by spaces or commas
//   edge <a> <b>                        single link, same as "edges a-b"
//   heights <h_1> ... <h_N>             optional; default is hop count to D
//   seed <u64>                          optional
//   event <step> remove-node <i>
//   event <step> remove-link <i> <j>
//   event <step> sleep <i> [<duration>]
//   event <step> wake <i>
//
// The destination is written as D (or 0).

#include <string>
#include <string_view>

#include "linkrev/scenario.hpp"
#include "linkrev/sim.hpp"

namespace linkrev {

/// Parses and validates. Throws SyntaxError (with line/column) for malformed
/// text, plus the Scenario::from_file validation errors.
Scenario parse_scenario(std::string_view text);
ScenarioFile parse_scenario_file(std::string_view text);
std::string serialize_scenario(const ScenarioFile& file);

Scenario load_scenario(const std::string& path);

// Schedule grammar:
//   linkrev-schedule 1
//   policy single-random|subset-random|synchronous|fixed
//   seed <u64>                       random policies
//   step <i> [<j> ...]               fixed policy, one line per step
Schedule parse_schedule(std::string_view text);
std::string serialize_schedule(const Schedule& schedule);

enum class TraceFormat { Jsonl, Csv, DotFrames };
std::optional<TraceFormat> parse_trace_format(std::string_view name);

/// jsonl: one record per step plus a closing totals record.
/// csv: header plus one totals row.
/// dot-frames: one digraph per DAG snapshot, initial included (needs recorded DAGs).
std::string emit_trace(const Trace& trace, TraceFormat format);

}  // namespace linkrev
