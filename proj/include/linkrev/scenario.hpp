#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linkrev/core_model.hpp"

namespace linkrev {

enum class EventKind : std::uint8_t { RemoveNode, RemoveLink, Sleep, Wake };

/// Topology change applied before the stuck check of step `at_step`. Events can
/// only remove or silence nodes and links; there is no way to express an addition.
struct SimEvent {
    std::int64_t at_step = 0;
    EventKind kind = EventKind::RemoveNode;
    NodeId node = 0;   // RemoveNode, Sleep, Wake; first endpoint of RemoveLink
    NodeId other = 0;  // second endpoint of RemoveLink
    std::int64_t duration = 0;  // Sleep only; 0 means until an explicit Wake

    friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

/// Syntactic content of a scenario file.
struct ScenarioFile {
    int version = 1;
    std::string name;
    int node_count = 0;
    std::vector<Edge> edges;
    std::optional<std::vector<Height>> heights;
    std::vector<SimEvent> events;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

/// A validated scenario: connected topology, positive heights, events that only
/// remove, and N small enough that z(N + 1) fits in 64 bits.
struct Scenario {
    ScenarioFile file;
    Topology topology;
    HeightAssignment heights;

    /// Throws DisconnectedGraph, HeightOutOfRange, OverflowRisk, InvalidTopology
    /// or Validation.
    static Scenario from_file(ScenarioFile file);

    const std::string& name() const { return file.name; }
    int node_count() const { return file.node_count; }
};

}  // namespace linkrev
