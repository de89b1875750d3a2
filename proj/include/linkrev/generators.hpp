#pragma once

// Seeded scenario families used by the verifier battery, the CLI and the tests.

#include <cstdint>
#include <vector>

#include "linkrev/scenario.hpp"

namespace linkrev {

/// Connected random graph on D and N + 1 nodes (random spanning tree plus
/// extra links with probability ~2.5/N), hop-count heights, then one node
/// adjacent to a future void is removed: the removal keeps the graph connected
/// and leaves at least one stuck node. Heights from before the removal are kept.
/// Same (n, seed) always gives the same scenario.
Scenario random_void_scenario(int n, std::uint64_t seed);

/// Two random connected blobs joined by a single bridge link; the bridge is
/// removed at step 0, cutting the blob without the destination off.
Scenario random_partition_scenario(int n, std::uint64_t seed);

/// Every labeled connected graph on {D, 1..n}, with h_i(0) = i. Relabelling
/// covers every ordering of initial heights.
std::vector<Scenario> all_connected_topologies(int n);

/// Fixed N = 5 topologies (chain, star, cycle, ladder, complete graph, wheel
/// and others) with heights chosen so each starts with a stuck node.
std::vector<Scenario> hand_picked_scenarios();

/// The three-node example: D-1, 1-3, 2-3 with heights 1, 2, 3; node 2 is stuck.
Scenario running_example();

}  // namespace linkrev
