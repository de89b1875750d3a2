#include "linkrev/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "linkrev/error.hpp"
#include "linkrev/reversal.hpp"

namespace linkrev {

namespace {

using Rng = std::mt19937_64;

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer, so nearby seeds give unrelated streams
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::size_t uniform(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

/// Random connected graph on ids first..first+count-1, optionally attached to `root`.
void random_connected(Rng& rng, std::vector<NodeId> ids, double extra_p, std::vector<Edge>& edges) {
    for (std::size_t k = 1; k < ids.size(); ++k) edges.emplace_back(ids[k], ids[uniform(rng, k)]);
    std::bernoulli_distribution extra(extra_p);
    for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
            const Edge e(ids[a], ids[b]);
            if (extra(rng) && std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(e);
        }
    }
}

std::vector<NodeId> stuck_at_start(const Topology& topo, const std::vector<int>& heights) {
    std::vector<NodeId> out;
    for (NodeId i = 1; i <= topo.node_count(); ++i) {
        if (!topo.is_active(i)) continue;
        bool lower = false;
        for (NodeId j : topo.neighbors(i)) {
            if (j == kDestination || heights[j] < heights[i] || (heights[j] == heights[i] && j < i)) {
                lower = true;
                break;
            }
        }
        if (!lower) out.push_back(i);
    }
    return out;
}

/// Drops `gone` and renumbers the rest as 1..N in id order.
ScenarioFile relabel_without(int total, NodeId gone, const std::vector<Edge>& edges, const std::vector<int>& hops) {
    std::vector<NodeId> id(static_cast<std::size_t>(total) + 1, -1);
    NodeId next = 0;
    for (NodeId i = 0; i <= total; ++i) {
        if (i != gone) id[i] = next++;
    }
    ScenarioFile f;
    f.node_count = total - 1;
    for (const auto& e : edges) {
        if (e.a != gone && e.b != gone) f.edges.emplace_back(id[e.a], id[e.b]);
    }
    std::sort(f.edges.begin(), f.edges.end());
    std::vector<Height> heights;
    for (NodeId i = 1; i <= total; ++i) {
        if (i != gone) heights.push_back(hops[i]);
    }
    f.heights = std::move(heights);
    return f;
}

}  // namespace

Scenario random_void_scenario(int n, std::uint64_t seed) {
    if (n < 2) throw Error(ErrorKind::Validation, "random scenarios need N >= 2");
    Rng rng(mix(seed, static_cast<std::uint64_t>(n)));
    const int total = n + 1;
    const double extra_p = std::min(1.0, 2.5 / n);
    for (int attempt = 0; attempt < 10'000; ++attempt) {
        std::vector<NodeId> ids(static_cast<std::size_t>(total) + 1);
        std::iota(ids.begin(), ids.end(), 0);
        std::vector<Edge> edges;
        random_connected(rng, ids, extra_p, edges);
        const Topology full(total, edges);
        const auto hops = full.hop_counts();

        std::vector<NodeId> candidates;
        for (NodeId v = 1; v <= total; ++v) {
            const Topology rest = full.without_node(v);
            if (rest.is_connected() && !stuck_at_start(rest, hops).empty()) candidates.push_back(v);
        }
        if (candidates.empty()) continue;
        const NodeId gone = candidates[uniform(rng, candidates.size())];
        ScenarioFile f = relabel_without(total, gone, edges, hops);
        f.name = "random-n" + std::to_string(n) + "-s" + std::to_string(seed);
        f.seed = seed;
        return Scenario::from_file(std::move(f));
    }
    throw Error(ErrorKind::Validation, "could not generate a void scenario");
}

Scenario random_partition_scenario(int n, std::uint64_t seed) {
    if (n < 3) throw Error(ErrorKind::Validation, "partition scenarios need N >= 3");
    Rng rng(mix(seed, 0x70000u + static_cast<std::uint64_t>(n)));
    const int island = std::max(2, n / 3);
    const int main = n - island;
    const double extra_p = std::min(1.0, 2.5 / n);

    // Random labels so the island is not always the highest ids.
    std::vector<NodeId> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<NodeId> main_ids{kDestination};
    main_ids.insert(main_ids.end(), perm.begin(), perm.begin() + main);
    std::vector<NodeId> island_ids(perm.begin() + main, perm.end());

    std::vector<Edge> edges;
    random_connected(rng, main_ids, extra_p, edges);
    random_connected(rng, island_ids, extra_p, edges);
    const NodeId near = main_ids[1 + uniform(rng, main_ids.size() - 1)];
    const NodeId far = island_ids[uniform(rng, island_ids.size())];
    edges.emplace_back(near, far);
    std::sort(edges.begin(), edges.end());

    ScenarioFile f;
    f.name = "partition-n" + std::to_string(n) + "-s" + std::to_string(seed);
    f.node_count = n;
    f.edges = std::move(edges);
    f.seed = seed;
    f.events.push_back(SimEvent{0, EventKind::RemoveLink, std::min(near, far), std::max(near, far), 0});
    return Scenario::from_file(std::move(f));
}

std::vector<Scenario> all_connected_topologies(int n) {
    if (n < 1 || n > 5) throw Error(ErrorKind::Validation, "topology enumeration supports 1 <= N <= 5");
    std::vector<Edge> pairs;
    for (NodeId a = 0; a <= n; ++a) {
        for (NodeId b = a + 1; b <= n; ++b) pairs.emplace_back(a, b);
    }
    std::vector<Height> heights(static_cast<std::size_t>(n));
    std::iota(heights.begin(), heights.end(), 1);

    std::vector<Scenario> out;
    const std::uint64_t subsets = std::uint64_t{1} << pairs.size();
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        std::vector<Edge> edges;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            if (mask & (std::uint64_t{1} << k)) edges.push_back(pairs[k]);
        }
        if (static_cast<int>(edges.size()) < n) continue;
        if (!Topology(n, edges).is_connected()) continue;
        ScenarioFile f;
        f.name = "conn-n" + std::to_string(n) + "-m" + std::to_string(mask);
        f.node_count = n;
        f.edges = std::move(edges);
        f.heights = heights;
        out.push_back(Scenario::from_file(std::move(f)));
    }
    return out;
}

std::vector<Scenario> hand_picked_scenarios() {
    struct Shape {
        const char* name;
        std::vector<Edge> edges;
        std::vector<Height> heights;
    };
    // Heights are chosen against the hop structure so that each starts with a void.
    const std::vector<Shape> shapes = {
        {"chain", {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}, {1, 3, 2, 5, 4}},
        {"chain-far-dip", {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}, {1, 2, 5, 4, 3}},
        {"star-leaf-void", {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}}, {4, 1, 2, 3, 5}},
        {"cycle", {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}}, {1, 4, 2, 3, 5}},
        {"cycle-two-dips", {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}}, {5, 1, 4, 2, 3}},
        {"ladder", {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5}}, {1, 2, 4, 5, 3}},
        {"ladder-deep", {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5}}, {5, 2, 4, 1, 3}},
        {"complete", {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}},
         {5, 1, 2, 3, 4}},
        {"wheel", {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {3, 4}, {4, 5}, {2, 5}}, {5, 1, 3, 2, 4}},
        {"wheel-rim-exit", {{0, 2}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {3, 4}, {4, 5}, {2, 5}}, {1, 2, 3, 4, 5}},
        {"bowtie", {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}}, {1, 2, 5, 3, 4}},
        {"tadpole", {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 5}}, {1, 5, 2, 4, 3}},
        {"fork", {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 5}}, {1, 3, 4, 2, 5}},
        {"bipartite", {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}}, {4, 5, 1, 2, 3}},
        {"diamond-tail", {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 5}}, {1, 3, 4, 2, 5}},
        {"kite", {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}}, {1, 2, 4, 5, 3}},
        {"double-void", {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 5}}, {1, 4, 5, 2, 3}},
        {"pan", {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 2}}, {1, 4, 2, 5, 3}},
        {"bridge-pair", {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}, {4, 5}}, {1, 5, 4, 2, 3}},
        {"dense-void", {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {4, 5}, {3, 5}}, {1, 5, 2, 3, 4}},
    };
    std::vector<Scenario> out;
    for (const auto& s : shapes) {
        ScenarioFile f;
        f.name = std::string("n5-") + s.name;
        f.node_count = 5;
        f.edges = s.edges;
        std::sort(f.edges.begin(), f.edges.end());
        f.heights = s.heights;
        out.push_back(Scenario::from_file(std::move(f)));
    }
    return out;
}

Scenario running_example() {
    ScenarioFile f;
    f.name = "running-example";
    f.node_count = 3;
    f.edges = {{0, 1}, {1, 3}, {2, 3}};
    f.heights = std::vector<Height>{1, 2, 3};
    return Scenario::from_file(std::move(f));
}

}  // namespace linkrev
