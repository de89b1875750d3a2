#include "linkrev/core_model.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <string>
#include <tuple>

#include "linkrev/error.hpp"

namespace linkrev {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UnknownNode: return "UnknownNode";
        case ErrorKind::SchemeMismatch: return "SchemeMismatch";
        case ErrorKind::NonAdjacentTau: return "NonAdjacentTau";
        case ErrorKind::NotTotallyOrdered: return "NotTotallyOrdered";
        case ErrorKind::EmptyNeighborhood: return "EmptyNeighborhood";
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::InvalidTopology: return "InvalidTopology";
        case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorKind::HeightOutOfRange: return "HeightOutOfRange";
        case ErrorKind::OverflowRisk: return "OverflowRisk";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::AdditionForbidden: return "AdditionForbidden";
        case ErrorKind::EmptyStuckSetButCalled: return "EmptyStuckSetButCalled";
        case ErrorKind::ScheduleInvalid: return "ScheduleInvalid";
        case ErrorKind::ExplosionGuard: return "ExplosionGuard";
        case ErrorKind::Validation: return "ValidationError";
    }
    return "Error";
}

namespace {

struct SchemeInfo {
    SchemeId id;
    std::string_view name;
};

constexpr std::array<SchemeInfo, 8> kSchemeNames = {{
    {SchemeId::GbFull, "gb-full"},
    {SchemeId::GbPartial, "gb-partial"},
    {SchemeId::NoFull, "no-full"},
    {SchemeId::TwoBitFull, "two-bit-full"},
    {SchemeId::OneBitFull, "one-bit-full"},
    {SchemeId::NoPartial, "no-partial"},
    {SchemeId::TwoBitPartial, "two-bit-partial"},
    {SchemeId::BaselineIncrement, "baseline-increment"},
}};

}  // namespace

std::string_view scheme_name(SchemeId scheme) {
    for (const auto& info : kSchemeNames) {
        if (info.id == scheme) return info.name;
    }
    return "unknown";
}

std::optional<SchemeId> parse_scheme(std::string_view name) {
    for (const auto& info : kSchemeNames) {
        if (info.name == name) return info.id;
    }
    return std::nullopt;
}

bool is_full_reversal(SchemeId scheme) {
    return scheme == SchemeId::GbFull || scheme == SchemeId::NoFull || scheme == SchemeId::TwoBitFull ||
           scheme == SchemeId::OneBitFull;
}

bool is_partial_reversal(SchemeId scheme) {
    return scheme == SchemeId::GbPartial || scheme == SchemeId::NoPartial || scheme == SchemeId::TwoBitPartial;
}

bool is_neighbor_oblivious(SchemeId scheme) { return scheme != SchemeId::GbFull && scheme != SchemeId::GbPartial; }

bool tracks_update_count(SchemeId scheme) { return scheme == SchemeId::NoFull || scheme == SchemeId::NoPartial; }

namespace {

int signed_bits(std::int64_t v) {
    const auto mag = static_cast<std::uint64_t>(v < 0 ? -v : v);
    return static_cast<int>(std::bit_width(mag)) + 1;
}

int unsigned_bits(std::int64_t v) { return std::max(1, static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v)))); }

}  // namespace

int state_bits(const NodeState& state) {
    return std::visit(
        [](const auto& s) -> int {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, GbFullState>) {
                return signed_bits(s.h);
            } else if constexpr (std::is_same_v<S, GbPartialState>) {
                return signed_bits(s.p) + signed_bits(s.h);
            } else if constexpr (std::is_same_v<S, UnboundedState>) {
                return unsigned_bits(s.t) + unsigned_bits(s.h);
            } else if constexpr (std::is_same_v<S, TauState>) {
                return 2;
            } else {
                return 1;
            }
        },
        state);
}

// ---------------------------------------------------------------------------
// Topology

Topology::Topology(int node_count, std::vector<Edge> edges) : n_(node_count), edges_(std::move(edges)) {
    if (n_ < 1) throw Error(ErrorKind::InvalidTopology, "node count must be positive");
    for (const auto& e : edges_) {
        if (e.a < 0 || e.b > n_) {
            throw Error(ErrorKind::InvalidTopology,
                        "link " + std::to_string(e.a) + "-" + std::to_string(e.b) + " references an unknown node");
        }
        if (e.a == e.b) throw Error(ErrorKind::InvalidTopology, "self-loop at node " + std::to_string(e.a));
    }
    std::sort(edges_.begin(), edges_.end());
    if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
        throw Error(ErrorKind::InvalidTopology,
                    "duplicate link " + std::to_string(dup->a) + "-" + std::to_string(dup->b));
    }
    active_.assign(static_cast<std::size_t>(n_) + 1, true);
    rebuild();
}

void Topology::rebuild() {
    adjacency_.assign(static_cast<std::size_t>(n_) + 1, {});
    for (const auto& e : edges_) {
        adjacency_[e.a].push_back(e.b);
        adjacency_[e.b].push_back(e.a);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

std::span<const NodeId> Topology::neighbors(NodeId i) const {
    if (i < 0 || i > n_) throw Error(ErrorKind::UnknownNode, "node " + std::to_string(i));
    return adjacency_[i];
}

bool Topology::has_edge(NodeId a, NodeId b) const {
    if (a == b) return false;
    return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b));
}

bool Topology::is_active(NodeId i) const {
    if (i < 0 || i > n_) throw Error(ErrorKind::UnknownNode, "node " + std::to_string(i));
    return active_[i];
}

std::vector<NodeId> Topology::active_nodes() const {
    std::vector<NodeId> out;
    for (NodeId i = 1; i <= n_; ++i) {
        if (active_[i]) out.push_back(i);
    }
    return out;
}

std::vector<int> Topology::hop_counts() const {
    std::vector<int> dist(static_cast<std::size_t>(n_) + 1, -1);
    std::deque<NodeId> queue{kDestination};
    dist[kDestination] = 0;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : adjacency_[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

bool Topology::is_connected() const {
    const auto dist = hop_counts();
    for (NodeId i = 1; i <= n_; ++i) {
        if (active_[i] && dist[i] < 0) return false;
    }
    return true;
}

Topology Topology::without_node(NodeId i) const {
    if (i <= 0 || i > n_) throw Error(ErrorKind::UnknownNode, "cannot remove node " + std::to_string(i));
    std::vector<bool> keep = active_;
    keep[i] = false;
    return restricted_to(keep);
}

Topology Topology::without_edge(Edge e) const {
    Topology out = *this;
    auto it = std::lower_bound(out.edges_.begin(), out.edges_.end(), e);
    if (it == out.edges_.end() || *it != e) {
        throw Error(ErrorKind::InvalidTopology,
                    "no link " + std::to_string(e.a) + "-" + std::to_string(e.b) + " to remove");
    }
    out.edges_.erase(it);
    out.rebuild();
    return out;
}

Topology Topology::restricted_to(const std::vector<bool>& keep) const {
    Topology out = *this;
    for (NodeId i = 1; i <= n_; ++i) {
        if (static_cast<std::size_t>(i) >= keep.size() || !keep[i]) out.active_[i] = false;
    }
    std::erase_if(out.edges_, [&](const Edge& e) { return !out.active_[e.a] || !out.active_[e.b]; });
    out.rebuild();
    return out;
}

// ---------------------------------------------------------------------------
// Heights

HeightAssignment HeightAssignment::from_heights(std::span<const Height> per_node) {
    HeightAssignment out;
    out.h0_.assign(per_node.size() + 1, 0);
    for (std::size_t k = 0; k < per_node.size(); ++k) {
        if (per_node[k] <= 0) {
            throw Error(ErrorKind::HeightOutOfRange, "initial height of node " + std::to_string(k + 1) +
                                                         " must be a positive integer, got " +
                                                         std::to_string(per_node[k]));
        }
        out.h0_[k + 1] = per_node[k];
        out.h_max_ = std::max(out.h_max_, per_node[k]);
    }
    return out;
}

HeightAssignment HeightAssignment::hop_counts(const Topology& topo) {
    const auto dist = topo.hop_counts();
    std::vector<Height> heights;
    for (NodeId i = 1; i <= topo.node_count(); ++i) {
        if (dist[i] < 0) throw Error(ErrorKind::DisconnectedGraph, "node " + std::to_string(i) + " cannot reach D");
        heights.push_back(dist[i]);
    }
    return from_heights(heights);
}

Height HeightAssignment::initial(NodeId i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= h0_.size()) {
        throw Error(ErrorKind::UnknownNode, "no initial height for node " + std::to_string(i));
    }
    return h0_[i];
}

// ---------------------------------------------------------------------------
// Orderings

namespace {

template <typename S>
const S& expect(const NodeState& state, SchemeId scheme) {
    if (const S* s = std::get_if<S>(&state)) return *s;
    throw Error(ErrorKind::SchemeMismatch, "state variant does not belong to scheme " + std::string(scheme_name(scheme)));
}

const UnboundedState& expect_unbounded(const NodeState& state, SchemeId scheme, ReversalMode mode) {
    const auto& s = expect<UnboundedState>(state, scheme);
    if (s.mode != mode) throw Error(ErrorKind::SchemeMismatch, "unbounded state has the wrong reversal mode");
    return s;
}

const TauState& expect_tau(const NodeState& state, SchemeId scheme, ReversalMode mode) {
    const auto& s = expect<TauState>(state, scheme);
    if (s.mode != mode) throw Error(ErrorKind::SchemeMismatch, "tau state has the wrong reversal mode");
    return s;
}

template <typename Key>
Ordering order_of(const Key& a, const Key& b) {
    return a < b ? Ordering::Less : Ordering::Greater;
}

/// Order of two tau values on the cycle 0 < 1 < 2 < 3 < 0; nullopt when equal.
std::optional<Ordering> cyclic_order(unsigned a, unsigned b) {
    switch ((a - b) & 3u) {
        case 0: return std::nullopt;
        case 1: return Ordering::Greater;
        case 3: return Ordering::Less;
        default:
            throw Error(ErrorKind::NonAdjacentTau,
                        "tau values " + std::to_string(a) + " and " + std::to_string(b) + " are not adjacent");
    }
}

std::int64_t alternating(std::int64_t t, NodeId id) { return (t % 2 == 0) ? id : -static_cast<std::int64_t>(id); }

}  // namespace

Ordering compare_states(NodeId a_id, const NodeState& a, NodeId b_id, const NodeState& b, SchemeId scheme,
                        const HeightAssignment& h0) {
    if (a_id == b_id) throw Error(ErrorKind::Validation, "compare_states needs two distinct nodes");
    if (a_id == kDestination) return Ordering::Less;
    if (b_id == kDestination) return Ordering::Greater;

    switch (scheme) {
        case SchemeId::GbFull:
        case SchemeId::BaselineIncrement: {
            const auto& x = expect<GbFullState>(a, scheme);
            const auto& y = expect<GbFullState>(b, scheme);
            return order_of(std::tuple(x.h, a_id), std::tuple(y.h, b_id));
        }
        case SchemeId::GbPartial: {
            const auto& x = expect<GbPartialState>(a, scheme);
            const auto& y = expect<GbPartialState>(b, scheme);
            return order_of(std::tuple(x.p, x.h, a_id), std::tuple(y.p, y.h, b_id));
        }
        case SchemeId::NoFull: {
            const auto& x = expect_unbounded(a, scheme, ReversalMode::Full);
            const auto& y = expect_unbounded(b, scheme, ReversalMode::Full);
            return order_of(std::tuple(x.t, x.h, a_id), std::tuple(y.t, y.h, b_id));
        }
        case SchemeId::NoPartial: {
            const auto& x = expect_unbounded(a, scheme, ReversalMode::Partial);
            const auto& y = expect_unbounded(b, scheme, ReversalMode::Partial);
            return order_of(std::tuple(x.t, x.h, alternating(x.t, a_id)), std::tuple(y.t, y.h, alternating(y.t, b_id)));
        }
        case SchemeId::TwoBitFull:
        case SchemeId::TwoBitPartial: {
            const auto mode = scheme == SchemeId::TwoBitFull ? ReversalMode::Full : ReversalMode::Partial;
            const auto& x = expect_tau(a, scheme, mode);
            const auto& y = expect_tau(b, scheme, mode);
            if (auto by_tau = cyclic_order(x.tau, y.tau)) return *by_tau;
            const auto by_height = order_of(std::tuple(h0.initial(a_id), a_id), std::tuple(h0.initial(b_id), b_id));
            // Odd tau flips the sign of the whole (h(0), id) pair.
            if (mode == ReversalMode::Partial && (x.tau & 1u)) {
                return by_height == Ordering::Less ? Ordering::Greater : Ordering::Less;
            }
            return by_height;
        }
        case SchemeId::OneBitFull:
            (void)expect<DeltaState>(a, scheme);
            (void)expect<DeltaState>(b, scheme);
            throw Error(ErrorKind::NotTotallyOrdered, "one-bit states only orient individual links");
    }
    throw Error(ErrorKind::SchemeMismatch, "unknown scheme");
}

bool link_points_to(NodeId from, NodeId to, const StateVector& states, SchemeId scheme, const HeightAssignment& h0) {
    if (to == kDestination) return true;
    if (from == kDestination) return false;
    if (scheme == SchemeId::OneBitFull) {
        const auto& df = expect<DeltaState>(states.at(from), scheme);
        const auto& dt = expect<DeltaState>(states.at(to), scheme);
        const bool from_higher = std::tuple(h0.initial(from), from) > std::tuple(h0.initial(to), to);
        return from_higher == (df.delta == dt.delta);
    }
    return compare_states(from, states.at(from), to, states.at(to), scheme, h0) == Ordering::Greater;
}

std::vector<NodeId> forwarding_set(NodeId i, const StateVector& states, const Topology& topo, SchemeId scheme,
                                   const HeightAssignment& h0) {
    if (i <= 0 || i > topo.node_count()) throw Error(ErrorKind::UnknownNode, "node " + std::to_string(i));
    std::vector<NodeId> out;
    for (NodeId j : topo.neighbors(i)) {
        if (link_points_to(i, j, states, scheme, h0)) out.push_back(j);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Routing DAG

RoutingDag::RoutingDag(int node_count, std::vector<Arc> arcs) : n_(node_count), arcs_(std::move(arcs)) {}

int RoutingDag::out_degree(NodeId i) const {
    return static_cast<int>(std::count_if(arcs_.begin(), arcs_.end(), [i](const Arc& a) { return a.from == i; }));
}

std::vector<NodeId> RoutingDag::successors(NodeId i) const {
    std::vector<NodeId> out;
    for (const auto& a : arcs_) {
        if (a.from == i) out.push_back(a.to);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool RoutingDag::is_acyclic() const {
    const auto size = static_cast<std::size_t>(n_) + 1;
    std::vector<int> indegree(size, 0);
    std::vector<std::vector<NodeId>> out(size);
    for (const auto& a : arcs_) {
        out[a.from].push_back(a.to);
        ++indegree[a.to];
    }
    std::vector<NodeId> ready;
    for (std::size_t v = 0; v < size; ++v) {
        if (indegree[v] == 0) ready.push_back(static_cast<NodeId>(v));
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        const NodeId u = ready.back();
        ready.pop_back();
        ++seen;
        for (NodeId v : out[u]) {
            if (--indegree[v] == 0) ready.push_back(v);
        }
    }
    return seen == size;
}

std::uint64_t RoutingDag::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint32_t v) {
        for (int k = 0; k < 4; ++k) {
            h ^= (v >> (8 * k)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint32_t>(n_));
    for (const auto& a : arcs_) {
        mix(static_cast<std::uint32_t>(a.from));
        mix(static_cast<std::uint32_t>(a.to));
    }
    return h;
}

RoutingDag routing_dag(const StateVector& states, const Topology& topo, SchemeId scheme, const HeightAssignment& h0) {
    std::vector<Arc> arcs;
    arcs.reserve(topo.edges().size());
    for (const auto& e : topo.edges()) {
        if (link_points_to(e.a, e.b, states, scheme, h0)) {
            arcs.push_back({e.a, e.b});
        } else {
            arcs.push_back({e.b, e.a});
        }
    }
    return RoutingDag(topo.node_count(), std::move(arcs));
}

std::vector<NodeId> stuck_set(const RoutingDag& dag, const Topology& topo) {
    std::vector<int> out_deg(static_cast<std::size_t>(topo.node_count()) + 1, 0);
    for (const auto& a : dag.arcs()) ++out_deg[a.from];
    std::vector<NodeId> stuck;
    for (NodeId i = 1; i <= topo.node_count(); ++i) {
        if (topo.is_active(i) && out_deg[i] == 0) stuck.push_back(i);
    }
    return stuck;
}

std::vector<bool> reaches_destination(const RoutingDag& dag, const Topology& topo) {
    const auto size = static_cast<std::size_t>(topo.node_count()) + 1;
    std::vector<std::vector<NodeId>> incoming(size);
    for (const auto& a : dag.arcs()) incoming[a.to].push_back(a.from);
    std::vector<bool> reached(size, false);
    std::vector<NodeId> stack{kDestination};
    reached[kDestination] = true;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u : incoming[v]) {
            if (!reached[u]) {
                reached[u] = true;
                stack.push_back(u);
            }
        }
    }
    return reached;
}

bool is_destination_oriented(const RoutingDag& dag, const Topology& topo) {
    const auto reached = reaches_destination(dag, topo);
    for (NodeId i = 1; i <= topo.node_count(); ++i) {
        if (topo.is_active(i) && !reached[i]) return false;
    }
    return true;
}

}  // namespace linkrev
