#pragma once

// Node identity, per-scheme node states, their orderings, forwarding sets and
// the routing DAG they induce over a topology.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace linkrev {

/// Nondestination nodes are 1..N; the destination is the sentinel 0.
using NodeId = std::int32_t;
inline constexpr NodeId kDestination = 0;

using Height = std::int64_t;

enum class SchemeId : std::uint8_t {
    GbFull,
    GbPartial,
    NoFull,
    TwoBitFull,
    OneBitFull,
    NoPartial,
    TwoBitPartial,
    // Neighbor-oblivious "raise height by one" comparison baseline; not one of
    // the seven reversal algorithms.
    BaselineIncrement,
};

inline constexpr std::array<SchemeId, 7> kReversalSchemes = {
    SchemeId::GbFull,     SchemeId::GbPartial, SchemeId::NoFull,        SchemeId::TwoBitFull,
    SchemeId::OneBitFull, SchemeId::NoPartial, SchemeId::TwoBitPartial,
};

inline constexpr std::array<SchemeId, 8> kAllSchemes = {
    SchemeId::GbFull,     SchemeId::GbPartial, SchemeId::NoFull,        SchemeId::TwoBitFull,
    SchemeId::OneBitFull, SchemeId::NoPartial, SchemeId::TwoBitPartial, SchemeId::BaselineIncrement,
};

enum class ReversalMode : std::uint8_t { Full, Partial };

std::string_view scheme_name(SchemeId scheme);
std::optional<SchemeId> parse_scheme(std::string_view name);

/// Full-reversal schemes reverse every incoming link of a stuck node per update.
bool is_full_reversal(SchemeId scheme);
/// GbPartial, NoPartial and TwoBitPartial.
bool is_partial_reversal(SchemeId scheme);
bool is_neighbor_oblivious(SchemeId scheme);
/// NoFull/NoPartial keep the unbounded update count t_i in their state.
bool tracks_update_count(SchemeId scheme);

// ---------------------------------------------------------------------------
// Node states

/// (h_i, i). Also used by BaselineIncrement, which orders nodes the same way.
struct GbFullState {
    Height h = 0;
    friend bool operator==(const GbFullState&, const GbFullState&) = default;
};

/// (p_i, h_i, i); p starts at zero.
struct GbPartialState {
    std::int64_t p = 0;
    Height h = 0;
    friend bool operator==(const GbPartialState&, const GbPartialState&) = default;
};

/// Update count t and the height h(t) it implies.
struct UnboundedState {
    std::int64_t t = 0;
    Height h = 0;
    ReversalMode mode = ReversalMode::Full;
    friend bool operator==(const UnboundedState&, const UnboundedState&) = default;
};

/// t mod 4, stored in exactly two bits.
struct TauState {
    std::uint8_t tau : 2 = 0;
    ReversalMode mode = ReversalMode::Full;
    friend bool operator==(const TauState& a, const TauState& b) { return a.tau == b.tau && a.mode == b.mode; }
};

/// Single flag bit.
struct DeltaState {
    std::uint8_t delta : 1 = 0;
    friend bool operator==(const DeltaState& a, const DeltaState& b) { return a.delta == b.delta; }
};

using NodeState = std::variant<GbFullState, GbPartialState, UnboundedState, TauState, DeltaState>;

/// Indexed by NodeId. Slot 0 belongs to the destination and is never read.
using StateVector = std::vector<NodeState>;

/// Bits needed to store the dynamic part of a state.
int state_bits(const NodeState& state);

// ---------------------------------------------------------------------------
// Topology

/// Unordered link, normalized so that a < b.
struct Edge {
    NodeId a = 0;
    NodeId b = 0;

    Edge() = default;
    Edge(NodeId x, NodeId y) : a(x < y ? x : y), b(x < y ? y : x) {}

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected graph over the destination (0) and nodes 1..N. Nodes may be
/// deactivated (removed or asleep); an inactive node keeps its id but has no links.
class Topology {
public:
    Topology() = default;
    /// Throws InvalidTopology on out-of-range ids, self-loops or duplicate links.
    Topology(int node_count, std::vector<Edge> edges);

    int node_count() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const NodeId> neighbors(NodeId i) const;
    bool has_edge(NodeId a, NodeId b) const;
    bool is_active(NodeId i) const;
    std::vector<NodeId> active_nodes() const;
    std::span<const NodeId> destination_links() const { return neighbors(kDestination); }

    /// Every active node reachable from the destination.
    bool is_connected() const;

    Topology without_node(NodeId i) const;
    Topology without_edge(Edge e) const;
    /// Drops nodes whose mask entry is false (mask is indexed by NodeId).
    Topology restricted_to(const std::vector<bool>& keep) const;

    /// Hop distance from the destination; -1 when unreachable.
    std::vector<int> hop_counts() const;

    friend bool operator==(const Topology&, const Topology&) = default;

private:
    void rebuild();

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<bool> active_;
    std::vector<std::vector<NodeId>> adjacency_;
};

/// Initial heights h_i(0) > 0, with h_max = max_i h_i(0). Slot 0 (destination) is 0.
class HeightAssignment {
public:
    HeightAssignment() = default;
    /// `per_node[k]` is the height of node k+1. Throws HeightOutOfRange on h <= 0.
    static HeightAssignment from_heights(std::span<const Height> per_node);
    /// Heights equal to hop counts; throws DisconnectedGraph if a node is unreachable.
    static HeightAssignment hop_counts(const Topology& topo);

    Height initial(NodeId i) const;
    Height h_max() const noexcept { return h_max_; }
    int node_count() const noexcept { return static_cast<int>(h0_.size()) - 1; }
    std::span<const Height> per_node() const { return std::span(h0_).subspan(1); }

    friend bool operator==(const HeightAssignment&, const HeightAssignment&) = default;

private:
    std::vector<Height> h0_{0};
    Height h_max_ = 0;
};

// ---------------------------------------------------------------------------
// Orderings and the induced DAG

enum class Ordering { Less, Greater };

/// Strict order of the scheme's extended keys for two distinct nodes. The
/// destination compares below everything. Throws SchemeMismatch if a state does
/// not belong to `scheme`, NonAdjacentTau for tau values two apart, and
/// NotTotallyOrdered for OneBitFull (whose orientation is only pairwise).
Ordering compare_states(NodeId a_id, const NodeState& a, NodeId b_id, const NodeState& b, SchemeId scheme,
                        const HeightAssignment& h0);

/// True when the link between neighbours `from` and `to` is directed from -> to.
bool link_points_to(NodeId from, NodeId to, const StateVector& states, SchemeId scheme, const HeightAssignment& h0);

/// Neighbours that node i currently points to, ascending.
std::vector<NodeId> forwarding_set(NodeId i, const StateVector& states, const Topology& topo, SchemeId scheme,
                                   const HeightAssignment& h0);

struct Arc {
    NodeId from = 0;
    NodeId to = 0;
    friend bool operator==(const Arc&, const Arc&) = default;
};

/// One arc per topology edge, in the topology's canonical edge order.
class RoutingDag {
public:
    RoutingDag() = default;
    explicit RoutingDag(int node_count, std::vector<Arc> arcs);

    const std::vector<Arc>& arcs() const noexcept { return arcs_; }
    int node_count() const noexcept { return n_; }
    int out_degree(NodeId i) const;
    std::vector<NodeId> successors(NodeId i) const;
    bool is_acyclic() const;
    /// FNV-1a over the arc list; the canonical snapshot identity.
    std::uint64_t hash() const;

    friend bool operator==(const RoutingDag&, const RoutingDag&) = default;

private:
    int n_ = 0;
    std::vector<Arc> arcs_;
};

RoutingDag routing_dag(const StateVector& states, const Topology& topo, SchemeId scheme, const HeightAssignment& h0);

/// Active nondestination nodes with no outgoing link.
std::vector<NodeId> stuck_set(const RoutingDag& dag, const Topology& topo);

/// Active nodes with a directed path to the destination.
std::vector<bool> reaches_destination(const RoutingDag& dag, const Topology& topo);

bool is_destination_oriented(const RoutingDag& dag, const Topology& topo);

}  // namespace linkrev
