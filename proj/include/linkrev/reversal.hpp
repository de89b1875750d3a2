#pragma once

// Update rules for the link reversal schemes, as pure old-state -> new-state
// functions. Neighbor-aware rules (GbFull, GbPartial) receive neighbour states;
// every other rule sees only the node's own state and network-wide constants.

#include <cstdint>
#include <functional>
#include <span>
#include <variant>

#include "linkrev/core_model.hpp"

namespace linkrev {

/// Constants every node knows in advance: N and h_max.
struct GlobalConstants {
    int node_count = 0;
    Height h_max = 0;
};

/// z(0) = 0, z(t) = 2^(t-1) (2 h_max + 1) for t >= 1.
Height z_value(std::int64_t t, Height h_max);

class ZSequence {
public:
    explicit ZSequence(Height h_max) : h_max_(h_max) {}
    Height operator()(std::int64_t t) const { return z_value(t, h_max_); }
    Height h_max() const noexcept { return h_max_; }

private:
    Height h_max_;
};

/// Largest t for which z(t) fits in a signed 64-bit integer.
std::int64_t max_representable_t(Height h_max);

/// Analytic height after t updates for the neighbor-oblivious schemes.
Height closed_form_height(ReversalMode mode, std::int64_t t, Height h0_i, Height h_max);

// Neighbor-aware rules. Callers pass the states of the live neighbours only;
// an empty neighbourhood throws EmptyNeighborhood.
GbFullState gb_full_update(const GbFullState& own, std::span<const GbFullState> neighbors);
GbPartialState gb_partial_update(const GbPartialState& own, std::span<const GbPartialState> neighbors);

// Neighbor-oblivious rules.
UnboundedState no_full_update(const UnboundedState& own, Height h_max);
UnboundedState no_partial_update(const UnboundedState& own, const ZSequence& z);
TauState two_bit_update(TauState own);
DeltaState one_bit_update(DeltaState own);
GbFullState baseline_increment_update(const GbFullState& own);

using NeighborAwareRule = std::function<NodeState(const NodeState& own, std::span<const NodeState> neighbors)>;
using NeighborObliviousRule = std::function<NodeState(const NodeState& own, const GlobalConstants& constants)>;
using UpdateRule = std::variant<NeighborAwareRule, NeighborObliviousRule>;

/// The rule a scheme runs at a stuck node. Schemes other than GbFull and
/// GbPartial yield a NeighborObliviousRule.
UpdateRule update_rule(SchemeId scheme);

/// State of node i before any update.
NodeState initial_state(SchemeId scheme, NodeId i, const HeightAssignment& h0);
StateVector initial_states(SchemeId scheme, const HeightAssignment& h0);

/// Whether `after` strictly advances `before` in the scheme's own order (the
/// extended key for ordered schemes, the local cycle for tau/delta states).
bool strictly_advances(SchemeId scheme, NodeId i, const NodeState& before, const NodeState& after);

}  // namespace linkrev
