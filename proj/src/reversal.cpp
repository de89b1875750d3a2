#include "linkrev/reversal.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <tuple>

#include "linkrev/error.hpp"

namespace linkrev {

namespace {

Height checked_add(Height a, Height b) {
    Height out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorKind::Overflow, "height addition overflows 64 bits");
    return out;
}

Height checked_sub(Height a, Height b) {
    Height out = 0;
    if (__builtin_sub_overflow(a, b, &out)) throw Error(ErrorKind::Overflow, "height subtraction overflows 64 bits");
    return out;
}

}  // namespace

Height z_value(std::int64_t t, Height h_max) {
    if (t < 0) throw Error(ErrorKind::Validation, "z(t) needs t >= 0");
    if (h_max <= 0) throw Error(ErrorKind::Validation, "z(t) needs h_max > 0");
    if (t == 0) return 0;
    if (t > max_representable_t(h_max)) {
        throw Error(ErrorKind::Overflow, "z(" + std::to_string(t) + ") exceeds 64 bits for h_max=" + std::to_string(h_max));
    }
    return (2 * h_max + 1) << (t - 1);
}

std::int64_t max_representable_t(Height h_max) {
    if (h_max <= 0 || h_max > (std::numeric_limits<Height>::max() - 1) / 2) return 0;
    const Height base = 2 * h_max + 1;
    std::int64_t t = 1;
    Height z = base;
    while (z <= std::numeric_limits<Height>::max() / 2) {
        z *= 2;
        ++t;
    }
    return t;
}

Height closed_form_height(ReversalMode mode, std::int64_t t, Height h0_i, Height h_max) {
    if (t < 0) throw Error(ErrorKind::Validation, "closed-form height needs t >= 0");
    if (mode == ReversalMode::Full) {
        Height step = 0;
        if (__builtin_mul_overflow(t, h_max, &step)) throw Error(ErrorKind::Overflow, "t * h_max overflows");
        return checked_add(h0_i, step);
    }
    if (t % 2 == 0) {
        Height sum = h0_i;
        for (std::int64_t l = 1; l <= t / 2; ++l) sum = checked_add(sum, z_value(2 * l - 1, h_max));
        return sum;
    }
    Height sum = z_value(1, h_max);
    for (std::int64_t l = 1; l <= (t - 1) / 2; ++l) sum = checked_add(sum, z_value(2 * l, h_max));
    return checked_sub(sum, h0_i);
}

GbFullState gb_full_update(const GbFullState& own, std::span<const GbFullState> neighbors) {
    (void)own;
    if (neighbors.empty()) throw Error(ErrorKind::EmptyNeighborhood, "stuck node has no neighbours");
    const auto top = std::max_element(neighbors.begin(), neighbors.end(),
                                      [](const auto& x, const auto& y) { return x.h < y.h; });
    return {checked_add(top->h, 1)};
}

GbPartialState gb_partial_update(const GbPartialState& own, std::span<const GbPartialState> neighbors) {
    if (neighbors.empty()) throw Error(ErrorKind::EmptyNeighborhood, "stuck node has no neighbours");
    GbPartialState next = own;
    const auto lowest = std::min_element(neighbors.begin(), neighbors.end(),
                                         [](const auto& x, const auto& y) { return x.p < y.p; });
    next.p = lowest->p + 1;
    // The height drops below every neighbour sharing the new p, if any.
    std::optional<Height> min_h;
    for (const auto& n : neighbors) {
        if (n.p == next.p) min_h = min_h ? std::min(*min_h, n.h) : n.h;
    }
    if (min_h) next.h = checked_sub(*min_h, 1);
    return next;
}

UnboundedState no_full_update(const UnboundedState& own, Height h_max) {
    if (own.mode != ReversalMode::Full) throw Error(ErrorKind::SchemeMismatch, "no_full_update needs a full-mode state");
    return {own.t + 1, checked_add(own.h, h_max), own.mode};
}

UnboundedState no_partial_update(const UnboundedState& own, const ZSequence& z) {
    if (own.mode != ReversalMode::Partial) {
        throw Error(ErrorKind::SchemeMismatch, "no_partial_update needs a partial-mode state");
    }
    const std::int64_t t = own.t + 1;
    return {t, checked_sub(z(t), own.h), own.mode};
}

TauState two_bit_update(TauState own) {
    own.tau = static_cast<std::uint8_t>((own.tau + 1u) & 3u);
    return own;
}

DeltaState one_bit_update(DeltaState own) {
    own.delta = static_cast<std::uint8_t>(own.delta ^ 1u);
    return own;
}

GbFullState baseline_increment_update(const GbFullState& own) { return {checked_add(own.h, 1)}; }

namespace {

template <typename S>
std::vector<S> unwrap_all(std::span<const NodeState> states) {
    std::vector<S> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(std::get<S>(s));
    return out;
}

}  // namespace

UpdateRule update_rule(SchemeId scheme) {
    switch (scheme) {
        case SchemeId::GbFull:
            return NeighborAwareRule([](const NodeState& own, std::span<const NodeState> neighbors) -> NodeState {
                return gb_full_update(std::get<GbFullState>(own), unwrap_all<GbFullState>(neighbors));
            });
        case SchemeId::GbPartial:
            return NeighborAwareRule([](const NodeState& own, std::span<const NodeState> neighbors) -> NodeState {
                return gb_partial_update(std::get<GbPartialState>(own), unwrap_all<GbPartialState>(neighbors));
            });
        case SchemeId::NoFull:
            return NeighborObliviousRule([](const NodeState& own, const GlobalConstants& c) -> NodeState {
                return no_full_update(std::get<UnboundedState>(own), c.h_max);
            });
        case SchemeId::NoPartial:
            return NeighborObliviousRule([](const NodeState& own, const GlobalConstants& c) -> NodeState {
                return no_partial_update(std::get<UnboundedState>(own), ZSequence(c.h_max));
            });
        case SchemeId::TwoBitFull:
        case SchemeId::TwoBitPartial:
            return NeighborObliviousRule([](const NodeState& own, const GlobalConstants&) -> NodeState {
                return two_bit_update(std::get<TauState>(own));
            });
        case SchemeId::OneBitFull:
            return NeighborObliviousRule([](const NodeState& own, const GlobalConstants&) -> NodeState {
                return one_bit_update(std::get<DeltaState>(own));
            });
        case SchemeId::BaselineIncrement:
            return NeighborObliviousRule([](const NodeState& own, const GlobalConstants&) -> NodeState {
                return baseline_increment_update(std::get<GbFullState>(own));
            });
    }
    throw Error(ErrorKind::SchemeMismatch, "unknown scheme");
}

NodeState initial_state(SchemeId scheme, NodeId i, const HeightAssignment& h0) {
    const Height h = h0.initial(i);
    switch (scheme) {
        case SchemeId::GbFull:
        case SchemeId::BaselineIncrement: return GbFullState{h};
        case SchemeId::GbPartial: return GbPartialState{0, h};
        case SchemeId::NoFull: return UnboundedState{0, h, ReversalMode::Full};
        case SchemeId::NoPartial: return UnboundedState{0, h, ReversalMode::Partial};
        case SchemeId::TwoBitFull: return TauState{0, ReversalMode::Full};
        case SchemeId::TwoBitPartial: return TauState{0, ReversalMode::Partial};
        case SchemeId::OneBitFull: return DeltaState{0};
    }
    throw Error(ErrorKind::SchemeMismatch, "unknown scheme");
}

StateVector initial_states(SchemeId scheme, const HeightAssignment& h0) {
    StateVector states;
    states.reserve(static_cast<std::size_t>(h0.node_count()) + 1);
    states.push_back(initial_state(scheme, kDestination, h0));
    for (NodeId i = 1; i <= h0.node_count(); ++i) states.push_back(initial_state(scheme, i, h0));
    return states;
}

bool strictly_advances(SchemeId scheme, NodeId i, const NodeState& before, const NodeState& after) {
    switch (scheme) {
        case SchemeId::GbFull:
        case SchemeId::BaselineIncrement:
            return std::get<GbFullState>(after).h > std::get<GbFullState>(before).h;
        case SchemeId::GbPartial: {
            const auto& b = std::get<GbPartialState>(before);
            const auto& a = std::get<GbPartialState>(after);
            return std::tuple(a.p, a.h) > std::tuple(b.p, b.h);
        }
        case SchemeId::NoFull:
        case SchemeId::NoPartial: {
            const auto& b = std::get<UnboundedState>(before);
            const auto& a = std::get<UnboundedState>(after);
            // The third key component (+/- i) only breaks ties, so (t, h) decides.
            (void)i;
            return std::tuple(a.t, a.h) > std::tuple(b.t, b.h);
        }
        case SchemeId::TwoBitFull:
        case SchemeId::TwoBitPartial:
            return std::get<TauState>(after).tau == ((std::get<TauState>(before).tau + 1u) & 3u);
        case SchemeId::OneBitFull:
            return std::get<DeltaState>(after).delta != std::get<DeltaState>(before).delta;
    }
    return false;
}

}  // namespace linkrev
