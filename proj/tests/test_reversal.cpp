#include <doctest.h>

#include <limits>
#include <type_traits>

#include "linkrev/error.hpp"
#include "linkrev/reversal.hpp"
#include "oracle.hpp"

using namespace linkrev;

TEST_CASE("z sequence") {
    CHECK(z_value(0, 4) == 0);
    CHECK(z_value(0, 17) == 0);
    CHECK(z_value(1, 4) == 9);
    CHECK(z_value(3, 4) == 36);
    const ZSequence z(3);
    CHECK(z(1) == 7);
    CHECK(z(2) == 14);
    for (Height h_max : {1, 2, 5, 100}) {
        for (std::int64_t t = 0; t < 30; ++t) {
            CHECK(z_value(t, h_max) == oracle::z(t, h_max));
            if (t >= 1) CHECK(z_value(t + 1, h_max) == 2 * z_value(t, h_max));
        }
    }
    CHECK_THROWS_AS(z_value(-1, 3), Error);
    const auto top = max_representable_t(3);
    CHECK_NOTHROW(z_value(top, 3));
    CHECK_THROWS_AS(z_value(top + 1, 3), Error);
    // 2^(top-1) * 7 fits and 2^top * 7 does not.
    CHECK(top == 61);
}

TEST_CASE("closed-form heights") {
    CHECK(closed_form_height(ReversalMode::Full, 4, 3, 5) == 23);
    CHECK(closed_form_height(ReversalMode::Partial, 2, 2, 3) == 9);
    CHECK(closed_form_height(ReversalMode::Partial, 3, 2, 3) == 19);
    CHECK(closed_form_height(ReversalMode::Partial, 0, 2, 3) == 2);
    for (Height h_max = 1; h_max <= 6; ++h_max) {
        for (Height h0 = 1; h0 <= h_max; ++h0) {
            for (std::int64_t t = 0; t <= 40; ++t) {
                CHECK(closed_form_height(ReversalMode::Full, t, h0, h_max) == oracle::full_height(t, h0, h_max));
                const Height hp = closed_form_height(ReversalMode::Partial, t, h0, h_max);
                CHECK(hp == oracle::partial_height(t, h0, h_max));
                if (t >= 1) {
                    CHECK(oracle::z(t - 1, h_max) < hp);
                    CHECK(hp < oracle::z(t, h_max));
                }
            }
        }
    }
}

TEST_CASE("gb full update") {
    const std::vector<GbFullState> two{{3}, {5}};
    CHECK(gb_full_update({2}, two).h == 6);
    const std::vector<GbFullState> one{{3}};
    CHECK(gb_full_update({2}, one).h == 4);
    CHECK_THROWS_AS(gb_full_update({2}, {}), Error);
}

TEST_CASE("gb partial update") {
    const std::vector<GbPartialState> same_p{{0, 3}, {0, 5}};
    CHECK(gb_partial_update({0, 2}, same_p) == GbPartialState{1, 2});
    const std::vector<GbPartialState> mixed{{1, 4}, {0, 3}};
    CHECK(gb_partial_update({0, 2}, mixed) == GbPartialState{1, 3});
    const std::vector<GbPartialState> several{{1, 9}, {1, 4}, {2, 0}};
    CHECK(gb_partial_update({0, 7}, several) == GbPartialState{2, -1});
    CHECK_THROWS_AS(gb_partial_update({0, 2}, {}), Error);
}

TEST_CASE("neighbor-oblivious updates") {
    CHECK(no_full_update({0, 3, ReversalMode::Full}, 5) == UnboundedState{1, 8, ReversalMode::Full});
    CHECK(no_full_update({2, 13, ReversalMode::Full}, 5) == UnboundedState{3, 18, ReversalMode::Full});
    const ZSequence z(3);
    CHECK(no_partial_update({0, 2, ReversalMode::Partial}, z) == UnboundedState{1, 5, ReversalMode::Partial});
    CHECK(no_partial_update({1, 5, ReversalMode::Partial}, z) == UnboundedState{2, 9, ReversalMode::Partial});
    CHECK(two_bit_update(TauState{0, ReversalMode::Full}).tau == 1);
    CHECK(two_bit_update(TauState{3, ReversalMode::Full}).tau == 0);
    CHECK(two_bit_update(TauState{3, ReversalMode::Partial}).mode == ReversalMode::Partial);
    CHECK(one_bit_update(DeltaState{0}).delta == 1);
    CHECK(one_bit_update(DeltaState{1}).delta == 0);
    CHECK(baseline_increment_update({4}).h == 5);
}

TEST_CASE("neighbor-oblivious rules take no neighbour states") {
    // The signatures are the contract: only own state and global constants.
    static_assert(std::is_invocable_r_v<UnboundedState, decltype(&no_full_update), const UnboundedState&, Height>);
    static_assert(!std::is_invocable_v<decltype(&two_bit_update), TauState, std::span<const TauState>>);
    for (SchemeId s : kAllSchemes) {
        const auto rule = update_rule(s);
        CHECK(std::holds_alternative<NeighborObliviousRule>(rule) == is_neighbor_oblivious(s));
    }
}

TEST_CASE("update rules advance states strictly") {
    const auto h0 = HeightAssignment::from_heights(std::vector<Height>{2, 1, 3});
    const GlobalConstants k{3, h0.h_max()};
    for (SchemeId s : kAllSchemes) {
        CAPTURE(scheme_name(s));
        auto states = initial_states(s, h0);
        const auto rule = update_rule(s);
        // Neighbour-aware rules only advance a node that is actually stuck, so once.
        const int rounds = is_neighbor_oblivious(s) ? 6 : 1;
        for (int round = 0; round < rounds; ++round) {
            NodeState next;
            if (const auto* oblivious = std::get_if<NeighborObliviousRule>(&rule)) {
                next = (*oblivious)(states[2], k);
            } else {
                const std::vector<NodeState> nbrs{states[1], states[3]};
                next = std::get<NeighborAwareRule>(rule)(states[2], nbrs);
            }
            CHECK(strictly_advances(s, 2, states[2], next));
            CHECK_FALSE(strictly_advances(s, 2, next, next));
            states[2] = next;
        }
    }
}

TEST_CASE("initial states") {
    const auto h0 = HeightAssignment::from_heights(std::vector<Height>{4, 2});
    CHECK(std::get<UnboundedState>(initial_state(SchemeId::NoPartial, 1, h0)) ==
          UnboundedState{0, 4, ReversalMode::Partial});
    CHECK(std::get<GbPartialState>(initial_state(SchemeId::GbPartial, 2, h0)) == GbPartialState{0, 2});
    CHECK(std::get<DeltaState>(initial_state(SchemeId::OneBitFull, 2, h0)).delta == 0);
    CHECK(std::get<TauState>(initial_state(SchemeId::TwoBitPartial, 2, h0)).tau == 0);
    CHECK(state_bits(TauState{}) == 2);
    CHECK(state_bits(DeltaState{}) == 1);
    CHECK(initial_states(SchemeId::GbFull, h0).size() == 3);
}

TEST_CASE("overflowing updates throw") {
    CHECK_THROWS_AS(no_full_update({1, std::numeric_limits<Height>::max() - 1, ReversalMode::Full}, 5), Error);
    CHECK_THROWS_AS(no_partial_update({max_representable_t(3), 5, ReversalMode::Partial}, ZSequence(3)), Error);
}
