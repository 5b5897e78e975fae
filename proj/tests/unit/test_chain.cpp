#include <doctest.h>

#include "chaintrack/chain.hpp"
#include "chaintrack/errors.hpp"

using namespace chaintrack;

namespace {

// Seven limbs: torso root, two arms of two segments, one two-segment neck.
ChainSpec upper_body() {
    ChainSpec spec;
    spec.limbs = {
        {0, std::nullopt, 0.5},
        {1, 0, 0.3}, {2, 1, 0.25},   // left arm
        {3, 0, 0.3}, {4, 3, 0.25},   // right arm
        {5, 0, 0.1}, {6, 5, 0.15},   // neck, head
    };
    return validate(spec);
}

}  // namespace

TEST_CASE("single limb validates") {
    ChainSpec spec;
    spec.limbs = {{0, std::nullopt, 0.5}};
    const ChainSpec ok = validate(spec);
    CHECK(ok.traversal_order == std::vector<int>{0});
}

TEST_CASE("two-limb boom validates with parent-first traversal") {
    const ChainSpec boom = make_serial_chain({0.5, 0.5});
    CHECK(boom.size() == 2);
    CHECK(boom.traversal_order == std::vector<int>{0, 1});
    CHECK(children_of(boom, 0) == std::vector<int>{1});
    CHECK(children_of(boom, 1).empty());
}

TEST_CASE("invalid chains are rejected") {
    ChainSpec two_roots;
    two_roots.limbs = {{0, std::nullopt, 0.5}, {1, std::nullopt, 0.5}};
    CHECK_THROWS_AS(validate(two_roots), ChainError);

    ChainSpec nonpositive;
    nonpositive.limbs = {{0, std::nullopt, 0.0}};
    CHECK_THROWS_AS(validate(nonpositive), ChainError);

    ChainSpec duplicate;
    duplicate.limbs = {{0, std::nullopt, 0.5}, {0, 0, 0.5}};
    CHECK_THROWS_AS(validate(duplicate), ChainError);

    ChainSpec cycle;
    cycle.limbs = {{0, std::nullopt, 0.5}, {1, 2, 0.5}, {2, 1, 0.5}};
    CHECK_THROWS_AS(validate(cycle), ChainError);

    ChainSpec sparse_ids;
    sparse_ids.limbs = {{0, std::nullopt, 0.5}, {7, 0, 0.5}};
    CHECK_THROWS_AS(validate(sparse_ids), ChainError);
}

TEST_CASE("upper-body tree matches hand-built adjacency") {
    const ChainSpec body = upper_body();
    CHECK(children_of(body, 0) == std::vector<int>{1, 3, 5});
    CHECK(children_of(body, 1) == std::vector<int>{2});
    CHECK(children_of(body, 5) == std::vector<int>{6});
    CHECK(children_of(body, 6).empty());
    CHECK_THROWS_AS(children_of(body, 9), ChainError);

    // Depth-first: each parent appears before all of its descendants.
    const auto& order = body.traversal_order;
    REQUIRE(order.size() == 7);
    auto pos = [&](int id) {
        for (size_t i = 0; i < order.size(); ++i)
            if (order[i] == id) return i;
        return order.size();
    };
    for (const LimbNode& limb : body.limbs)
        if (limb.parent_id) CHECK(pos(*limb.parent_id) < pos(limb.id));
}
