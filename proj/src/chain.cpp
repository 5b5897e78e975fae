#include "chaintrack/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaintrack/errors.hpp"

namespace chaintrack {

ChainSpec validate(ChainSpec spec) {
    const int n = static_cast<int>(spec.limbs.size());
    if (n == 0) throw ChainError("chain has no limbs");

    std::vector<const LimbNode*> by_id(static_cast<size_t>(n), nullptr);
    int root_id = -1;
    for (const LimbNode& limb : spec.limbs) {
        if (limb.id < 0 || limb.id >= n)
            throw ChainError("limb id " + std::to_string(limb.id) + " outside dense range 0.." +
                             std::to_string(n - 1));
        if (by_id[static_cast<size_t>(limb.id)] != nullptr)
            throw ChainError("duplicate limb id " + std::to_string(limb.id));
        by_id[static_cast<size_t>(limb.id)] = &limb;
        if (!(limb.length_r > 0.0) || !std::isfinite(limb.length_r))
            throw ChainError("limb " + std::to_string(limb.id) + " has nonpositive length");
        if (!limb.parent_id) {
            if (root_id >= 0)
                throw ChainError("multiple roots: limbs " + std::to_string(root_id) + " and " +
                                 std::to_string(limb.id));
            root_id = limb.id;
        } else if (*limb.parent_id < 0 || *limb.parent_id >= n) {
            throw ChainError("limb " + std::to_string(limb.id) + " references unknown parent " +
                             std::to_string(*limb.parent_id));
        } else if (*limb.parent_id == limb.id) {
            throw ChainError("limb " + std::to_string(limb.id) + " is its own parent");
        }
    }
    if (root_id < 0) throw ChainError("no root limb (cycle covers all limbs)");

    // Sort storage by id so limbs[id] lookups hold.
    std::sort(spec.limbs.begin(), spec.limbs.end(),
              [](const LimbNode& a, const LimbNode& b) { return a.id < b.id; });

    std::vector<std::vector<int>> children(static_cast<size_t>(n));
    for (const LimbNode& limb : spec.limbs)
        if (limb.parent_id) children[static_cast<size_t>(*limb.parent_id)].push_back(limb.id);

    // Depth-first walk; anything unreached sits on a cycle detached from the root.
    spec.traversal_order.clear();
    std::vector<int> stack{root_id};
    std::vector<bool> seen(static_cast<size_t>(n), false);
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        if (seen[static_cast<size_t>(id)]) throw ChainError("cycle through limb " + std::to_string(id));
        seen[static_cast<size_t>(id)] = true;
        spec.traversal_order.push_back(id);
        const auto& kids = children[static_cast<size_t>(id)];
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
    if (static_cast<int>(spec.traversal_order.size()) != n)
        throw ChainError("cycle detected: " +
                         std::to_string(n - static_cast<int>(spec.traversal_order.size())) +
                         " limb(s) unreachable from root");
    return spec;
}

std::vector<int> children_of(const ChainSpec& spec, int id) {
    if (id < 0 || id >= spec.size())
        throw ChainError("children_of: unknown limb id " + std::to_string(id));
    std::vector<int> out;
    for (int cand : spec.traversal_order)
        if (spec.limb(cand).parent_id && *spec.limb(cand).parent_id == id) out.push_back(cand);
    return out;
}

ChainSpec make_serial_chain(const std::vector<double>& lengths) {
    ChainSpec spec;
    for (size_t i = 0; i < lengths.size(); ++i) {
        LimbNode limb;
        limb.id = static_cast<int>(i);
        if (i > 0) limb.parent_id = static_cast<int>(i - 1);
        limb.length_r = lengths[i];
        spec.limbs.push_back(limb);
    }
    return validate(std::move(spec));
}

}  // namespace chaintrack
