// Kinematic tree of rigid limbs. Each limb carries one sensor, rigidly
// mounted at the limb tip and aligned with the limb frame; the limb extends
// from its base joint along the body-frame +y axis to the tip.

#pragma once

#include <optional>
#include <vector>

namespace chaintrack {

struct LimbNode {
    int id = 0;
    std::optional<int> parent_id;  // absent for the root limb
    double length_r = 0.0;         // joint-to-tip distance, meters
};

/// Validated limb tree. Construct through validate(); traversal_order is
/// depth-first from the root, so every parent precedes its descendants.
struct ChainSpec {
    std::vector<LimbNode> limbs;        // indexed by id (ids are dense 0..n-1)
    std::vector<int> traversal_order;

    int size() const { return static_cast<int>(limbs.size()); }
    const LimbNode& limb(int id) const { return limbs.at(static_cast<size_t>(id)); }
    bool is_root(int id) const { return !limb(id).parent_id.has_value(); }
};

/// Checks tree invariants (dense unique ids, single root, acyclic parent
/// links, positive finite lengths) and fills in the depth-first traversal.
/// Throws ChainError otherwise.
ChainSpec validate(ChainSpec spec);

/// Direct children of `id`, in traversal order. Throws ChainError on an
/// unknown id.
std::vector<int> children_of(const ChainSpec& spec, int id);

/// Convenience: serial chain of n limbs with the given lengths, limb i-1
/// the parent of limb i.
ChainSpec make_serial_chain(const std::vector<double>& lengths);

}  // namespace chaintrack
