#pragma once

#include "mvsg/augment/sprite.hpp"
#include "mvsg/world/take.hpp"

namespace mvsg::augment {

struct NoCompatibleAnchor : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PlacementKind { tool_on_hand, equipment_on_anchor };

/// Where and how a sprite lands in a scene: tools ride free actor hands,
/// equipment sits on equipment top anchors.
struct PlacementPolicy {
    PlacementKind kind = PlacementKind::tool_on_hand;
};

/// Hosts compatible with the policy in this frame: actors with a free hand
/// (the patient is not a tool host) or equipment with a top anchor.
std::vector<const world::SceneEntity*> compatible_hosts(const world::Take& take,
                                                        const world::Frame& frame,
                                                        const PlacementPolicy& policy);

/// Canonical anchor point the sprite is centered on for `host`.
world::Vec2 placement_anchor(const world::Frame& frame, const world::SceneEntity& host,
                             const PlacementPolicy& policy);

/// Alpha-blends `sprite` into every view of `frame` at the host anchor
/// (re-projected through each view transform, honoring camera jitter and
/// the view occluder) and extends the graph with `new_triplets`. Pixels
/// outside the projected sprite boxes are untouched.
world::Frame composite(const world::Frame& frame, const std::vector<world::ViewSpec>& views,
                       const Sprite& sprite, const PlacementPolicy& policy,
                       const world::SceneEntity& host,
                       const std::vector<graph::Triplet>& new_triplets, double sprite_scale = 64.0);

}  // namespace mvsg::augment
