#include "mvsg/augment/composite.hpp"

#include <cmath>

namespace mvsg::augment {

using world::Frame;
using world::Kind;
using world::SceneEntity;
using world::Take;
using world::Vec2;
using world::ViewSpec;

std::vector<const SceneEntity*> compatible_hosts(const Take& take, const Frame& frame,
                                                 const PlacementPolicy& policy) {
    std::vector<const SceneEntity*> hosts;
    for (const auto& e : take.entities) {
        if (policy.kind == PlacementKind::tool_on_hand) {
            if (e.kind != Kind::actor || e.name == "patient") continue;
            if (e.anchor_offsets.empty()) continue;
            const auto occ = frame.state.hand_occupied.find(e.name);
            if (occ != frame.state.hand_occupied.end() && occ->second) continue;
            hosts.push_back(&e);
        } else {
            if (e.kind != Kind::equipment || e.anchor_offsets.empty()) continue;
            hosts.push_back(&e);
        }
    }
    return hosts;
}

Vec2 placement_anchor(const Frame& frame, const SceneEntity& host, const PlacementPolicy& policy) {
    if (host.anchor_offsets.empty())
        throw NoCompatibleAnchor("entity '" + host.name + "' has no anchors");
    if (policy.kind == PlacementKind::tool_on_hand && host.kind != Kind::actor)
        throw NoCompatibleAnchor("tool placement needs an actor host, got '" + host.name + "'");
    if (policy.kind == PlacementKind::equipment_on_anchor && host.kind != Kind::equipment)
        throw NoCompatibleAnchor("equipment placement needs an equipment host, got '" +
                                 host.name + "'");
    const auto pos = frame.state.positions.find(host.name);
    if (pos == frame.state.positions.end())
        throw NoCompatibleAnchor("host '" + host.name + "' missing from frame state");
    return host.anchor_at(pos->second);
}

namespace {

/// Nearest-neighbor affine blit of an RGBA sprite raster (authored at
/// `sprite_scale` px per canonical unit, centered on `anchor`) into one view.
void blit_through_view(Image& dst, const Image& sprite, double sprite_scale, const Vec2& anchor,
                       const ViewSpec& view, const Vec2& jitter) {
    const double sw = sprite.width, sh = sprite.height;
    // Sprite corners in canonical coordinates.
    const double half_w = 0.5 * sw / sprite_scale;
    const double half_h = 0.5 * sh / sprite_scale;

    double minx = 1e9, miny = 1e9, maxx = -1e9, maxy = -1e9;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
            const Vec2 corner = anchor + Vec2(sx * half_w, sy * half_h);
            const Vec2 p = view.to_image(corner) + jitter;
            minx = std::min(minx, p.x());
            maxx = std::max(maxx, p.x());
            miny = std::min(miny, p.y());
            maxy = std::max(maxy, p.y());
        }

    const int x0 = std::max(0, static_cast<int>(std::floor(minx)));
    const int y0 = std::max(0, static_cast<int>(std::floor(miny)));
    const int x1 = std::min(dst.width - 1, static_cast<int>(std::ceil(maxx)));
    const int y1 = std::min(dst.height - 1, static_cast<int>(std::ceil(maxy)));

    for (int py = y0; py <= y1; ++py) {
        for (int px = x0; px <= x1; ++px) {
            if (view.occludes(px + 0.5, py + 0.5)) continue;
            const Vec2 canon = view.to_canonical(Vec2(px + 0.5, py + 0.5) - jitter);
            const Vec2 rel = (canon - anchor) * sprite_scale;
            const int sx = static_cast<int>(std::floor(rel.x() + sw / 2.0));
            const int sy = static_cast<int>(std::floor(rel.y() + sh / 2.0));
            if (sx < 0 || sy < 0 || sx >= sprite.width || sy >= sprite.height) continue;
            const int a = sprite.at(sx, sy, 3);
            if (a == 0) continue;
            for (int c = 0; c < 3; ++c) {
                const int s = sprite.at(sx, sy, c);
                const int d = dst.at(px, py, c);
                dst.at(px, py, c) =
                    static_cast<std::uint8_t>((s * a + d * (255 - a) + 127) / 255);
            }
        }
    }
}

}  // namespace

Frame composite(const Frame& frame, const std::vector<ViewSpec>& views, const Sprite& sprite,
                const PlacementPolicy& policy, const SceneEntity& host,
                const std::vector<graph::Triplet>& new_triplets, double sprite_scale) {
    const Vec2 anchor = placement_anchor(frame, host, policy);

    Frame out = frame;
    for (const auto& view : views) {
        auto it = out.images.find(view.view_id);
        if (it == out.images.end()) continue;
        const auto jit = frame.state.camera_jitter.find(view.view_id);
        const Vec2 jitter = jit == frame.state.camera_jitter.end() ? Vec2(0, 0) : jit->second;
        blit_through_view(it->second, sprite.image, sprite_scale, anchor, view, jitter);
    }
    for (const auto& t : new_triplets) out.graph.insert(t);
    return out;
}

}  // namespace mvsg::augment
