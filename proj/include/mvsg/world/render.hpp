#pragma once

#include <map>

#include "mvsg/core/rng.hpp"
#include "mvsg/world/take.hpp"

namespace mvsg::world {

/// Analytic inside-test for a glyph shape. q is the offset from the glyph
/// center in units of the size radius.
bool glyph_inside(const std::string& shape, const Vec2& q);

/// True if the texture pattern darkens the texel at canonical offset `rel`
/// (same units as glyph_inside).
bool texture_dark(const std::string& texture, const Vec2& rel);

/// Half-extent of a glyph's bounding square in radius units.
double glyph_extent(const std::string& shape);

/// Draws one attributed glyph into `img` through the view transform,
/// centered at canonical point `center`. `pixel_jitter` is the per-frame
/// camera shake. Per-pixel color noise of amplitude `noise` is keyed off
/// `noise_key` so identical inputs give identical pixels.
void draw_glyph(Image& img, const AttributeSet& attrs, const Vec2& center, const ViewSpec& view,
                const Vec2& pixel_jitter = Vec2::Zero(), int noise = 0,
                std::uint64_t noise_key = 0);

/// Renders every visible entity of `state` into one image per view:
/// painter's order (equipment, then actors, then tools), then the view's
/// occluder. Deterministic in (entities, state, views).
std::map<int, Image> render_views(const std::vector<SceneEntity>& entities,
                                  const FrameState& state, const std::vector<ViewSpec>& views,
                                  int image_size);

}  // namespace mvsg::world
