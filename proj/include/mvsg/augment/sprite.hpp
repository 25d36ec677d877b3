#pragma once

#include "mvsg/core/rng.hpp"
#include "mvsg/world/render.hpp"

namespace mvsg::augment {

/// An RGBA cutout with the attributes that produced it. Alpha is exact by
/// construction: 255 inside the glyph silhouette, 0 outside.
struct Sprite {
    Image image;
    world::AttributeSet attributes;
};

/// Uniform draw over the closed attribute catalogs.
world::AttributeSet sample_attributes(Rng& rng);

/// Variant with the object type fixed (tool vs equipment concepts).
world::AttributeSet sample_attributes(Rng& rng, const std::string& object_type);

/// Rasterizes the attribute glyph at `scale` pixels per canonical unit with
/// per-pixel color noise of amplitude `noise` keyed off the rng stream.
Sprite render_object_sprite(const world::AttributeSet& attributes, Rng& rng, double scale = 64.0,
                            int noise = 6);

/// Per-channel median over opaque pixels; the texture/noise-robust
/// "dominant hue" used by the appearance oracles.
world::Rgb dominant_color(const Image& rgba);

/// Fraction of pixels with nonzero alpha.
double alpha_coverage(const Image& rgba);

/// Sprite centered on a neutral square canvas (visual-descriptor input).
Image sprite_on_canvas(const Sprite& sprite, int canvas_size, std::uint8_t background = 205);

}  // namespace mvsg::augment
