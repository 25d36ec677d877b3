#include "mvsg/augment/sprite.hpp"

#include <algorithm>
#include <cmath>

namespace mvsg::augment {

using world::AttributeSet;
using world::Rgb;
using world::Vec2;

AttributeSet sample_attributes(Rng& rng) {
    AttributeSet a;
    a.object_type = rng.choice(world::object_type_catalog());
    a.color = rng.choice(world::color_names());
    a.size = rng.choice(world::size_catalog());
    a.shape = rng.choice(world::shape_catalog());
    a.texture = rng.choice(world::texture_catalog());
    return a;
}

AttributeSet sample_attributes(Rng& rng, const std::string& object_type) {
    AttributeSet a = sample_attributes(rng);
    a.object_type = object_type;
    return a;
}

Sprite render_object_sprite(const AttributeSet& attributes, Rng& rng, double scale, int noise) {
    if (!world::in_catalog(attributes))
        throw std::invalid_argument("render_object_sprite: attributes outside the catalogs");

    // Fixed canvas sized for the largest glyph so that alpha coverage is
    // comparable across sizes.
    const double max_extent = 1.7 * world::size_radius("large");
    const int half = static_cast<int>(std::ceil(max_extent * scale)) + 1;
    const int side = 2 * half + 1;

    // Identity-style view centered on the canvas.
    world::ViewSpec view;
    view.linear = Eigen::Matrix2d::Identity() * scale;
    view.offset = Vec2(half + 0.5 - 0.0, half + 0.5 - 0.0);

    Sprite sprite;
    sprite.attributes = attributes;
    sprite.image = Image(side, side, 4, 0);
    world::draw_glyph(sprite.image, attributes, Vec2(0.0, 0.0), view, Vec2::Zero(), noise,
                      rng.next_u64());
    return sprite;
}

Rgb dominant_color(const Image& rgba) {
    std::vector<std::uint8_t> ch[3];
    for (int y = 0; y < rgba.height; ++y)
        for (int x = 0; x < rgba.width; ++x) {
            if (rgba.channels == 4 && rgba.at(x, y, 3) == 0) continue;
            for (int c = 0; c < 3; ++c) ch[c].push_back(rgba.at(x, y, c));
        }
    if (ch[0].empty()) return Rgb{0, 0, 0};
    Rgb out;
    std::uint8_t* fields[3] = {&out.r, &out.g, &out.b};
    for (int c = 0; c < 3; ++c) {
        auto mid = ch[c].begin() + static_cast<std::ptrdiff_t>(ch[c].size() / 2);
        std::nth_element(ch[c].begin(), mid, ch[c].end());
        *fields[c] = *mid;
    }
    return out;
}

double alpha_coverage(const Image& rgba) {
    if (rgba.channels != 4) throw std::invalid_argument("alpha_coverage: RGBA required");
    std::size_t opaque = 0;
    for (int y = 0; y < rgba.height; ++y)
        for (int x = 0; x < rgba.width; ++x)
            if (rgba.at(x, y, 3) != 0) ++opaque;
    return static_cast<double>(opaque) / (static_cast<double>(rgba.width) * rgba.height);
}

Image sprite_on_canvas(const Sprite& sprite, int canvas_size, std::uint8_t background) {
    Image canvas(canvas_size, canvas_size, 3, background);
    alpha_blend(canvas, sprite.image, (canvas_size - sprite.image.width) / 2,
                (canvas_size - sprite.image.height) / 2);
    return canvas;
}

}  // namespace mvsg::augment
