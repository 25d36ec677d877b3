#include "mvsg/world/render.hpp"

#include <algorithm>
#include <cmath>

namespace mvsg::world {

bool glyph_inside(const std::string& shape, const Vec2& q) {
    const double x = q.x(), y = q.y();
    if (shape == "disc") return q.norm() <= 1.0;
    if (shape == "ring") {
        const double r = q.norm();
        return r >= 0.55 && r <= 1.0;
    }
    if (shape == "slab") return std::abs(x) <= 1.5 && std::abs(y) <= 0.8;
    if (shape == "panel") {
        const double m = std::max(std::abs(x) / 1.5, std::abs(y) / 0.9);
        return m >= 0.55 && m <= 1.0;
    }
    if (shape == "rod") return std::abs(x) <= 0.45 && std::abs(y) <= 1.6;
    if (shape == "blade")
        return y >= -1.4 && y <= 1.0 && std::abs(x) <= 0.9 * (1.0 - (y + 1.4) / 2.4);
    if (shape == "tee")
        return (std::abs(y + 1.0) <= 0.35 && std::abs(x) <= 1.1) ||
               (std::abs(x) <= 0.32 && y >= -1.0 && y <= 1.4);
    if (shape == "cross")
        return (std::abs(x) <= 0.32 && std::abs(y) <= 1.3) ||
               (std::abs(y) <= 0.32 && std::abs(x) <= 1.3);
    if (shape == "wedge") return x >= -1.0 && x <= 1.0 && y >= -1.0 && y <= 1.0 && y >= x;
    if (shape == "hook")
        return (std::abs(x + 0.55) <= 0.3 && y >= -1.4 && y <= 1.0) ||
               (y >= 0.5 && y <= 1.1 && x >= -0.85 && x <= 0.9);
    throw std::invalid_argument("unknown shape '" + shape + "'");
}

double glyph_extent(const std::string& shape) {
    if (shape == "slab" || shape == "panel" || shape == "rod" || shape == "blade" ||
        shape == "tee" || shape == "hook")
        return 1.7;
    if (shape == "cross") return 1.4;
    return 1.1;  // disc, ring, wedge
}

bool texture_dark(const std::string& texture, const Vec2& rel) {
    if (texture == "solid") return false;
    if (texture == "striped")
        return ((static_cast<long>(std::floor(rel.y() / 0.38)) % 3) + 3) % 3 == 0;
    if (texture == "banded")
        return ((static_cast<long>(std::floor(rel.x() / 0.38)) % 3) + 3) % 3 == 0;
    if (texture == "dotted") {
        const long ix = static_cast<long>(std::floor(rel.x() / 0.42));
        const long iy = static_cast<long>(std::floor(rel.y() / 0.42));
        return ((ix % 3) + 3) % 3 == 1 && ((iy % 3) + 3) % 3 == 1;
    }
    throw std::invalid_argument("unknown texture '" + texture + "'");
}

namespace {

int noise_channel(std::uint64_t key, int px, int py, int c, int amplitude) {
    if (amplitude == 0) return 0;
    const std::uint64_t h = Rng::mix(key, (static_cast<std::uint64_t>(px) << 20) ^
                                              static_cast<std::uint64_t>(py),
                                     static_cast<std::uint64_t>(c));
    return static_cast<int>(h % (2 * amplitude + 1)) - amplitude;
}

std::uint8_t clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

}  // namespace

void draw_glyph(Image& img, const AttributeSet& attrs, const Vec2& center, const ViewSpec& view,
                const Vec2& pixel_jitter, int noise, std::uint64_t noise_key) {
    const double radius = size_radius(attrs.size);
    const double extent = glyph_extent(attrs.shape) * radius;
    const Rgb base = color_rgb(attrs.color);
    const Rgb dark{clamp8(static_cast<int>(base.r * 0.55)),
                   clamp8(static_cast<int>(base.g * 0.55)),
                   clamp8(static_cast<int>(base.b * 0.55))};

    // Image-space bounding box of the transformed glyph square.
    double minx = 1e9, miny = 1e9, maxx = -1e9, maxy = -1e9;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
            const Vec2 corner = center + Vec2(sx * extent, sy * extent);
            const Vec2 p = view.to_image(corner) + pixel_jitter;
            minx = std::min(minx, p.x());
            miny = std::min(miny, p.y());
            maxx = std::max(maxx, p.x());
            maxy = std::max(maxy, p.y());
        }

    const int x0 = std::max(0, static_cast<int>(std::floor(minx)) - 1);
    const int y0 = std::max(0, static_cast<int>(std::floor(miny)) - 1);
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(maxx)) + 1);
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(maxy)) + 1);

    for (int py = y0; py <= y1; ++py) {
        for (int px = x0; px <= x1; ++px) {
            const Vec2 pc(px + 0.5, py + 0.5);
            const Vec2 rel = (view.to_canonical(pc - pixel_jitter) - center) / radius;
            if (!glyph_inside(attrs.shape, rel)) continue;
            const Rgb& c = texture_dark(attrs.texture, rel) ? dark : base;
            img.at(px, py, 0) = clamp8(c.r + noise_channel(noise_key, px, py, 0, noise));
            img.at(px, py, 1) = clamp8(c.g + noise_channel(noise_key, px, py, 1, noise));
            img.at(px, py, 2) = clamp8(c.b + noise_channel(noise_key, px, py, 2, noise));
            if (img.channels == 4) img.at(px, py, 3) = 255;
        }
    }
}

std::map<int, Image> render_views(const std::vector<SceneEntity>& entities,
                                  const FrameState& state, const std::vector<ViewSpec>& views,
                                  int image_size) {
    std::vector<const SceneEntity*> order;
    for (const auto& e : entities) order.push_back(&e);
    std::stable_sort(order.begin(), order.end(), [](const SceneEntity* a, const SceneEntity* b) {
        auto z = [](Kind k) { return k == Kind::equipment ? 0 : (k == Kind::actor ? 1 : 2); };
        if (z(a->kind) != z(b->kind)) return z(a->kind) < z(b->kind);
        return a->name < b->name;
    });

    std::map<int, Image> out;
    for (const auto& view : views) {
        Image img(image_size, image_size, 3, view.background);
        const Vec2 jitter = [&] {
            const auto it = state.camera_jitter.find(view.view_id);
            return it == state.camera_jitter.end() ? Vec2(0, 0) : it->second;
        }();
        for (const SceneEntity* e : order) {
            const auto vis = state.visible.find(e->name);
            if (vis != state.visible.end() && !vis->second) continue;
            const auto pos = state.positions.find(e->name);
            if (pos == state.positions.end()) continue;
            draw_glyph(img, e->attributes, pos->second, view, jitter);
        }
        if (view.occluder) {
            const auto& o = *view.occluder;
            for (int py = std::max(0, static_cast<int>(o[1]));
                 py < std::min(image_size, static_cast<int>(o[3])); ++py)
                for (int px = std::max(0, static_cast<int>(o[0]));
                     px < std::min(image_size, static_cast<int>(o[2])); ++px)
                    for (int c = 0; c < 3; ++c) img.at(px, py, c) = 70;
        }
        out[view.view_id] = std::move(img);
    }
    return out;
}

}  // namespace mvsg::world
