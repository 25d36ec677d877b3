#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace mvsg {

/// Interleaved 8-bit raster. channels is 3 (RGB) or 4 (RGBA).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> data;

    Image() = default;
    Image(int w, int h, int c, std::uint8_t fill = 0)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {}

    std::uint8_t& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }

    bool operator==(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels && data == o.data;
    }
};

/// Alpha-blends src (RGBA) onto dst (RGB) with its top-left corner at (x0, y0).
inline void alpha_blend(Image& dst, const Image& src, int x0, int y0) {
    if (src.channels != 4) throw std::invalid_argument("alpha_blend: source must be RGBA");
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            const int dx = x0 + x, dy = y0 + y;
            if (!dst.in_bounds(dx, dy)) continue;
            const int a = src.at(x, y, 3);
            if (a == 0) continue;
            for (int c = 0; c < 3; ++c) {
                const int s = src.at(x, y, c);
                const int d = dst.at(dx, dy, c);
                dst.at(dx, dy, c) = static_cast<std::uint8_t>((s * a + d * (255 - a) + 127) / 255);
            }
        }
    }
}

struct IOFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_png(const std::filesystem::path& path, const Image& img);
Image read_png(const std::filesystem::path& path);

}  // namespace mvsg
