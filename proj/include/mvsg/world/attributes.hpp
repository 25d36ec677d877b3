#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mvsg::world {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// The five-field appearance description every renderable concept carries.
struct AttributeSet {
    std::string object_type;
    std::string color;
    std::string size;
    std::string shape;
    std::string texture;

    bool operator==(const AttributeSet&) const = default;
    auto operator<=>(const AttributeSet&) const = default;
};

/// Closed catalogs. Attribute sampling, rendering and descriptor text all
/// draw from these; anything outside them is rejected.
const std::vector<std::pair<std::string, Rgb>>& color_catalog();
const std::vector<std::string>& color_names();
const std::vector<std::string>& size_catalog();
const std::vector<std::string>& shape_catalog();
const std::vector<std::string>& texture_catalog();
const std::vector<std::string>& object_type_catalog();

Rgb color_rgb(const std::string& name);
bool in_catalog(const AttributeSet& a);

/// Glyph radius in canonical scene units for a size class.
double size_radius(const std::string& size);

}  // namespace mvsg::world
