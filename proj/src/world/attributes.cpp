#include "mvsg/world/attributes.hpp"

#include <algorithm>
#include <stdexcept>

namespace mvsg::world {

const std::vector<std::pair<std::string, Rgb>>& color_catalog() {
    static const std::vector<std::pair<std::string, Rgb>> colors = {
        {"white", {240, 240, 240}}, {"black", {25, 25, 30}},
        {"gray", {120, 120, 125}},  {"silver", {185, 192, 200}},
        {"red", {205, 45, 40}},     {"orange", {235, 140, 25}},
        {"yellow", {230, 210, 45}}, {"green", {50, 170, 60}},
        {"teal", {20, 135, 125}},   {"cyan", {70, 195, 215}},
        {"blue", {45, 90, 205}},    {"purple", {145, 60, 190}},
        {"magenta", {215, 65, 160}},{"brown", {130, 85, 45}},
    };
    return colors;
}

const std::vector<std::string>& color_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, rgb] : color_catalog()) v.push_back(name);
        return v;
    }();
    return names;
}

const std::vector<std::string>& size_catalog() {
    static const std::vector<std::string> v = {"small", "medium", "large"};
    return v;
}

const std::vector<std::string>& shape_catalog() {
    static const std::vector<std::string> v = {"disc",  "ring", "slab",  "panel", "rod",
                                               "blade", "tee",  "cross", "wedge", "hook"};
    return v;
}

const std::vector<std::string>& texture_catalog() {
    static const std::vector<std::string> v = {"solid", "striped", "banded", "dotted"};
    return v;
}

const std::vector<std::string>& object_type_catalog() {
    static const std::vector<std::string> v = {"actor", "tool", "equipment", "relation"};
    return v;
}

Rgb color_rgb(const std::string& name) {
    for (const auto& [n, rgb] : color_catalog())
        if (n == name) return rgb;
    throw std::invalid_argument("unknown color '" + name + "'");
}

namespace {
bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}
}  // namespace

bool in_catalog(const AttributeSet& a) {
    return contains(object_type_catalog(), a.object_type) && contains(color_names(), a.color) &&
           contains(size_catalog(), a.size) && contains(shape_catalog(), a.shape) &&
           contains(texture_catalog(), a.texture);
}

double size_radius(const std::string& size) {
    if (size == "small") return 0.040;
    if (size == "medium") return 0.058;
    if (size == "large") return 0.085;
    throw std::invalid_argument("unknown size '" + size + "'");
}

}  // namespace mvsg::world
