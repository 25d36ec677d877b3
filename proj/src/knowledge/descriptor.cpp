#include "mvsg/knowledge/descriptor.hpp"

#include <vector>

namespace mvsg::knowledge {

std::string format_textual_descriptor(const std::string& name_or_symbol,
                                      const world::AttributeSet& a) {
    return name_or_symbol + ": " + a.object_type + ", " + a.color + ", " + a.size + ", " +
           a.shape + ", " + a.texture;
}

std::optional<std::pair<std::string, world::AttributeSet>> parse_textual_descriptor(
    const std::string& text) {
    const auto colon = text.find(": ");
    if (colon == std::string::npos) return std::nullopt;
    const std::string sym = text.substr(0, colon);

    std::vector<std::string> fields;
    std::size_t start = colon + 2;
    while (true) {
        const auto pos = text.find(", ", start);
        if (pos == std::string::npos) {
            fields.push_back(text.substr(start));
            break;
        }
        fields.push_back(text.substr(start, pos - start));
        start = pos + 2;
    }
    if (fields.size() != 5) return std::nullopt;
    world::AttributeSet a{fields[0], fields[1], fields[2], fields[3], fields[4]};
    return std::make_pair(sym, a);
}

}  // namespace mvsg::knowledge
