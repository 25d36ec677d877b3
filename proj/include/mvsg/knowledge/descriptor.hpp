#pragma once

#include <optional>
#include <string>

#include "mvsg/core/image.hpp"
#include "mvsg/world/attributes.hpp"

namespace mvsg::knowledge {

enum class Modality { textual, visual };

/// One knowledge entry pairing a name or symbol with an appearance, either
/// as attribute text or as a single reference image.
struct Descriptor {
    std::string name_or_symbol;
    Modality modality = Modality::textual;
    world::AttributeSet attributes;  // textual payload
    Image sprite;                    // visual payload (RGB canvas)
};

/// Fixed template "<sym>: <object type>, <color>, <size>, <shape>, <texture>".
std::string format_textual_descriptor(const std::string& name_or_symbol,
                                      const world::AttributeSet& attributes);

/// Exact inverse of format_textual_descriptor; nullopt if the text does not
/// match the template.
std::optional<std::pair<std::string, world::AttributeSet>> parse_textual_descriptor(
    const std::string& text);

}  // namespace mvsg::knowledge
