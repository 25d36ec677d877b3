#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mvsg/core/rng.hpp"
#include "mvsg/knowledge/changelog.hpp"
#include "mvsg/knowledge/descriptor.hpp"

namespace mvsg::knowledge {

struct MissingDescriptor : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Token-level prompt: segment markers, image placeholders, descriptor
/// entries, the optional temporal block and the instruction. Visual
/// descriptor images ride alongside, aligned with "<visdesc>" tokens.
struct PromptSpec {
    std::vector<std::string> tokens;
    std::vector<Image> visual_descriptors;

    std::string dump() const;  // plain-text replay form
};

/// Token rendering of a graph in the triplet grammar ("none" when empty).
std::vector<std::string> graph_tokens(const graph::SceneGraph& g);

/// Assembles [image block][descriptor block][temporal block][instruction].
/// When `required_symbols` is given (symbolic mode), every listed symbol
/// must have a descriptor. Descriptor order is shuffled when `shuffle_rng`
/// is non-null (training), otherwise sorted by symbol (inference).
PromptSpec assemble_prompt(int n_image_tokens, std::vector<Descriptor> descriptors,
                           const std::optional<ChangeLog>& change_log,
                           const std::string& instruction,
                           const std::optional<std::set<std::string>>& required_symbols = {},
                           Rng* shuffle_rng = nullptr);

}  // namespace mvsg::knowledge
