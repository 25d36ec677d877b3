#pragma once

#include <set>

#include "mvsg/world/dataset.hpp"

namespace mvsg::augment {

struct UnknownEntity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyTrainingSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exchanges the color attributes of two entities and re-renders every
/// frame from its stored state. Graphs are untouched; applying the same
/// swap twice restores the original pixels.
world::Take build_color_swap_take(const world::Take& take, const world::WorldConfig& config,
                                  const std::string& entity_a, const std::string& entity_b);

struct HoldoutSplit {
    std::vector<std::pair<std::string, int>> train;  // (take_id, t), filtered
    std::vector<std::pair<std::string, int>> test;   // unchanged
};

/// Drops every training frame whose graph mentions an excluded predicate;
/// the test portion is passed through unchanged.
HoldoutSplit build_holdout_split(const world::Dataset& dataset,
                                 const std::set<std::string>& excluded_predicates);

}  // namespace mvsg::augment
