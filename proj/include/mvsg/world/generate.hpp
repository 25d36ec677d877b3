#pragma once

#include "mvsg/world/render.hpp"
#include "mvsg/world/take.hpp"

namespace mvsg::world {

/// Labeling rule: one triplet per active-phase signature plus closeTo for
/// every pair of proximity-kind entities within the threshold (subject is
/// the lexicographically smaller name).
graph::SceneGraph ground_truth_graph(const FrameState& state, const Phase& phase,
                                     const WorldConfig& config);

/// Generates one scripted procedure: phase schedule, waypoint choices,
/// jittered per-frame states, rendered views and ground-truth graphs.
/// Bit-exact replayable from (seed, config).
Take generate_take(std::uint64_t seed, const WorldConfig& config);

}  // namespace mvsg::world
