#pragma once

#include <map>
#include <string>
#include <vector>

#include "mvsg/core/image.hpp"
#include "mvsg/graph/types.hpp"
#include "mvsg/world/config.hpp"

namespace mvsg::world {

/// Instantaneous world state at one timepoint: everything needed to
/// re-render the frame and re-derive its ground-truth graph.
struct FrameState {
    std::map<std::string, Vec2> positions;
    std::map<std::string, bool> visible;
    std::map<std::string, bool> hand_occupied;     // actors holding the active tool
    std::map<int, Vec2> camera_jitter;             // view_id -> pixel offset
};

struct Frame {
    int t = 0;
    std::map<int, Image> images;  // view_id -> rendered frame
    graph::SceneGraph graph;
    std::string phase;
    FrameState state;
};

struct Take {
    std::string take_id;
    std::uint64_t seed = 0;
    std::vector<SceneEntity> entities;
    std::vector<Frame> frames;

    const SceneEntity& entity(const std::string& name) const;
};

}  // namespace mvsg::world
