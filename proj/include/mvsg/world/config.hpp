#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvsg/graph/types.hpp"
#include "mvsg/world/attributes.hpp"

namespace mvsg::world {

using Vec2 = Eigen::Vector2d;

struct InvalidConfig : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Kind { actor, tool, equipment };
std::string kind_name(Kind k);
Kind kind_from_name(const std::string& s);

/// A scene inhabitant. `position` is the base position; instantaneous
/// per-frame positions live in FrameState. Anchor offsets are relative to
/// the instantaneous position and clamped into [0,1]^2 when instantiated.
struct SceneEntity {
    std::string name;
    Kind kind = Kind::actor;
    AttributeSet attributes;
    Vec2 position{0.5, 0.5};
    std::vector<Vec2> anchor_offsets;  // actors: hand; equipment: top surface

    Vec2 anchor_at(const Vec2& pos, std::size_t i = 0) const {
        Vec2 a = pos + anchor_offsets.at(i);
        return a.cwiseMax(0.0).cwiseMin(1.0);
    }
};

/// "actor:lead" / "equipment:tray" selector used by phase signatures.
struct EntitySelector {
    Kind kind = Kind::actor;
    std::string name;

    static EntitySelector from_string(const std::string& s);
    std::string to_string() const;
};

struct PhaseSignature {
    EntitySelector subject;
    std::string predicate;
    EntitySelector object;
};

/// One phase of the scripted procedure: fixed relation signatures, a
/// duration range, per-entity waypoints (a list means a per-take choice)
/// and the optional tool that signals the phase's action visually.
struct Phase {
    std::string name;
    int min_duration = 3;
    int max_duration = 5;
    std::vector<PhaseSignature> signatures;
    std::map<std::string, std::vector<Vec2>> waypoints;  // actor -> candidate positions
    std::string tool;                                    // entity name, empty if none
};

/// Affine map from canonical [0,1]^2 scene coordinates to image pixels,
/// plus the per-view occluder rectangle and background shade.
struct ViewSpec {
    int view_id = 0;
    Eigen::Matrix2d linear = Eigen::Matrix2d::Identity() * 64.0;
    Vec2 offset{0.0, 0.0};
    std::optional<Eigen::Vector4d> occluder;  // x0, y0, x1, y1 in pixels
    std::uint8_t background = 205;

    Vec2 to_image(const Vec2& p) const { return linear * p + offset; }
    Vec2 to_canonical(const Vec2& q) const { return linear.inverse() * (q - offset); }
    double scale() const { return std::sqrt(std::abs(linear.determinant())); }
    bool occludes(double x, double y) const {
        return occluder && x >= (*occluder)[0] && y >= (*occluder)[1] && x < (*occluder)[2] &&
               y < (*occluder)[3];
    }
};

struct WorldConfig {
    int image_size = 64;
    double proximity_threshold = 0.15;
    std::vector<std::string> proximity_kinds = {"actor", "equipment"};
    double actor_jitter = 0.01;
    double camera_jitter_px = 1.0;
    int hidden_tool_frames = 1;   // frames per active phase with the tool out of sight
    double hidden_tool_at = 0.55; // window start as a fraction of phase length

    std::vector<SceneEntity> entities;
    std::map<std::string, std::string> tool_for_predicate;  // predicate -> tool entity
    std::map<std::string, AttributeSet> relation_descriptors;  // tool-less predicates
    std::vector<std::string> predicates;
    std::vector<Phase> phases;
    std::vector<ViewSpec> views;
    std::vector<int> train_views = {1, 2, 3, 4};

    const SceneEntity& entity(const std::string& name) const;
    const ViewSpec& view(int id) const;
    graph::Vocabulary vocabulary() const;
    /// Names + predicates eligible for symbolic prompts (actors, equipment
    /// and all predicates; tools are appearance carriers, not graph nodes).
    std::vector<std::string> graph_entity_names() const;
    std::vector<std::string> actor_names() const;
    /// Appearance attributes backing a predicate's descriptor.
    const AttributeSet& predicate_descriptor(const std::string& predicate) const;

    void validate() const;
};

/// The built-in toy operating-room world.
WorldConfig default_world_config();

}  // namespace mvsg::world
