#include "mvsg/augment/transforms.hpp"

#include "mvsg/world/render.hpp"

namespace mvsg::augment {

world::Take build_color_swap_take(const world::Take& take, const world::WorldConfig& config,
                                  const std::string& entity_a, const std::string& entity_b) {
    world::Take out = take;
    world::SceneEntity* ea = nullptr;
    world::SceneEntity* eb = nullptr;
    for (auto& e : out.entities) {
        if (e.name == entity_a) ea = &e;
        if (e.name == entity_b) eb = &e;
    }
    if (!ea) throw UnknownEntity("no entity '" + entity_a + "' in take " + take.take_id);
    if (!eb) throw UnknownEntity("no entity '" + entity_b + "' in take " + take.take_id);
    if (ea->attributes.color == eb->attributes.color)
        throw UnknownEntity("entities '" + entity_a + "' and '" + entity_b +
                            "' share a color; nothing to swap");

    std::swap(ea->attributes.color, eb->attributes.color);
    for (auto& frame : out.frames)
        frame.images =
            world::render_views(out.entities, frame.state, config.views, config.image_size);
    return out;
}

HoldoutSplit build_holdout_split(const world::Dataset& dataset,
                                 const std::set<std::string>& excluded_predicates) {
    for (const auto& p : excluded_predicates)
        if (std::find(dataset.config.predicates.begin(), dataset.config.predicates.end(), p) ==
            dataset.config.predicates.end())
            throw world::InvalidConfig("excluded predicate '" + p + "' not in catalog");

    HoldoutSplit split;
    for (const auto* f : dataset.split_frames("train")) {
        bool excluded = false;
        for (const auto& p : excluded_predicates)
            if (f->graph.mentions_predicate(p)) {
                excluded = true;
                break;
            }
        if (!excluded) split.train.emplace_back(f->take_id, f->t);
    }
    for (const auto* f : dataset.split_frames("test")) split.test.emplace_back(f->take_id, f->t);

    if (split.train.empty())
        throw EmptyTrainingSet("holdout exclusion removed every training frame");
    return split;
}

}  // namespace mvsg::augment
