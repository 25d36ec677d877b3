#pragma once

#include <filesystem>

#include "mvsg/augment/composite.hpp"
#include "mvsg/world/dataset.hpp"

namespace mvsg::augment {

/// One variability-enhancement training sample: a base frame with a
/// procedurally generated object composited in every view, the extended
/// graph, and descriptor material for the new concept plus distractors.
struct AugSample {
    std::string id;
    std::string take_id;
    int t = 0;
    std::string concept_kind;   // "tool" or "equipment"
    std::string concept_name;   // graph name of the injected concept
    world::AttributeSet attributes;
    Sprite sprite;
    std::map<int, Image> images;
    graph::SceneGraph graph;
    graph::Triplet new_triplet;
    std::vector<world::AttributeSet> distractors;
};

constexpr int kDefaultVariabilitySamples = 20000;

/// Samples attributes, renders the sprite, picks a host frame and
/// composites the object into all views. Hosts failing placement are
/// resampled up to 10 times, then the sample is skipped (logged to stderr).
std::vector<AugSample> build_variability_dataset(const std::vector<world::Take>& takes,
                                                 const world::WorldConfig& config,
                                                 int n_samples, std::uint64_t seed,
                                                 int n_distractors = 2);

void export_aug_dataset(const std::vector<AugSample>& samples,
                        const std::filesystem::path& root);
std::vector<AugSample> load_aug_dataset(const std::filesystem::path& root);

}  // namespace mvsg::augment
