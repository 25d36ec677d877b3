#pragma once

#include <filesystem>

#include "mvsg/augment/composite.hpp"
#include "mvsg/graph/symbols.hpp"

namespace mvsg::augment {

/// A benchmark concept: a known relation with an altered look, a novel
/// relation, or a novel piece of equipment.
struct BenchmarkConcept {
    std::string name;
    std::string kind;  // "relation" or "equipment"
    int count = 0;
    bool novel = false;
};

/// Default roster: six known relations at 12 samples each plus three novel
/// concepts at 10 each (102 samples).
std::vector<BenchmarkConcept> default_benchmark_concepts();

/// Paired positive/negative multiview sample probing one adapted concept.
struct BenchmarkSample {
    std::string id;
    std::string concept_name;
    std::string concept_kind;
    std::map<int, Image> positive_frames;
    std::map<int, Image> negative_frames;
    std::string textual_descriptor;  // formatted for the concept's symbol
    Image visual_descriptor;         // sprite on neutral canvas
    Sprite sprite;
    world::AttributeSet attributes;
    graph::SceneGraph target_triplets;  // name space
    graph::SymbolMap symbol_map;
    std::string take_id;
    int t = 0;
};

/// Builds the paired benchmark over frames of `takes`. Deterministic per
/// seed. Positives differ from negatives only in the composited pixels.
std::vector<BenchmarkSample> build_adaptability_benchmark(
    const std::vector<world::Take>& takes, const world::WorldConfig& config,
    const std::vector<BenchmarkConcept>& concepts, std::uint64_t seed);

void export_benchmark(const std::vector<BenchmarkSample>& samples,
                      const std::filesystem::path& root);
std::vector<BenchmarkSample> load_benchmark(const std::filesystem::path& root);

}  // namespace mvsg::augment
