#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mvsg/world/take.hpp"

namespace mvsg::world {

struct OverlappingSplits : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SplitSpec {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
};

/// JSON round-trip for world configurations (world_config.json).
std::string world_config_to_json(const WorldConfig& config);
WorldConfig world_config_from_json(const std::string& text);

/// Writes takes/<take_id>/view<k>/<t>.png, graphs.jsonl and phases.jsonl per
/// take, splits/{train,val,test}.txt and world_config.json. Deterministic:
/// re-exporting the same takes yields byte-identical files.
void export_dataset(const std::vector<Take>& takes, const SplitSpec& split,
                    const WorldConfig& config, const std::filesystem::path& root);

/// One annotated frame as stored on disk. Images load lazily via `image()`.
struct DatasetFrame {
    std::string take_id;
    int t = 0;
    graph::SceneGraph graph;
    std::string phase;
    std::filesystem::path take_dir;

    Image image(int view_id) const;
};

struct Dataset {
    WorldConfig config;
    std::filesystem::path root;
    std::map<std::string, std::vector<DatasetFrame>> takes;  // ordered by take_id
    SplitSpec split;

    std::vector<const DatasetFrame*> split_frames(const std::string& which) const;
    const std::vector<DatasetFrame>& take(const std::string& id) const;
};

Dataset load_dataset(const std::filesystem::path& root);

}  // namespace mvsg::world
