#pragma once

#include <filesystem>
#include <memory>

#include "mvsg/model/train.hpp"

namespace mvsg::model {

/// A self-describing trained model: architecture, tokenizer, mode flags and
/// parameters. Reloading reproduces forward outputs bit-exactly.
struct Checkpoint {
    ModelConfig model;
    TrainConfig train;
    Tokenizer tokenizer;
    std::unique_ptr<Net<float>> net;

    static Checkpoint from_net(Net<float>& source, const Tokenizer& tok,
                               const TrainConfig& train_cfg);
};

void save_checkpoint(Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mvsg::model
