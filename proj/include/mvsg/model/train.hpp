#pragma once

#include <fstream>
#include <thread>

#include "mvsg/augment/variability.hpp"
#include "mvsg/graph/grammar.hpp"
#include "mvsg/graph/symbols.hpp"
#include "mvsg/knowledge/prompt.hpp"
#include "mvsg/model/infer.hpp"

namespace mvsg::model {

struct DataNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonFiniteLoss : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mode flags and optimization settings for one training run.
struct TrainConfig {
    int steps = 700;
    int batch_size = 8;
    double lr = 1e-3;
    int warmup_steps = 30;
    double grad_clip = 1.0;
    int threads = 2;
    std::uint64_t seed = 0;

    bool view_augmentation = true;
    bool single_view = false;
    int single_view_id = 2;

    bool symbolic = false;
    std::string modality = "none";  // none | text | visual | both
    int n_distractors = 2;

    bool temporal = false;
    std::string temporal_history = "ground_truth";  // or "predicted" (evaluation)
    int short_window = knowledge::kDefaultShortTermWindow;
    int max_long_triplets = 24;

    std::string instruction = "predict the current scene graph";
    int log_every = 10;
    int max_generate_len = 96;

    nlohmann::json to_json() const;
    static TrainConfig from_json(const nlohmann::json& j);
};

/// One preloaded annotated frame (training or evaluation view of a take).
struct TrainFrame {
    std::string take_id;
    int t = 0;
    std::map<int, Image> images;
    graph::SceneGraph graph;
    std::string phase;
};

/// Training corpus: ordered frames per take, plus variability samples when
/// the run is adaptive (adaptive runs sample exclusively from `aug`).
struct TrainData {
    const world::WorldConfig* world = nullptr;
    std::vector<std::vector<TrainFrame>> takes;
    std::vector<augment::AugSample> aug;
    bool use_aug = false;

    std::size_t frame_count() const {
        std::size_t n = 0;
        for (const auto& tk : takes) n += tk.size();
        return n;
    }
};

/// Builds base-vocabulary descriptors (every entity and predicate symbol)
/// plus optional extra concepts, in the requested modality.
class PromptFactory {
public:
    PromptFactory(const world::WorldConfig& world, const Tokenizer& tok, TrainConfig cfg)
        : world_(&world), tok_(&tok), cfg_(std::move(cfg)) {}

    const TrainConfig& config() const { return cfg_; }
    const Tokenizer& tokenizer() const { return *tok_; }

    struct ExtraConcept {
        std::string name;
        bool is_predicate = true;
        world::AttributeSet attributes;
        const Image* sprite_canvas = nullptr;  // optional pre-rendered visual
    };

    graph::Vocabulary sample_vocabulary(const std::vector<ExtraConcept>& extras) const {
        auto entities = world_->graph_entity_names();
        auto predicates = world_->predicates;
        for (const auto& e : extras) {
            auto& list = e.is_predicate ? predicates : entities;
            if (std::find(list.begin(), list.end(), e.name) == list.end())
                list.push_back(e.name);
        }
        return graph::Vocabulary(entities, predicates);
    }

    std::vector<knowledge::Descriptor> descriptors(const graph::SymbolMap& map,
                                                   const std::vector<ExtraConcept>& extras,
                                                   Rng& rng) const {
        std::vector<knowledge::Descriptor> out;
        if (cfg_.modality == "none") return out;
        auto add = [&](const std::string& symbol, const world::AttributeSet& attrs,
                       const Image* canvas) {
            if (cfg_.modality == "text" || cfg_.modality == "both") {
                knowledge::Descriptor d;
                d.name_or_symbol = symbol;
                d.modality = knowledge::Modality::textual;
                d.attributes = attrs;
                out.push_back(std::move(d));
            }
            if (cfg_.modality == "visual" || cfg_.modality == "both") {
                knowledge::Descriptor d;
                d.name_or_symbol = symbol;
                d.modality = knowledge::Modality::visual;
                d.attributes = attrs;
                d.sprite = canvas ? *canvas
                                  : augment::sprite_on_canvas(
                                        augment::render_object_sprite(attrs, rng),
                                        world_->image_size);
                out.push_back(std::move(d));
            }
        };
        for (const auto& name : world_->graph_entity_names())
            add(map.entity_map.at(name), world_->entity(name).attributes, nullptr);
        for (const auto& pred : world_->predicates)
            add(map.predicate_map.at(pred), world_->predicate_descriptor(pred), nullptr);
        for (const auto& e : extras) {
            const auto& symbol =
                e.is_predicate ? map.predicate_map.at(e.name) : map.entity_map.at(e.name);
            add(symbol, e.attributes, e.sprite_canvas);
        }
        return out;
    }

    /// Distractor descriptors for symbols that never appear in targets.
    /// They reuse unassigned symbols so the prompt stays well formed.
    std::vector<knowledge::Descriptor> distractors(
        const graph::SymbolMap& map, const std::vector<world::AttributeSet>& attrs,
        Rng& rng) const {
        std::vector<knowledge::Descriptor> out;
        if (cfg_.modality == "none" || attrs.empty()) return out;
        std::set<std::string> used_pred, used_ent;
        for (const auto& [name, sym] : map.predicate_map) used_pred.insert(sym);
        for (const auto& [name, sym] : map.entity_map) used_ent.insert(sym);
        std::vector<std::string> free_pred, free_ent;
        for (const auto& s : graph::predicate_symbols())
            if (!used_pred.count(s)) free_pred.push_back(s);
        for (const auto& s : graph::entity_symbols())
            if (!used_ent.count(s)) free_ent.push_back(s);
        rng.shuffle(free_pred);
        rng.shuffle(free_ent);

        std::size_t pi = 0, ei = 0;
        for (const auto& a : attrs) {
            const bool as_pred = a.object_type == "tool";
            std::string symbol;
            if (as_pred && pi < free_pred.size()) symbol = free_pred[pi++];
            else if (!as_pred && ei < free_ent.size()) symbol = free_ent[ei++];
            else continue;
            knowledge::Descriptor d;
            d.name_or_symbol = symbol;
            d.modality = cfg_.modality == "visual" ? knowledge::Modality::visual
                                                   : knowledge::Modality::textual;
            d.attributes = a;
            if (d.modality == knowledge::Modality::visual)
                d.sprite = augment::sprite_on_canvas(augment::render_object_sprite(a, rng),
                                                     world_->image_size);
            out.push_back(std::move(d));
        }
        return out;
    }

private:
    const world::WorldConfig* world_;
    const Tokenizer* tok_;
    TrainConfig cfg_;
};

/// A fully assembled sample ready for the tape: ids, loss span, patches.
template <typename Scalar>
struct BuiltSample {
    SequenceSpec seq;
    std::vector<MatX<Scalar>> view_patches;
    std::vector<MatX<Scalar>> visdesc_patches;
};

/// Mean cross-entropy of `target_string` under the prompt. Forward only.
template <typename Scalar>
double lm_loss(Net<Scalar>& net, const Tokenizer& tok, const PromptInputs<Scalar>& prompt,
               const std::string& target_string) {
    SequenceSpec seq;
    seq.ids = prompt.prompt_ids;
    const auto target_ids = tok.encode_string(target_string);
    seq.target_begin = static_cast<int>(seq.ids.size());
    seq.ids.insert(seq.ids.end(), target_ids.begin(), target_ids.end());
    seq.ids.push_back(tok.eos_id());
    seq.target_end = static_cast<int>(seq.ids.size());
    if (static_cast<int>(seq.ids.size()) > net.config().context)
        throw ContextOverflow("lm_loss: sequence exceeds context");

    Tape<Scalar> tape;
    typename Net<Scalar>::Ref projected = -1;
    if (!prompt.view_patches.empty()) projected = net.image_block(tape, prompt.view_patches);
    std::vector<typename Net<Scalar>::Ref> vis;
    for (const auto& p : prompt.visdesc_patches)
        vis.push_back(net.embed_visual_descriptor(tape, p));
    const auto loss = net.sequence_loss(tape, seq, projected, vis, tok.img_id(),
                                        tok.visdesc_id(), tok.pad_id());
    return static_cast<double>(tape.value(loss)(0, 0));
}

}  // namespace mvsg::model
