#pragma once

#include <filesystem>

#include "mvsg/model/train.hpp"

namespace mvsg::model {

/// Assembles prompts and target sequences for frames and variability
/// samples. Shared by the trainer and the evaluation protocols so train and
/// test inputs come from one code path.
template <typename Scalar>
class SampleBuilder {
public:
    SampleBuilder(const PromptFactory& factory, const Net<Scalar>& net)
        : factory_(&factory), n_img_tokens_(net.config().n_patches()),
          image_size_(net.config().image_size), patch_(net.config().patch) {}

    struct Assembled {
        std::vector<int> prompt_ids;
        std::vector<MatX<Scalar>> visdesc_patches;
        graph::SymbolMap map;  // identity-free when not symbolic
        bool symbolic = false;
    };

    /// Builds the prompt for one frame. `target_graph` is only consulted for
    /// the symbolic coverage check and may be null at inference.
    Assembled assemble(const std::vector<PromptFactory::ExtraConcept>& extras,
                       const std::vector<world::AttributeSet>& distractor_attrs,
                       const std::vector<graph::SceneGraph>* history,
                       const graph::SceneGraph* target_graph, Rng& rng, bool training) const {
        const auto& cfg = factory_->config();
        const auto& tok = factory_->tokenizer();

        Assembled out;
        out.symbolic = cfg.symbolic;
        std::vector<knowledge::Descriptor> descriptors;
        if (cfg.symbolic) {
            out.map = graph::sample_symbol_map(factory_->sample_vocabulary(extras), rng);
            descriptors = factory_->descriptors(out.map, extras, rng);
            auto extra_descriptors = factory_->distractors(out.map, distractor_attrs, rng);
            descriptors.insert(descriptors.end(), extra_descriptors.begin(),
                               extra_descriptors.end());
        }

        std::optional<knowledge::ChangeLog> log;
        if (cfg.temporal) {
            std::vector<graph::SceneGraph> hist;
            if (history) {
                hist = *history;
                if (cfg.symbolic)
                    for (auto& g : hist) g = graph::remap(g, out.map);
            }
            log = knowledge::build_change_log(hist, cfg.short_window);
            if (static_cast<int>(log->long_term.size()) > cfg.max_long_triplets)
                log->long_term.resize(static_cast<std::size_t>(cfg.max_long_triplets));
        }

        std::optional<std::set<std::string>> required;
        if (cfg.symbolic && target_graph) {
            required.emplace();
            const auto remapped = graph::remap(*target_graph, out.map);
            for (const auto& t : remapped) {
                required->insert(t.subject);
                required->insert(t.object);
                required->insert(t.predicate);
            }
        }

        const auto prompt =
            knowledge::assemble_prompt(n_img_tokens_, std::move(descriptors), log,
                                       cfg.instruction, required, training ? &rng : nullptr);
        out.prompt_ids = tok.encode_tokens(prompt.tokens);
        for (const auto& img : prompt.visual_descriptors)
            out.visdesc_patches.push_back(patches(img));
        return out;
    }

    /// Full training sequence: prompt plus serialized (possibly remapped)
    /// target and <eos>.
    BuiltSample<Scalar> build_training_sample(const Assembled& assembled,
                                              const graph::SceneGraph& target_graph,
                                              const std::map<int, Image>& images,
                                              const std::vector<int>& view_ids) const {
        const auto& tok = factory_->tokenizer();
        BuiltSample<Scalar> s;
        s.seq.ids = assembled.prompt_ids;
        const graph::SceneGraph target =
            assembled.symbolic ? graph::remap(target_graph, assembled.map) : target_graph;
        const auto target_ids = tok.encode_string(graph::serialize(target));
        s.seq.target_begin = static_cast<int>(s.seq.ids.size());
        s.seq.ids.insert(s.seq.ids.end(), target_ids.begin(), target_ids.end());
        s.seq.ids.push_back(tok.eos_id());
        s.seq.target_end = static_cast<int>(s.seq.ids.size());
        s.visdesc_patches = assembled.visdesc_patches;
        for (int v : view_ids) s.view_patches.push_back(patches(images.at(v)));
        return s;
    }

    /// View subset for one training step: uniform count, uniform subset,
    /// shuffled order (the paper's robustness augmentation).
    std::vector<int> select_views(const std::vector<int>& train_views, Rng& rng) const {
        const auto& cfg = factory_->config();
        if (cfg.single_view) return {cfg.single_view_id};
        std::vector<int> views = train_views;
        if (!cfg.view_augmentation) return views;
        const std::size_t count = 1 + rng.uniform_u64(views.size());
        rng.shuffle(views);
        views.resize(count);
        return views;
    }

    MatX<Scalar> patches(const Image& img) const {
        // mirrors Net::patches_of without needing the net instance
        if (img.width != image_size_ || img.height != image_size_ || img.channels != 3)
            throw BadImageShape("SampleBuilder: bad image shape");
        const int patch = patch_;
        const int g = image_size_ / patch;
        MatX<Scalar> out(g * g, patch * patch * 3);
        for (int gy = 0; gy < g; ++gy)
            for (int gx = 0; gx < g; ++gx) {
                Eigen::Index col = 0;
                const Eigen::Index row = gy * g + gx;
                for (int y = 0; y < patch; ++y)
                    for (int x = 0; x < patch; ++x)
                        for (int c = 0; c < 3; ++c)
                            out(row, col++) = static_cast<Scalar>(
                                img.at(gx * patch + x, gy * patch + y, c) / 255.0 - 0.5);
            }
        return out;
    }

private:
    const PromptFactory* factory_;
    int n_img_tokens_;
    int image_size_;
    int patch_ = 8;
};

template <typename Scalar>
struct Adam {
    double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    int t = 0;
    std::vector<MatX<Scalar>> m, v;

    void init(const std::vector<Parameter<Scalar>*>& params) {
        m.clear();
        v.clear();
        for (auto* p : params) {
            m.push_back(MatX<Scalar>::Zero(p->value.rows(), p->value.cols()));
            v.push_back(MatX<Scalar>::Zero(p->value.rows(), p->value.cols()));
        }
    }

    void step(const std::vector<Parameter<Scalar>*>& params, double lr_t) {
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, t);
        const double bc2 = 1.0 - std::pow(beta2, t);
        for (std::size_t i = 0; i < params.size(); ++i) {
            auto& p = *params[i];
            m[i] = beta1 * m[i] + (1.0 - beta1) * p.grad;
            v[i] = (beta2 * v[i].array() + (1.0 - beta2) * p.grad.array().square()).matrix();
            const auto mhat = m[i].array() / bc1;
            const auto vhat = v[i].array() / bc2;
            p.value.array() -= static_cast<Scalar>(lr_t) * mhat / (vhat.sqrt() + eps);
        }
    }
};

/// One datum reference: a base frame or a variability sample.
struct DatumRef {
    bool is_aug = false;
    std::size_t take = 0, frame = 0, aug = 0;
};

template <typename Scalar>
class Trainer {
public:
    Trainer(Net<Scalar>& net, const Tokenizer& tok, const world::WorldConfig& world,
            const TrainData& data, const TrainConfig& cfg)
        : net_(&net), tok_(&tok), world_(&world), data_(&data), cfg_(cfg),
          factory_(world, tok, cfg), builder_(factory_, net) {
        if (data.use_aug) {
            if (data.aug.empty()) throw DataNotFound("adaptive training without samples");
        } else if (data.frame_count() == 0) {
            throw DataNotFound("no training frames");
        }
        for (std::size_t ti = 0; ti < data.takes.size(); ++ti)
            for (std::size_t fi = 0; fi < data.takes[ti].size(); ++fi)
                flat_.push_back({false, ti, fi, 0});
    }

    /// Runs the optimization loop; appends (step, loss, lr) rows to log_csv.
    void run(const std::filesystem::path& log_csv) {
        std::ofstream log(log_csv, std::ios::binary);
        log << "step,loss,lr\n";

        auto params = net_->parameters();
        Adam<Scalar> adam;
        adam.lr = cfg_.lr;
        adam.init(params);

        Rng run_rng(Rng::mix(cfg_.seed, 0x747261696e));
        const int threads = std::max(1, std::min(cfg_.threads, cfg_.batch_size));

        for (int step = 0; step < cfg_.steps; ++step) {
            std::vector<std::uint64_t> sample_seeds;
            for (int b = 0; b < cfg_.batch_size; ++b) sample_seeds.push_back(run_rng.next_u64());

            std::vector<std::map<Parameter<Scalar>*, MatX<Scalar>>> sinks(
                static_cast<std::size_t>(threads));
            std::vector<double> losses(static_cast<std::size_t>(threads), 0.0);

            auto work = [&](int w) {
                for (int b = w; b < cfg_.batch_size; b += threads)
                    losses[static_cast<std::size_t>(w)] +=
                        process_sample(sample_seeds[static_cast<std::size_t>(b)],
                                       sinks[static_cast<std::size_t>(w)]);
            };
            if (threads == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
                for (auto& th : pool) th.join();
            }

            double loss = 0.0;
            for (double l : losses) loss += l;
            loss /= cfg_.batch_size;
            if (!std::isfinite(loss))
                throw NonFiniteLoss("non-finite loss at step " + std::to_string(step));

            for (auto* p : params) p->zero_grad();
            for (auto& sink : sinks)
                for (auto& [p, g] : sink) p->grad += g;
            const Scalar inv_b = Scalar(1) / static_cast<Scalar>(cfg_.batch_size);
            for (auto* p : params) p->grad *= inv_b;

            if (cfg_.grad_clip > 0) {
                double sq = 0.0;
                for (auto* p : params) sq += static_cast<double>(p->grad.squaredNorm());
                const double norm = std::sqrt(sq);
                if (norm > cfg_.grad_clip) {
                    const Scalar s = static_cast<Scalar>(cfg_.grad_clip / norm);
                    for (auto* p : params) p->grad *= s;
                }
            }

            const double lr_t =
                cfg_.lr * std::min(1.0, static_cast<double>(step + 1) /
                                            std::max(1, cfg_.warmup_steps));
            adam.step(params, lr_t);

            if (step % cfg_.log_every == 0 || step + 1 == cfg_.steps)
                log << step << "," << loss << "," << lr_t << "\n";
            last_loss_ = loss;
            if (step == 0) first_loss_ = loss;
        }
    }

    double first_loss() const { return first_loss_; }
    double last_loss() const { return last_loss_; }
    const SampleBuilder<Scalar>& builder() const { return builder_; }

private:
    double process_sample(std::uint64_t seed, std::map<Parameter<Scalar>*, MatX<Scalar>>& sink) {
        Rng rng(seed);
        const BuiltSample<Scalar> s = build_sample(rng);

        Tape<Scalar> tape(false);
        typename Net<Scalar>::Ref projected = -1;
        if (!s.view_patches.empty()) projected = net_->image_block(tape, s.view_patches);
        std::vector<typename Net<Scalar>::Ref> vis;
        for (const auto& p : s.visdesc_patches)
            vis.push_back(net_->embed_visual_descriptor(tape, p));
        const auto loss = net_->sequence_loss(tape, s.seq, projected, vis, tok_->img_id(),
                                              tok_->visdesc_id(), tok_->pad_id());
        tape.backward(loss);
        tape.export_param_grads(sink);
        return static_cast<double>(tape.value(loss)(0, 0));
    }

    BuiltSample<Scalar> build_sample(Rng& rng) {
        const auto views = builder_.select_views(world_->train_views, rng);

        if (data_->use_aug) {
            const auto& s = data_->aug[rng.uniform_u64(data_->aug.size())];
            PromptFactory::ExtraConcept extra;
            extra.name = s.concept_name;
            extra.is_predicate = s.concept_kind == "tool";
            extra.attributes = s.attributes;
            Image canvas;
            if (cfg_.modality == "visual" || cfg_.modality == "both") {
                canvas = augment::sprite_on_canvas(s.sprite, world_->image_size);
                extra.sprite_canvas = &canvas;
            }
            const auto assembled =
                builder_.assemble({extra}, s.distractors, nullptr, &s.graph, rng, true);
            return builder_.build_training_sample(assembled, s.graph, s.images, views);
        }

        const auto& datum = flat_[rng.uniform_u64(flat_.size())];
        const auto& take = data_->takes[datum.take];
        const auto& frame = take[datum.frame];
        std::vector<graph::SceneGraph> history;
        if (cfg_.temporal)
            for (std::size_t i = 0; i < datum.frame; ++i) history.push_back(take[i].graph);
        const auto assembled = builder_.assemble(
            {}, {}, cfg_.temporal ? &history : nullptr, &frame.graph, rng, true);
        return builder_.build_training_sample(assembled, frame.graph, frame.images, views);
    }

    Net<Scalar>* net_;
    const Tokenizer* tok_;
    const world::WorldConfig* world_;
    const TrainData* data_;
    TrainConfig cfg_;
    PromptFactory factory_;
    SampleBuilder<Scalar> builder_;
    std::vector<DatumRef> flat_;
    double first_loss_ = 0.0, last_loss_ = 0.0;
};

}  // namespace mvsg::model
