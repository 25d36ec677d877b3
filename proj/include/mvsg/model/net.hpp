#pragma once

#include <json.hpp>

#include "mvsg/core/image.hpp"
#include "mvsg/model/nn.hpp"
#include "mvsg/model/tokenizer.hpp"

namespace mvsg::model {

struct BadImageShape : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContextOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    int d = 128;
    int enc_layers = 2;
    int pool_layers = 2;
    int dec_layers = 4;
    int heads = 4;
    int patch = 8;
    int image_size = 64;
    int context = 1024;
    int mlp_ratio = 4;
    int max_views = 6;
    std::uint64_t init_seed = 0;

    int grid() const { return image_size / patch; }
    int n_patches() const { return grid() * grid(); }
    int patch_dim() const { return patch * patch * 3; }

    nlohmann::json to_json() const;
    static ModelConfig from_json(const nlohmann::json& j);
};

/// Token positions of one training/inference sequence. Positions holding
/// <img> are filled from the pooled image projection in order; positions
/// holding <visdesc> are filled from the visual-descriptor embeddings.
struct SequenceSpec {
    std::vector<int> ids;
    int target_begin = 0;  // first position whose token the loss predicts
    int target_end = 0;    // one past the last such position
};

/// The end-to-end network: per-view patch encoder, multiview pooler,
/// projector into the decoder space, visual-descriptor embedder and the
/// causal decoder with its token/position tables.
template <typename Scalar>
class Net {
public:
    using Ref = typename Tape<Scalar>::Ref;

    Net(const ModelConfig& cfg, int vocab_size) : cfg_(cfg), vocab_size_(vocab_size) {
        Rng rng(Rng::mix(cfg.init_seed, 0x6d6f64656c));
        const Eigen::Index d = cfg.d;

        patch_embed_ = Linear<Scalar>("enc.patch", cfg.patch_dim(), d, rng);
        enc_pos_ = Parameter<Scalar>("enc.pos", cfg.n_patches(), d);
        init_normal(enc_pos_, rng);
        for (int i = 0; i < cfg.enc_layers; ++i)
            enc_blocks_.emplace_back("enc.block" + std::to_string(i), d, cfg.heads,
                                     cfg.mlp_ratio, rng);

        pool_pos_ = Parameter<Scalar>("pool.pos", cfg.max_views * cfg.n_patches(), d);
        init_normal(pool_pos_, rng);
        for (int i = 0; i < cfg.pool_layers; ++i)
            pool_blocks_.emplace_back("pool.block" + std::to_string(i), d, cfg.heads,
                                      cfg.mlp_ratio, rng);

        proj1_ = Linear<Scalar>("proj.fc1", d, d, rng);
        proj2_ = Linear<Scalar>("proj.fc2", d, d, rng);
        vis1_ = Linear<Scalar>("visdesc.fc1", d, d, rng);
        vis2_ = Linear<Scalar>("visdesc.fc2", d, d, rng);

        tok_emb_ = Parameter<Scalar>("dec.tok_emb", vocab_size, d);
        init_normal(tok_emb_, rng);
        dec_pos_ = Parameter<Scalar>("dec.pos", cfg.context, d);
        init_normal(dec_pos_, rng);
        for (int i = 0; i < cfg.dec_layers; ++i)
            dec_blocks_.emplace_back("dec.block" + std::to_string(i), d, cfg.heads,
                                     cfg.mlp_ratio, rng);
        final_ln_ = LayerNorm<Scalar>("dec.final_ln", d);
        lm_head_ = Linear<Scalar>("dec.lm_head", d, vocab_size, rng);
    }

    const ModelConfig& config() const { return cfg_; }
    int vocab_size() const { return vocab_size_; }

    /// Declaration-order parameter list (checkpoint and optimizer order).
    std::vector<Parameter<Scalar>*> parameters() {
        std::vector<Parameter<Scalar>*> out;
        patch_embed_.collect(out);
        out.push_back(&enc_pos_);
        for (auto& b : enc_blocks_) b.collect(out);
        out.push_back(&pool_pos_);
        for (auto& b : pool_blocks_) b.collect(out);
        proj1_.collect(out);
        proj2_.collect(out);
        vis1_.collect(out);
        vis2_.collect(out);
        out.push_back(&tok_emb_);
        out.push_back(&dec_pos_);
        for (auto& b : dec_blocks_) b.collect(out);
        final_ln_.collect(out);
        lm_head_.collect(out);
        return out;
    }

    void zero_grad() {
        for (auto* p : parameters()) p->zero_grad();
    }

    /// n_patches x patch_dim matrix of normalized pixels for one image.
    MatX<Scalar> patches_of(const Image& img) const {
        if (img.width != cfg_.image_size || img.height != cfg_.image_size || img.channels != 3)
            throw BadImageShape("expected " + std::to_string(cfg_.image_size) + "x" +
                                std::to_string(cfg_.image_size) + " RGB image");
        const int g = cfg_.grid();
        MatX<Scalar> out(cfg_.n_patches(), cfg_.patch_dim());
        for (int gy = 0; gy < g; ++gy)
            for (int gx = 0; gx < g; ++gx) {
                Eigen::Index col = 0;
                const Eigen::Index row = gy * g + gx;
                for (int y = 0; y < cfg_.patch; ++y)
                    for (int x = 0; x < cfg_.patch; ++x)
                        for (int c = 0; c < 3; ++c)
                            out(row, col++) = static_cast<Scalar>(
                                img.at(gx * cfg_.patch + x, gy * cfg_.patch + y, c) / 255.0 - 0.5);
            }
        return out;
    }

    /// One image -> n_patches x d embeddings (shared across views).
    Ref encode_view(Tape<Scalar>& tape, const MatX<Scalar>& patches) {
        Ref x = patch_embed_.apply(tape, tape.constant(patches));
        x = tape.add(x, tape.param(enc_pos_));
        for (auto& b : enc_blocks_) x = b.apply(tape, x, false);
        return x;
    }

    /// Concatenates per-view sequences, adds the shared concatenated-position
    /// table, runs the pooler and keeps the first n_patches tokens.
    Ref pool_views(Tape<Scalar>& tape, const std::vector<Ref>& views) {
        if (views.empty()) throw EmptyInput("pool_views: no view embeddings");
        Ref x = views.size() == 1 ? views[0] : tape.concat_rows(views);
        const Eigen::Index total = tape.value(x).rows();
        if (total > pool_pos_.value.rows())
            throw EmptyInput("pool_views: more views than the pooler supports");
        x = tape.add(x, tape.slice_rows(tape.param(pool_pos_), 0, total));
        for (auto& b : pool_blocks_) x = b.apply(tape, x, false);
        return tape.slice_rows(x, 0, cfg_.n_patches());
    }

    Ref project(Tape<Scalar>& tape, Ref pooled) {
        return proj2_.apply(tape, tape.gelu(proj1_.apply(tape, pooled)));
    }

    /// Full image path: encode all views, pool, project. Returns n_patches x d.
    Ref image_block(Tape<Scalar>& tape, const std::vector<MatX<Scalar>>& view_patches) {
        std::vector<Ref> encoded;
        for (const auto& p : view_patches) encoded.push_back(encode_view(tape, p));
        return project(tape, pool_views(tape, encoded));
    }

    /// Single-token visual descriptor: frozen-encoder mean pool, projected.
    Ref embed_visual_descriptor(Tape<Scalar>& tape, const MatX<Scalar>& patches) {
        Ref enc = tape.detach(encode_view(tape, patches));
        Ref pooled = tape.mean_rows(enc);
        return vis2_.apply(tape, tape.gelu(vis1_.apply(tape, pooled)));
    }

    /// Embeds a token sequence, splicing image and visual-descriptor rows
    /// into their placeholder positions, and adds decoder positions.
    Ref input_rows(Tape<Scalar>& tape, const std::vector<int>& ids, int img_id, int visdesc_id,
                   Ref projected, const std::vector<Ref>& visdesc_rows) {
        const Eigen::Index T = static_cast<Eigen::Index>(ids.size());
        if (T > cfg_.context)
            throw ContextOverflow("sequence of " + std::to_string(ids.size()) +
                                  " tokens exceeds context " + std::to_string(cfg_.context));
        std::vector<Ref> segments;
        Ref table = tape.param(tok_emb_);
        std::vector<int> run;
        int img_at = 0, vis_at = 0;
        auto flush_run = [&] {
            if (!run.empty()) {
                segments.push_back(tape.gather_rows(table, run));
                run.clear();
            }
        };
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (ids[i] == img_id) {
                flush_run();
                // contiguous <img> run becomes one slice of the projection
                int len = 0;
                while (i + len < ids.size() && ids[i + len] == img_id) ++len;
                segments.push_back(tape.slice_rows(projected, img_at, len));
                img_at += len;
                i += static_cast<std::size_t>(len) - 1;
            } else if (ids[i] == visdesc_id) {
                flush_run();
                segments.push_back(visdesc_rows.at(static_cast<std::size_t>(vis_at++)));
            } else {
                run.push_back(ids[i]);
            }
        }
        flush_run();
        Ref x = segments.size() == 1 ? segments[0] : tape.concat_rows(segments);
        return tape.add(x, tape.slice_rows(tape.param(dec_pos_), 0, T));
    }

    /// Causal decoder over embedded rows. Returns T x vocab logits.
    Ref decode_logits(Tape<Scalar>& tape, Ref rows) {
        Ref x = rows;
        for (auto& b : dec_blocks_) x = b.apply(tape, x, true);
        return lm_head_.apply(tape, final_ln_.apply(tape, x));
    }

    /// Mean cross entropy over the target span (prompt and padding excluded).
    Ref sequence_loss(Tape<Scalar>& tape, const SequenceSpec& seq, Ref projected,
                      const std::vector<Ref>& visdesc_rows, int img_id, int visdesc_id,
                      int pad_id) {
        Ref rows = input_rows(tape, seq.ids, img_id, visdesc_id, projected, visdesc_rows);
        Ref logits = decode_logits(tape, rows);
        const Eigen::Index T = static_cast<Eigen::Index>(seq.ids.size());
        // logits at t predict ids[t + 1]
        Ref shifted = tape.slice_rows(logits, 0, T - 1);
        std::vector<int> targets(seq.ids.begin() + 1, seq.ids.end());
        std::vector<bool> mask(targets.size(), false);
        for (int t = seq.target_begin; t < seq.target_end; ++t) {
            if (t == 0) continue;
            if (seq.ids[static_cast<std::size_t>(t)] == pad_id) continue;
            mask[static_cast<std::size_t>(t - 1)] = true;
        }
        return tape.cross_entropy(shifted, targets, mask);
    }

    // Direct access for the inference path and checkpointing.
    Linear<Scalar>& patch_embed() { return patch_embed_; }
    Parameter<Scalar>& enc_pos() { return enc_pos_; }
    std::vector<Block<Scalar>>& enc_blocks() { return enc_blocks_; }
    Parameter<Scalar>& pool_pos() { return pool_pos_; }
    std::vector<Block<Scalar>>& pool_blocks() { return pool_blocks_; }
    Parameter<Scalar>& tok_emb() { return tok_emb_; }
    Parameter<Scalar>& dec_pos() { return dec_pos_; }
    std::vector<Block<Scalar>>& dec_blocks() { return dec_blocks_; }
    LayerNorm<Scalar>& final_ln() { return final_ln_; }
    Linear<Scalar>& lm_head() { return lm_head_; }

private:
    ModelConfig cfg_;
    int vocab_size_;

    Linear<Scalar> patch_embed_;
    Parameter<Scalar> enc_pos_;
    std::vector<Block<Scalar>> enc_blocks_;
    Parameter<Scalar> pool_pos_;
    std::vector<Block<Scalar>> pool_blocks_;
    Linear<Scalar> proj1_, proj2_;
    Linear<Scalar> vis1_, vis2_;
    Parameter<Scalar> tok_emb_;
    Parameter<Scalar> dec_pos_;
    std::vector<Block<Scalar>> dec_blocks_;
    LayerNorm<Scalar> final_ln_;
    Linear<Scalar> lm_head_;
};

}  // namespace mvsg::model
