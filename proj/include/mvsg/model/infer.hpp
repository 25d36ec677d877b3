#pragma once

#include "mvsg/model/net.hpp"

namespace mvsg::model {

/// Plain-matrix forward helpers mirroring the tape ops bit-for-bit.
namespace fwd {

template <typename Scalar>
MatX<Scalar> linear(const Linear<Scalar>& l, const MatX<Scalar>& x) {
    return (x * l.weight.value).rowwise() + l.bias.value.row(0);
}

template <typename Scalar>
MatX<Scalar> layer_norm(const LayerNorm<Scalar>& ln, const MatX<Scalar>& x,
                        Scalar eps = Scalar(1e-5)) {
    MatX<Scalar> out(x.rows(), x.cols());
    const Eigen::Index d = x.cols();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Scalar mean = x.row(i).mean();
        const Scalar var = (x.row(i).array() - mean).square().sum() / static_cast<Scalar>(d);
        const Scalar inv = Scalar(1) / std::sqrt(var + eps);
        out.row(i) = (((x.row(i).array() - mean) * inv) * ln.gain.value.row(0).array() +
                      ln.bias.value.row(0).array())
                         .matrix();
    }
    return out;
}

template <typename Scalar>
MatX<Scalar> gelu(const MatX<Scalar>& x) {
    const Scalar c = Scalar(0.7978845608028654);
    return x.unaryExpr([c](Scalar v) {
        return Scalar(0.5) * v * (Scalar(1) + std::tanh(c * (v + Scalar(0.044715) * v * v * v)));
    });
}

}  // namespace fwd

/// Incremental causal decoding with per-layer key/value caches.
template <typename Scalar>
class DecoderSession {
public:
    explicit DecoderSession(Net<Scalar>& net) : net_(net) {
        caches_.resize(net_.dec_blocks().size());
    }

    Eigen::Index length() const { return caches_.empty() ? 0 : caches_[0].keys.rows(); }

    /// Feeds `rows` (T x d embedded inputs, positions already added) through
    /// the decoder, extending the caches. Returns logits for the last row.
    MatX<Scalar> feed(const MatX<Scalar>& rows) {
        MatX<Scalar> x = rows;
        auto& blocks = net_.dec_blocks();
        for (std::size_t li = 0; li < blocks.size(); ++li) {
            auto& blk = blocks[li];
            auto& cache = caches_[li];
            const MatX<Scalar> h = fwd::layer_norm(blk.ln1, x);
            const MatX<Scalar> q = fwd::linear(blk.attn.q, h);
            const MatX<Scalar> k = fwd::linear(blk.attn.k, h);
            const MatX<Scalar> v = fwd::linear(blk.attn.v, h);

            const Eigen::Index prev = cache.keys.rows();
            cache.keys.conservativeResize(prev + k.rows(), k.cols());
            cache.keys.bottomRows(k.rows()) = k;
            cache.values.conservativeResize(prev + v.rows(), v.cols());
            cache.values.bottomRows(v.rows()) = v;

            const int heads = blk.attn.heads;
            const Eigen::Index d = q.cols();
            const Eigen::Index dh = d / heads;
            MatX<Scalar> attn_out(q.rows(), d);
            for (int hh = 0; hh < heads; ++hh) {
                const auto qh = q.middleCols(hh * dh, dh);
                const auto kh = cache.keys.middleCols(hh * dh, dh);
                const auto vh = cache.values.middleCols(hh * dh, dh);
                MatX<Scalar> scores =
                    qh * kh.transpose() / std::sqrt(static_cast<Scalar>(dh));
                // causal: query row i (absolute position prev + i) sees keys 0..prev+i
                for (Eigen::Index i = 0; i < scores.rows(); ++i) {
                    const Eigen::Index limit = prev + i + 1;
                    Scalar mx = scores(i, 0);
                    for (Eigen::Index j = 1; j < limit; ++j) mx = std::max(mx, scores(i, j));
                    Scalar sum = 0;
                    for (Eigen::Index j = 0; j < limit; ++j) {
                        scores(i, j) = std::exp(scores(i, j) - mx);
                        sum += scores(i, j);
                    }
                    for (Eigen::Index j = 0; j < limit; ++j) scores(i, j) /= sum;
                    for (Eigen::Index j = limit; j < scores.cols(); ++j) scores(i, j) = 0;
                }
                attn_out.middleCols(hh * dh, dh) = scores * vh;
            }
            const MatX<Scalar> a = x + fwd::linear(blk.attn.o, attn_out);
            const MatX<Scalar> m =
                fwd::linear(blk.fc2, fwd::gelu(fwd::linear(blk.fc1, fwd::layer_norm(blk.ln2, a))));
            x = a + m;
        }
        const MatX<Scalar> last = x.bottomRows(1);
        return fwd::linear(net_.lm_head(), fwd::layer_norm(net_.final_ln(), last));
    }

private:
    struct LayerCache {
        MatX<Scalar> keys;
        MatX<Scalar> values;
    };
    Net<Scalar>& net_;
    std::vector<LayerCache> caches_;
};

/// Inputs to one generation/loss call: prompt token ids plus the images
/// behind the <img> block and <visdesc> placeholders.
template <typename Scalar>
struct PromptInputs {
    std::vector<int> prompt_ids;
    std::vector<MatX<Scalar>> view_patches;       // one per input view
    std::vector<MatX<Scalar>> visdesc_patches;    // one per <visdesc> token
};

/// Embeds prompt ids into decoder rows (values only; no gradients).
template <typename Scalar>
MatX<Scalar> prompt_rows(Net<Scalar>& net, const Tokenizer& tok,
                         const PromptInputs<Scalar>& in) {
    Tape<Scalar> tape;
    typename Net<Scalar>::Ref projected = -1;
    if (!in.view_patches.empty()) projected = net.image_block(tape, in.view_patches);
    std::vector<typename Net<Scalar>::Ref> vis;
    for (const auto& p : in.visdesc_patches) vis.push_back(net.embed_visual_descriptor(tape, p));
    const auto rows =
        net.input_rows(tape, in.prompt_ids, tok.img_id(), tok.visdesc_id(), projected, vis);
    return tape.value(rows);
}

/// Greedy decoding until <eos>, context exhaustion or max_len new tokens.
/// Returns the decoded string (generated tokens only).
template <typename Scalar>
std::string generate(Net<Scalar>& net, const Tokenizer& tok, const PromptInputs<Scalar>& in,
                     int max_len) {
    const auto& cfg = net.config();
    if (static_cast<int>(in.prompt_ids.size()) >= cfg.context)
        throw ContextOverflow("prompt fills the whole context");

    MatX<Scalar> rows = prompt_rows(net, tok, in);
    DecoderSession<Scalar> session(net);
    MatX<Scalar> logits = session.feed(rows);

    std::vector<int> generated;
    for (int step = 0; step < max_len; ++step) {
        if (static_cast<int>(in.prompt_ids.size()) + step >= cfg.context) break;
        Eigen::Index best = 0;
        logits.row(0).maxCoeff(&best);
        const int next = static_cast<int>(best);
        if (next == tok.eos_id()) break;
        generated.push_back(next);
        const Eigen::Index pos = static_cast<Eigen::Index>(in.prompt_ids.size()) + step;
        if (pos >= cfg.context) break;
        MatX<Scalar> row = net.tok_emb().value.row(next) + net.dec_pos().value.row(pos);
        logits = session.feed(row);
    }
    return tok.decode(generated);
}

}  // namespace mvsg::model
