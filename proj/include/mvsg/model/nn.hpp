#pragma once

#include "mvsg/core/rng.hpp"
#include "mvsg/model/tensor.hpp"

namespace mvsg::model {

template <typename Scalar>
void init_normal(Parameter<Scalar>& p, Rng& rng, double stddev = 0.02) {
    for (Eigen::Index j = 0; j < p.value.cols(); ++j)
        for (Eigen::Index i = 0; i < p.value.rows(); ++i)
            p.value(i, j) = static_cast<Scalar>(rng.normal(0.0, stddev));
}

template <typename Scalar>
struct Linear {
    Parameter<Scalar> weight;  // in x out
    Parameter<Scalar> bias;    // 1 x out

    Linear() = default;
    Linear(const std::string& name, Eigen::Index in, Eigen::Index out, Rng& rng)
        : weight(name + ".weight", in, out), bias(name + ".bias", 1, out) {
        init_normal(weight, rng);
    }

    typename Tape<Scalar>::Ref apply(Tape<Scalar>& tape, typename Tape<Scalar>::Ref x) {
        return tape.add_bias(tape.matmul(x, tape.param(weight)), tape.param(bias));
    }

    void collect(std::vector<Parameter<Scalar>*>& out) {
        out.push_back(&weight);
        out.push_back(&bias);
    }
};

template <typename Scalar>
struct LayerNorm {
    Parameter<Scalar> gain;  // 1 x d
    Parameter<Scalar> bias;  // 1 x d

    LayerNorm() = default;
    LayerNorm(const std::string& name, Eigen::Index d)
        : gain(name + ".gain", 1, d), bias(name + ".bias", 1, d) {
        gain.value.setOnes();
    }

    typename Tape<Scalar>::Ref apply(Tape<Scalar>& tape, typename Tape<Scalar>::Ref x) {
        return tape.layer_norm(x, tape.param(gain), tape.param(bias));
    }

    void collect(std::vector<Parameter<Scalar>*>& out) {
        out.push_back(&gain);
        out.push_back(&bias);
    }
};

template <typename Scalar>
struct MultiheadAttention {
    int heads = 1;
    Linear<Scalar> q, k, v, o;

    MultiheadAttention() = default;
    MultiheadAttention(const std::string& name, Eigen::Index d, int n_heads, Rng& rng)
        : heads(n_heads), q(name + ".q", d, d, rng), k(name + ".k", d, d, rng),
          v(name + ".v", d, d, rng), o(name + ".o", d, d, rng) {}

    typename Tape<Scalar>::Ref apply(Tape<Scalar>& tape, typename Tape<Scalar>::Ref x,
                                     bool causal) {
        const Eigen::Index d = tape.value(x).cols();
        const Eigen::Index dh = d / heads;
        const auto Q = q.apply(tape, x);
        const auto K = k.apply(tape, x);
        const auto V = v.apply(tape, x);
        std::vector<typename Tape<Scalar>::Ref> head_outs;
        for (int h = 0; h < heads; ++h) {
            const auto qh = tape.slice_cols(Q, h * dh, dh);
            const auto kh = tape.slice_cols(K, h * dh, dh);
            const auto vh = tape.slice_cols(V, h * dh, dh);
            auto scores = tape.scale(tape.matmul_nt(qh, kh),
                                     Scalar(1) / std::sqrt(static_cast<Scalar>(dh)));
            auto weights = tape.softmax_rows(scores, causal);
            head_outs.push_back(tape.matmul(weights, vh));
        }
        return o.apply(tape, tape.concat_cols(head_outs));
    }

    void collect(std::vector<Parameter<Scalar>*>& out) {
        q.collect(out);
        k.collect(out);
        v.collect(out);
        o.collect(out);
    }
};

/// Pre-LN transformer block with a GELU MLP.
template <typename Scalar>
struct Block {
    LayerNorm<Scalar> ln1, ln2;
    MultiheadAttention<Scalar> attn;
    Linear<Scalar> fc1, fc2;

    Block() = default;
    Block(const std::string& name, Eigen::Index d, int heads, int mlp_ratio, Rng& rng)
        : ln1(name + ".ln1", d), ln2(name + ".ln2", d), attn(name + ".attn", d, heads, rng),
          fc1(name + ".fc1", d, d * mlp_ratio, rng), fc2(name + ".fc2", d * mlp_ratio, d, rng) {}

    typename Tape<Scalar>::Ref apply(Tape<Scalar>& tape, typename Tape<Scalar>::Ref x,
                                     bool causal) {
        auto a = tape.add(x, attn.apply(tape, ln1.apply(tape, x), causal));
        auto m = fc2.apply(tape, tape.gelu(fc1.apply(tape, ln2.apply(tape, a))));
        return tape.add(a, m);
    }

    void collect(std::vector<Parameter<Scalar>*>& out) {
        ln1.collect(out);
        ln2.collect(out);
        attn.collect(out);
        fc1.collect(out);
        fc2.collect(out);
    }
};

}  // namespace mvsg::model
