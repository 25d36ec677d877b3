#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvsg::model {

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A named trainable tensor with its accumulated gradient.
template <typename Scalar>
struct Parameter {
    std::string name;
    MatX<Scalar> value;
    MatX<Scalar> grad;

    Parameter() = default;
    Parameter(std::string n, Eigen::Index rows, Eigen::Index cols)
        : name(std::move(n)), value(MatX<Scalar>::Zero(rows, cols)),
          grad(MatX<Scalar>::Zero(rows, cols)) {}

    void zero_grad() { grad.setZero(); }
};

/// Reverse-mode tape over dense matrices. Nodes are created in evaluation
/// order; backward() walks them in reverse, adding into parent gradients.
/// Parameters join a tape as leaves; their gradients accumulate across
/// tapes until zero_grad().
template <typename Scalar>
class Tape {
public:
    using Ref = int;

    /// When accumulate_into_params is false, parameter gradients stay on the
    /// tape (export_param_grads) so several tapes can run concurrently over
    /// one shared parameter set.
    explicit Tape(bool accumulate_into_params = true)
        : accumulate_into_params_(accumulate_into_params) {}

    Ref constant(MatX<Scalar> value) { return push(std::move(value), {}, nullptr, false); }

    /// Parameter leaf. The value is referenced, not copied.
    Ref param(Parameter<Scalar>& p) {
        Node n;
        n.external = &p.value;
        n.bound_param = &p;
        nodes_.push_back(std::move(n));
        return static_cast<Ref>(nodes_.size()) - 1;
    }

    const MatX<Scalar>& value(Ref r) const {
        const auto& n = nodes_[static_cast<std::size_t>(r)];
        return n.external ? *n.external : n.value;
    }
    const MatX<Scalar>& grad(Ref r) const { return nodes_[static_cast<std::size_t>(r)].grad; }

    // ---- operations ------------------------------------------------------

    Ref matmul(Ref a, Ref b) {
        return push(value(a) * value(b), {a, b}, [this, a, b](Node& n) {
            add_grad(a, n.grad * value(b).transpose());
            add_grad(b, value(a).transpose() * n.grad);
        });
    }

    /// A * B^T without materializing the transpose in the graph.
    Ref matmul_nt(Ref a, Ref b) {
        return push(value(a) * value(b).transpose(), {a, b}, [this, a, b](Node& n) {
            add_grad(a, n.grad * value(b));
            add_grad(b, n.grad.transpose() * value(a));
        });
    }

    Ref add(Ref a, Ref b) {
        return push(value(a) + value(b), {a, b}, [this, a, b](Node& n) {
            add_grad(a, n.grad);
            add_grad(b, n.grad);
        });
    }

    /// Adds a 1 x cols bias row to every row of a.
    Ref add_bias(Ref a, Ref bias) {
        return push(value(a).rowwise() + value(bias).row(0), {a, bias}, [this, a, bias](Node& n) {
            add_grad(a, n.grad);
            add_grad(bias, n.grad.colwise().sum());
        });
    }

    Ref scale(Ref a, Scalar s) {
        return push(value(a) * s, {a}, [this, a, s](Node& n) { add_grad(a, n.grad * s); });
    }

    Ref slice_rows(Ref a, Eigen::Index start, Eigen::Index count) {
        return push(value(a).middleRows(start, count), {a}, [this, a, start, count](Node& n) {
            grad_of(a).middleRows(start, count) += n.grad;
        });
    }

    Ref slice_cols(Ref a, Eigen::Index start, Eigen::Index count) {
        return push(value(a).middleCols(start, count), {a}, [this, a, start, count](Node& n) {
            grad_of(a).middleCols(start, count) += n.grad;
        });
    }

    Ref concat_rows(const std::vector<Ref>& parts) {
        Eigen::Index rows = 0;
        const Eigen::Index cols = value(parts.at(0)).cols();
        for (Ref p : parts) rows += value(p).rows();
        MatX<Scalar> out(rows, cols);
        Eigen::Index at = 0;
        for (Ref p : parts) {
            out.middleRows(at, value(p).rows()) = value(p);
            at += value(p).rows();
        }
        return push(std::move(out), parts, [this, parts](Node& n) {
            Eigen::Index at = 0;
            for (Ref p : parts) {
                const Eigen::Index r = value(p).rows();
                grad_of(p) += n.grad.middleRows(at, r);
                at += r;
            }
        });
    }

    Ref concat_cols(const std::vector<Ref>& parts) {
        Eigen::Index cols = 0;
        const Eigen::Index rows = value(parts.at(0)).rows();
        for (Ref p : parts) cols += value(p).cols();
        MatX<Scalar> out(rows, cols);
        Eigen::Index at = 0;
        for (Ref p : parts) {
            out.middleCols(at, value(p).cols()) = value(p);
            at += value(p).cols();
        }
        return push(std::move(out), parts, [this, parts](Node& n) {
            Eigen::Index at = 0;
            for (Ref p : parts) {
                const Eigen::Index c = value(p).cols();
                grad_of(p) += n.grad.middleCols(at, c);
                at += c;
            }
        });
    }

    /// Gathers rows of a parameter table by index (token embedding lookup).
    Ref gather_rows(Ref table, const std::vector<int>& ids) {
        MatX<Scalar> out(static_cast<Eigen::Index>(ids.size()), value(table).cols());
        for (std::size_t i = 0; i < ids.size(); ++i)
            out.row(static_cast<Eigen::Index>(i)) = value(table).row(ids[i]);
        return push(std::move(out), {table}, [this, table, ids](Node& n) {
            auto& g = grad_of(table);
            for (std::size_t i = 0; i < ids.size(); ++i)
                g.row(ids[i]) += n.grad.row(static_cast<Eigen::Index>(i));
        });
    }

    /// Row-wise softmax; when causal, entry (i, j) with j > i is masked out.
    Ref softmax_rows(Ref a, bool causal) {
        const auto& x = value(a);
        MatX<Scalar> out(x.rows(), x.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const Eigen::Index limit = causal ? std::min(i + 1, x.cols()) : x.cols();
            Scalar mx = x(i, 0);
            for (Eigen::Index j = 1; j < limit; ++j) mx = std::max(mx, x(i, j));
            Scalar sum = 0;
            for (Eigen::Index j = 0; j < limit; ++j) {
                out(i, j) = std::exp(x(i, j) - mx);
                sum += out(i, j);
            }
            for (Eigen::Index j = 0; j < limit; ++j) out(i, j) /= sum;
            for (Eigen::Index j = limit; j < x.cols(); ++j) out(i, j) = 0;
        }
        return push(std::move(out), {a}, [this, a, causal](Node& n) {
            const auto& y = n.value;
            MatX<Scalar> dx(y.rows(), y.cols());
            for (Eigen::Index i = 0; i < y.rows(); ++i) {
                const Eigen::Index limit = causal ? std::min(i + 1, y.cols()) : y.cols();
                Scalar dot = 0;
                for (Eigen::Index j = 0; j < limit; ++j) dot += n.grad(i, j) * y(i, j);
                for (Eigen::Index j = 0; j < limit; ++j)
                    dx(i, j) = y(i, j) * (n.grad(i, j) - dot);
                for (Eigen::Index j = limit; j < y.cols(); ++j) dx(i, j) = 0;
            }
            add_grad(a, dx);
        });
    }

    /// Row-wise layer normalization with learned gain and bias (1 x cols).
    Ref layer_norm(Ref a, Ref gain, Ref bias, Scalar eps = Scalar(1e-5)) {
        const auto& x = value(a);
        const Eigen::Index d = x.cols();
        MatX<Scalar> xhat(x.rows(), d);
        MatX<Scalar> inv_std(x.rows(), 1);
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const Scalar mean = x.row(i).mean();
            const Scalar var = (x.row(i).array() - mean).square().sum() / static_cast<Scalar>(d);
            inv_std(i, 0) = Scalar(1) / std::sqrt(var + eps);
            xhat.row(i) = (x.row(i).array() - mean) * inv_std(i, 0);
        }
        MatX<Scalar> out =
            (xhat.array().rowwise() * value(gain).row(0).array()).rowwise() +
            value(bias).row(0).array();
        const Ref r = push(std::move(out), {a, gain, bias}, nullptr);
        auto xhat_copy = std::make_shared<MatX<Scalar>>(std::move(xhat));
        auto inv_copy = std::make_shared<MatX<Scalar>>(std::move(inv_std));
        nodes_[static_cast<std::size_t>(r)].backward = [this, a, gain, bias, xhat_copy,
                                                        inv_copy](Node& n) {
            const auto& xh = *xhat_copy;
            const Eigen::Index d = xh.cols();
            MatX<Scalar> dxhat =
                n.grad.array().rowwise() * value(gain).row(0).array();
            add_grad(gain, (n.grad.array() * xh.array()).colwise().sum().matrix());
            add_grad(bias, n.grad.colwise().sum());
            MatX<Scalar> dx(xh.rows(), d);
            for (Eigen::Index i = 0; i < xh.rows(); ++i) {
                const Scalar sum_d = dxhat.row(i).sum();
                const Scalar sum_dx = (dxhat.row(i).array() * xh.row(i).array()).sum();
                dx.row(i) = ((dxhat.row(i).array() - sum_d / static_cast<Scalar>(d) -
                              xh.row(i).array() * sum_dx / static_cast<Scalar>(d)) *
                             (*inv_copy)(i, 0))
                                .matrix();
            }
            add_grad(a, dx);
        };
        return r;
    }

    /// GELU, tanh approximation.
    Ref gelu(Ref a) {
        const auto& x = value(a);
        const Scalar c = Scalar(0.7978845608028654);  // sqrt(2/pi)
        MatX<Scalar> out = x.unaryExpr([c](Scalar v) {
            return Scalar(0.5) * v * (Scalar(1) + std::tanh(c * (v + Scalar(0.044715) * v * v * v)));
        });
        return push(std::move(out), {a}, [this, a, c](Node& n) {
            const auto& x = value(a);
            MatX<Scalar> dx = x.binaryExpr(n.grad, [c](Scalar v, Scalar g) {
                const Scalar u = c * (v + Scalar(0.044715) * v * v * v);
                const Scalar t = std::tanh(u);
                const Scalar du = c * (Scalar(1) + Scalar(3) * Scalar(0.044715) * v * v);
                return g * (Scalar(0.5) * (Scalar(1) + t) +
                            Scalar(0.5) * v * (Scalar(1) - t * t) * du);
            });
            add_grad(a, dx);
        });
    }

    /// Column vector (1 x d) holding the mean of all rows.
    Ref mean_rows(Ref a) {
        const auto& x = value(a);
        MatX<Scalar> out = x.colwise().mean();
        return push(std::move(out), {a}, [this, a](Node& n) {
            const auto& x = value(a);
            const Scalar inv = Scalar(1) / static_cast<Scalar>(x.rows());
            add_grad(a, (n.grad * inv).replicate(x.rows(), 1));
        });
    }

    /// Value pass-through that blocks gradient flow.
    Ref detach(Ref a) { return push(value(a), {}, nullptr); }

    /// Mean token-level cross entropy of row-wise logits against targets at
    /// masked positions. Returns a 1x1 node.
    Ref cross_entropy(Ref logits, const std::vector<int>& targets,
                      const std::vector<bool>& mask) {
        const auto& z = value(logits);
        if (static_cast<Eigen::Index>(targets.size()) != z.rows())
            throw std::invalid_argument("cross_entropy: target/logit length mismatch");
        auto probs = std::make_shared<MatX<Scalar>>(z.rows(), z.cols());
        Scalar total = 0;
        int count = 0;
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            const Scalar mx = z.row(i).maxCoeff();
            Eigen::Array<Scalar, 1, Eigen::Dynamic> e = (z.row(i).array() - mx).exp();
            const Scalar sum = e.sum();
            probs->row(i) = (e / sum).matrix();
            if (mask[static_cast<std::size_t>(i)]) {
                total -= std::log(std::max((*probs)(i, targets[static_cast<std::size_t>(i)]),
                                           std::numeric_limits<Scalar>::min()));
                ++count;
            }
        }
        if (count == 0) throw std::invalid_argument("cross_entropy: empty target mask");
        MatX<Scalar> out(1, 1);
        out(0, 0) = total / static_cast<Scalar>(count);
        const Ref r = push(std::move(out), {logits}, nullptr);
        nodes_[static_cast<std::size_t>(r)].backward = [this, logits, targets, mask, probs,
                                                        count](Node& n) {
            const Scalar g = n.grad(0, 0) / static_cast<Scalar>(count);
            MatX<Scalar> dz = MatX<Scalar>::Zero(probs->rows(), probs->cols());
            for (Eigen::Index i = 0; i < probs->rows(); ++i) {
                if (!mask[static_cast<std::size_t>(i)]) continue;
                dz.row(i) = probs->row(i) * g;
                dz(i, targets[static_cast<std::size_t>(i)]) -= g;
            }
            add_grad(logits, dz);
        };
        return r;
    }

    /// Seeds d(out)/d(out) = 1 and propagates to parameters.
    void backward(Ref out) {
        auto& o = nodes_[static_cast<std::size_t>(out)];
        if (value(out).size() != 1) throw std::invalid_argument("backward: output must be scalar");
        o.grad = MatX<Scalar>::Ones(1, 1);
        for (int i = out; i >= 0; --i) {
            auto& n = nodes_[static_cast<std::size_t>(i)];
            if (n.backward && n.grad.size() > 0) n.backward(n);
            if (accumulate_into_params_ && n.bound_param && n.grad.size() > 0)
                n.bound_param->grad += n.grad;
        }
    }

    /// Adds this tape's parameter gradients into `sink` (post-backward).
    void export_param_grads(std::map<Parameter<Scalar>*, MatX<Scalar>>& sink) const {
        for (const auto& n : nodes_) {
            if (!n.bound_param || n.grad.size() == 0) continue;
            auto it = sink.find(n.bound_param);
            if (it == sink.end())
                sink.emplace(n.bound_param, n.grad);
            else
                it->second += n.grad;
        }
    }

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        MatX<Scalar> value;
        const MatX<Scalar>* external = nullptr;
        MatX<Scalar> grad;
        std::function<void(Node&)> backward;
        Parameter<Scalar>* bound_param = nullptr;
    };

    MatX<Scalar>& grad_of(Ref r) {
        auto& n = nodes_[static_cast<std::size_t>(r)];
        if (n.grad.size() == 0) {
            const auto& v = n.external ? *n.external : n.value;
            n.grad = MatX<Scalar>::Zero(v.rows(), v.cols());
        }
        return n.grad;
    }

    void add_grad(Ref r, const MatX<Scalar>& g) { grad_of(r) += g; }

    Ref push(MatX<Scalar> value, std::vector<Ref> parents,
             std::function<void(Node&)> backward, bool needs_grad_storage = false) {
        Node n;
        n.value = std::move(value);
        n.backward = std::move(backward);
        if (needs_grad_storage) n.grad = MatX<Scalar>::Zero(n.value.rows(), n.value.cols());
        (void)parents;
        nodes_.push_back(std::move(n));
        return static_cast<Ref>(nodes_.size()) - 1;
    }

    std::vector<Node> nodes_;
    bool accumulate_into_params_ = true;
};

}  // namespace mvsg::model
