#include "mvsg/metrics/benchmark_eval.hpp"

namespace mvsg::metrics {

BenchmarkResult benchmark_eval(const BenchGenerator& generate,
                               const std::vector<augment::BenchmarkSample>& samples) {
    BenchmarkResult res;
    for (const auto& sample : samples) {
        const graph::SceneGraph targets = graph::remap(sample.target_triplets, sample.symbol_map);
        const graph::SceneGraph on_pos = generate(sample, true);
        const graph::SceneGraph on_neg = generate(sample, false);
        for (const auto& t : targets) {
            if (on_pos.contains(t))
                ++res.tp;
            else
                ++res.fn;
            if (on_neg.contains(t)) ++res.fp;
        }
    }
    res.precision_degenerate = res.tp + res.fp == 0;
    res.precision = res.precision_degenerate
                        ? 0.0
                        : static_cast<double>(res.tp) / static_cast<double>(res.tp + res.fp);
    res.recall = res.tp + res.fn > 0
                     ? static_cast<double>(res.tp) / static_cast<double>(res.tp + res.fn)
                     : 0.0;
    res.f1 = res.precision + res.recall > 0
                 ? 2.0 * res.precision * res.recall / (res.precision + res.recall)
                 : 0.0;
    return res;
}

}  // namespace mvsg::metrics
