#pragma once

#include <functional>

#include "mvsg/augment/benchmark.hpp"
#include "mvsg/metrics/metrics.hpp"

namespace mvsg::metrics {

struct BenchmarkResult {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    long tp = 0, fp = 0, fn = 0;
    bool precision_degenerate = false;  // no positive predictions at all
};

/// Produces the predicted symbol-space graph for one benchmark sample on
/// its positive or negative frames.
using BenchGenerator =
    std::function<graph::SceneGraph(const augment::BenchmarkSample&, bool positive)>;

/// Paired protocol: a target triplet predicted on the positive counts as a
/// true positive, missing there as a false negative, and predicted on the
/// negative as a false positive. Counts pool over samples.
BenchmarkResult benchmark_eval(const BenchGenerator& generate,
                               const std::vector<augment::BenchmarkSample>& samples);

}  // namespace mvsg::metrics
