#pragma once

#include "mvsg/metrics/metrics.hpp"
#include "mvsg/world/config.hpp"

namespace mvsg::metrics {

struct UnknownPhaseConfig : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhaseRecognitionResult {
    std::vector<std::string> labels;
    double macro_f1 = 0.0;
};

/// Candidate phase per timepoint = maximal signature overlap with the graph
/// (ties break to the earlier phase), then one forward pass enforcing a
/// non-decreasing phase index. F1 is macro-averaged over phases present in
/// the ground-truth labels.
PhaseRecognitionResult phase_recognition(const std::vector<graph::SceneGraph>& graphs,
                                         const std::vector<std::string>& gt_phases,
                                         const std::vector<world::Phase>& phases);

}  // namespace mvsg::metrics
