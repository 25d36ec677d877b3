#include "mvsg/metrics/phase.hpp"

#include <set>

namespace mvsg::metrics {

PhaseRecognitionResult phase_recognition(const std::vector<graph::SceneGraph>& graphs,
                                         const std::vector<std::string>& gt_phases,
                                         const std::vector<world::Phase>& phases) {
    if (phases.empty()) throw UnknownPhaseConfig("no phase definitions");
    if (graphs.size() != gt_phases.size())
        throw LengthMismatch("phase_recognition: graphs and labels must align");

    std::vector<std::set<graph::Triplet>> signature_sets;
    for (const auto& p : phases) {
        std::set<graph::Triplet> sigs;
        for (const auto& s : p.signatures)
            sigs.insert(graph::Triplet{s.subject.name, s.object.name, s.predicate});
        signature_sets.push_back(std::move(sigs));
    }

    PhaseRecognitionResult res;
    std::size_t running = 0;  // monotone smoothing state
    for (std::size_t t = 0; t < graphs.size(); ++t) {
        std::size_t best = 0;
        long best_overlap = -1;
        for (std::size_t pi = 0; pi < phases.size(); ++pi) {
            long overlap = 0;
            for (const auto& sig : signature_sets[pi])
                if (graphs[t].contains(sig)) ++overlap;
            if (overlap > best_overlap) {  // ties keep the earlier phase
                best_overlap = overlap;
                best = pi;
            }
        }
        running = std::max(running, best);
        res.labels.push_back(phases[running].name);
    }

    std::set<std::string> gt_set(gt_phases.begin(), gt_phases.end());
    double sum = 0.0;
    for (const auto& phase : gt_set) {
        long tp = 0, fp = 0, fn = 0;
        for (std::size_t t = 0; t < gt_phases.size(); ++t) {
            const bool in_pred = res.labels[t] == phase;
            const bool in_gt = gt_phases[t] == phase;
            if (in_pred && in_gt) ++tp;
            else if (in_pred) ++fp;
            else if (in_gt) ++fn;
        }
        const double p = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        const double r = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        sum += p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
    }
    res.macro_f1 = gt_set.empty() ? 0.0 : sum / static_cast<double>(gt_set.size());
    return res;
}

}  // namespace mvsg::metrics
