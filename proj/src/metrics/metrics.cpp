#include "mvsg/metrics/metrics.hpp"

#include <algorithm>
#include <set>

namespace mvsg::metrics {

namespace {

void finish(long tp, long fp, long fn, double& precision, double& recall, double& f1) {
    precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    f1 = precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

}  // namespace

MacroF1Result macro_f1(const std::vector<graph::SceneGraph>& predictions,
                       const std::vector<graph::SceneGraph>& ground_truths) {
    if (predictions.size() != ground_truths.size())
        throw LengthMismatch("macro_f1: " + std::to_string(predictions.size()) +
                             " predictions vs " + std::to_string(ground_truths.size()) +
                             " ground truths");

    std::set<std::string> gt_predicates;
    for (const auto& g : ground_truths)
        for (const auto& t : g) gt_predicates.insert(t.predicate);

    std::map<std::string, PredicateScore> scores;
    for (const auto& p : gt_predicates) scores[p].predicate = p;
    std::map<std::string, long> outside;

    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto& pred = predictions[i];
        const auto& gt = ground_truths[i];
        for (const auto& t : gt) {
            if (pred.contains(t))
                ++scores[t.predicate].tp;
            else
                ++scores[t.predicate].fn;
        }
        for (const auto& t : pred) {
            if (gt.contains(t)) continue;
            if (gt_predicates.count(t.predicate))
                ++scores[t.predicate].fp;
            else
                ++outside[t.predicate];
        }
    }

    MacroF1Result res;
    res.fp_outside_gt = std::move(outside);
    double sum = 0.0;
    for (auto& [name, s] : scores) {
        finish(s.tp, s.fp, s.fn, s.precision, s.recall, s.f1);
        sum += s.f1;
        res.per_predicate.push_back(s);
    }
    res.macro_f1 = scores.empty() ? 0.0 : sum / static_cast<double>(scores.size());
    return res;
}

double temporal_consistency(const std::vector<graph::SceneGraph>& sequence) {
    if (sequence.size() < 2)
        throw TooShort("temporal_consistency needs at least two graphs, got " +
                       std::to_string(sequence.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
        const auto& a = sequence[i];
        const auto& b = sequence[i + 1];
        if (a.empty() && b.empty()) {
            sum += 1.0;
            continue;
        }
        long inter = 0;
        for (const auto& t : a)
            if (b.contains(t)) ++inter;
        const long uni = static_cast<long>(a.size() + b.size()) - inter;
        sum += static_cast<double>(inter) / static_cast<double>(uni);
    }
    return sum / static_cast<double>(sequence.size() - 1);
}

RoleF1Result role_f1(const std::vector<graph::SceneGraph>& predictions,
                     const std::vector<graph::SceneGraph>& ground_truths,
                     const std::vector<std::string>& roles) {
    if (predictions.size() != ground_truths.size())
        throw LengthMismatch("role_f1: aligned lists required");

    auto present = [](const graph::SceneGraph& g, const std::string& role) {
        for (const auto& t : g)
            if (t.subject == role || t.object == role) return true;
        return false;
    };

    RoleF1Result res;
    double sum = 0.0;
    for (const auto& role : roles) {
        RoleScore s;
        s.role = role;
        for (std::size_t i = 0; i < predictions.size(); ++i) {
            const bool in_pred = present(predictions[i], role);
            const bool in_gt = present(ground_truths[i], role);
            if (in_pred && in_gt) ++s.tp;
            else if (in_pred && !in_gt) ++s.fp;
            else if (!in_pred && in_gt) ++s.fn;
        }
        finish(s.tp, s.fp, s.fn, s.precision, s.recall, s.f1);
        sum += s.f1;
        res.per_role.push_back(s);
    }
    res.macro_f1 = roles.empty() ? 0.0 : sum / static_cast<double>(roles.size());
    return res;
}

}  // namespace mvsg::metrics
