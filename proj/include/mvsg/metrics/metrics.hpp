#pragma once

#include <map>
#include <string>
#include <vector>

#include "mvsg/graph/types.hpp"

namespace mvsg::metrics {

struct LengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PredicateScore {
    std::string predicate;
    long tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct MacroF1Result {
    double macro_f1 = 0.0;
    std::vector<PredicateScore> per_predicate;  // predicates present in GT, sorted
    std::map<std::string, long> fp_outside_gt;  // predictions with predicates absent from GT

    const PredicateScore* find(const std::string& predicate) const {
        for (const auto& s : per_predicate)
            if (s.predicate == predicate) return &s;
        return nullptr;
    }
};

/// Exact-match triplet scoring pooled per predicate across timepoints;
/// macro-F1 averages F1 over predicates occurring in the ground truth.
MacroF1Result macro_f1(const std::vector<graph::SceneGraph>& predictions,
                       const std::vector<graph::SceneGraph>& ground_truths);

/// Mean Jaccard similarity of consecutive graphs (both-empty pairs score 1).
double temporal_consistency(const std::vector<graph::SceneGraph>& sequence);

struct RoleScore {
    std::string role;
    long tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct RoleF1Result {
    double macro_f1 = 0.0;
    std::vector<RoleScore> per_role;
};

/// A role is present at a timepoint iff its entity name appears in at least
/// one triplet; presence is scored per role and macro-averaged over `roles`.
RoleF1Result role_f1(const std::vector<graph::SceneGraph>& predictions,
                     const std::vector<graph::SceneGraph>& ground_truths,
                     const std::vector<std::string>& roles);

}  // namespace mvsg::metrics
