#pragma once

#include <vector>

#include "mvsg/graph/types.hpp"

namespace mvsg::knowledge {

/// Condensed temporal context: every triplet once in first-appearance order
/// (long term) plus the verbatim graphs of the trailing window (short term).
struct ChangeLog {
    std::vector<graph::Triplet> long_term;
    std::vector<std::pair<int, graph::SceneGraph>> short_term;

    bool empty() const { return long_term.empty() && short_term.empty(); }
};

constexpr int kDefaultShortTermWindow = 5;

/// history is ordered by timepoint (index = t). Empty history gives empty logs.
ChangeLog build_change_log(const std::vector<graph::SceneGraph>& history,
                           int window = kDefaultShortTermWindow);

}  // namespace mvsg::knowledge
