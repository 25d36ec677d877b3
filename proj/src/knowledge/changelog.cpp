#include "mvsg/knowledge/changelog.hpp"

#include <set>

namespace mvsg::knowledge {

ChangeLog build_change_log(const std::vector<graph::SceneGraph>& history, int window) {
    ChangeLog log;
    std::set<graph::Triplet> seen;
    for (const auto& g : history)
        for (const auto& t : g)
            if (seen.insert(t).second) log.long_term.push_back(t);

    const int n = static_cast<int>(history.size());
    const int first = std::max(0, n - window);
    for (int t = first; t < n; ++t) log.short_term.emplace_back(t, history[static_cast<std::size_t>(t)]);
    return log;
}

}  // namespace mvsg::knowledge
