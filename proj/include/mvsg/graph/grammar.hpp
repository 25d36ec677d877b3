#pragma once

#include <string>
#include <vector>

#include "mvsg/graph/types.hpp"

namespace mvsg::graph {

/// Result of parsing a triplet string. Malformed ';'-segments (anything
/// without exactly two ',' separators) are skipped and counted.
struct ParseResult {
    SceneGraph graph;
    int malformed = 0;
    std::vector<std::string> malformed_segments;
};

/// Renders g as "sub,obj,pred;sub,obj,pred;..." in canonical lexicographic
/// order. The empty graph renders as the literal "none".
std::string serialize(const SceneGraph& g);

/// Inverse of serialize. Total over strings: tolerates non-canonical order
/// and duplicates, keeps unknown names verbatim, skips empty segments, and
/// treats the whole-string literal "none" as the empty graph.
ParseResult parse(const std::string& text);

}  // namespace mvsg::graph
