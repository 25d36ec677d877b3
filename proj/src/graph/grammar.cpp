#include "mvsg/graph/grammar.hpp"

#include <algorithm>

namespace mvsg::graph {

namespace {

const std::string kEmptyToken = "none";

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

std::string serialize(const SceneGraph& g) {
    if (g.empty()) return kEmptyToken;
    std::string out;
    bool first = true;
    for (const auto& t : g) {
        if (!first) out += ';';
        first = false;
        out += t.subject;
        out += ',';
        out += t.object;
        out += ',';
        out += t.predicate;
    }
    return out;
}

ParseResult parse(const std::string& text) {
    ParseResult res;
    if (text == kEmptyToken) return res;
    for (const auto& segment : split(text, ';')) {
        if (segment.empty()) continue;
        const auto fields = split(segment, ',');
        if (fields.size() != 3) {
            ++res.malformed;
            res.malformed_segments.push_back(segment);
            continue;
        }
        res.graph.insert(Triplet{fields[0], fields[1], fields[2]});
    }
    return res;
}

Vocabulary::Vocabulary(std::vector<std::string> entities, std::vector<std::string> predicates)
    : entities_(std::move(entities)), predicates_(std::move(predicates)) {
    auto check = [](const std::vector<std::string>& names, const char* which) {
        for (const auto& n : names) {
            if (n.empty())
                throw InvalidVocabulary(std::string(which) + ": empty name");
            if (n.find(',') != std::string::npos || n.find(';') != std::string::npos)
                throw InvalidVocabulary(std::string(which) + ": name '" + n +
                                        "' contains a grammar delimiter");
            if (std::count(names.begin(), names.end(), n) != 1)
                throw InvalidVocabulary(std::string(which) + ": duplicate name '" + n + "'");
        }
    };
    check(entities_, "entities");
    check(predicates_, "predicates");
    for (const auto& e : entities_)
        if (std::find(predicates_.begin(), predicates_.end(), e) != predicates_.end())
            throw InvalidVocabulary("name '" + e + "' is both an entity and a predicate");
}

bool Vocabulary::has_entity(const std::string& name) const {
    return std::find(entities_.begin(), entities_.end(), name) != entities_.end();
}

bool Vocabulary::has_predicate(const std::string& name) const {
    return std::find(predicates_.begin(), predicates_.end(), name) != predicates_.end();
}

bool Vocabulary::covers(const SceneGraph& g) const {
    for (const auto& t : g)
        if (!has_entity(t.subject) || !has_entity(t.object) || !has_predicate(t.predicate))
            return false;
    return true;
}

}  // namespace mvsg::graph
