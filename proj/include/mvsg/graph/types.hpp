#pragma once

#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvsg::graph {

struct InvalidVocabulary : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One subject/object/predicate relation. Components are plain strings so
/// that graphs parsed from open-vocabulary model output stay representable;
/// membership in a Vocabulary is a separate check.
struct Triplet {
    std::string subject;
    std::string object;
    std::string predicate;

    auto operator<=>(const Triplet&) const = default;
};

/// A set of triplets at one timepoint. std::set keeps iteration in canonical
/// lexicographic (subject, object, predicate) order and deduplicates.
class SceneGraph {
public:
    SceneGraph() = default;
    explicit SceneGraph(std::initializer_list<Triplet> ts) : triplets_(ts) {}

    void insert(Triplet t) { triplets_.insert(std::move(t)); }
    bool contains(const Triplet& t) const { return triplets_.count(t) > 0; }
    bool empty() const { return triplets_.empty(); }
    std::size_t size() const { return triplets_.size(); }

    auto begin() const { return triplets_.begin(); }
    auto end() const { return triplets_.end(); }

    bool operator==(const SceneGraph&) const = default;

    /// True if any triplet uses `predicate`.
    bool mentions_predicate(const std::string& predicate) const {
        for (const auto& t : triplets_)
            if (t.predicate == predicate) return true;
        return false;
    }

private:
    std::set<Triplet> triplets_;
};

/// Ordered entity and predicate name catalogs. Names must be nonempty,
/// duplicate-free, disjoint across the two lists and free of the grammar
/// delimiters ',' and ';'.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> entities, std::vector<std::string> predicates);

    const std::vector<std::string>& entities() const { return entities_; }
    const std::vector<std::string>& predicates() const { return predicates_; }

    bool has_entity(const std::string& name) const;
    bool has_predicate(const std::string& name) const;

    /// True if every triplet component of g is a catalog name.
    bool covers(const SceneGraph& g) const;

private:
    std::vector<std::string> entities_;
    std::vector<std::string> predicates_;
};

}  // namespace mvsg::graph
