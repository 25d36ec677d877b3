#pragma once

#include <map>
#include <string>
#include <vector>

#include "mvsg/core/rng.hpp"
#include "mvsg/graph/types.hpp"

namespace mvsg::graph {

struct CapacityExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnmappedName : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The 26 entity symbols "A".."Z".
const std::vector<std::string>& entity_symbols();
/// The 24 Greek predicate symbols (alpha..omega, final sigma excluded).
const std::vector<std::string>& predicate_symbols();

/// Per-sample bijective renaming of entities and predicates into the
/// symbol alphabets.
struct SymbolMap {
    std::map<std::string, std::string> entity_map;
    std::map<std::string, std::string> predicate_map;

    SymbolMap inverse() const;
    const std::string& map_entity(const std::string& name) const;
    const std::string& map_predicate(const std::string& name) const;
};

/// Uniformly samples symbols for every catalog name. Deterministic per rng
/// state. Throws CapacityExceeded if the vocabulary outgrows the alphabets.
SymbolMap sample_symbol_map(const Vocabulary& vocab, Rng& rng);

/// Component-wise application of the bijections.
SceneGraph remap(const SceneGraph& g, const SymbolMap& map);

}  // namespace mvsg::graph
