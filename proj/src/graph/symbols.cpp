#include "mvsg/graph/symbols.hpp"

namespace mvsg::graph {

const std::vector<std::string>& entity_symbols() {
    static const std::vector<std::string> syms = [] {
        std::vector<std::string> v;
        for (char c = 'A'; c <= 'Z'; ++c) v.emplace_back(1, c);
        return v;
    }();
    return syms;
}

const std::vector<std::string>& predicate_symbols() {
    static const std::vector<std::string> syms = {
        "α", "β", "γ", "δ", "ε", "ζ", "η", "θ", "ι", "κ", "λ", "μ",
        "ν", "ξ", "ο", "π", "ρ", "σ", "τ", "υ", "φ", "χ", "ψ", "ω"};
    return syms;
}

SymbolMap SymbolMap::inverse() const {
    SymbolMap inv;
    for (const auto& [name, sym] : entity_map) inv.entity_map[sym] = name;
    for (const auto& [name, sym] : predicate_map) inv.predicate_map[sym] = name;
    return inv;
}

const std::string& SymbolMap::map_entity(const std::string& name) const {
    const auto it = entity_map.find(name);
    if (it == entity_map.end()) throw UnmappedName("no entity mapping for '" + name + "'");
    return it->second;
}

const std::string& SymbolMap::map_predicate(const std::string& name) const {
    const auto it = predicate_map.find(name);
    if (it == predicate_map.end()) throw UnmappedName("no predicate mapping for '" + name + "'");
    return it->second;
}

SymbolMap sample_symbol_map(const Vocabulary& vocab, Rng& rng) {
    const auto& ents = vocab.entities();
    const auto& preds = vocab.predicates();
    if (ents.size() > entity_symbols().size())
        throw CapacityExceeded("vocabulary has " + std::to_string(ents.size()) +
                               " entities, symbol alphabet has 26");
    if (preds.size() > predicate_symbols().size())
        throw CapacityExceeded("vocabulary has " + std::to_string(preds.size()) +
                               " predicates, symbol alphabet has 24");

    auto esyms = entity_symbols();
    auto psyms = predicate_symbols();
    rng.shuffle(esyms);
    rng.shuffle(psyms);

    SymbolMap map;
    for (std::size_t i = 0; i < ents.size(); ++i) map.entity_map[ents[i]] = esyms[i];
    for (std::size_t i = 0; i < preds.size(); ++i) map.predicate_map[preds[i]] = psyms[i];
    return map;
}

SceneGraph remap(const SceneGraph& g, const SymbolMap& map) {
    SceneGraph out;
    for (const auto& t : g)
        out.insert(Triplet{map.map_entity(t.subject), map.map_entity(t.object),
                           map.map_predicate(t.predicate)});
    return out;
}

}  // namespace mvsg::graph
