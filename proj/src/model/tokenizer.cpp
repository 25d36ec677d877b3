#include "mvsg/model/tokenizer.hpp"

#include <sstream>
#include <stdexcept>

#include "mvsg/graph/symbols.hpp"

namespace mvsg::model {

Tokenizer::Tokenizer(std::vector<std::string> vocab) : vocab_(std::move(vocab)) {
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
        if (!index_.emplace(vocab_[i], static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate token '" + vocab_[i] + "'");
    }
    if (vocab_.size() > 512) throw std::invalid_argument("tokenizer vocabulary exceeds 512");
    pad_ = id(kPad);
    bos_ = id(kBos);
    eos_ = id(kEos);
    img_ = id(kImg);
    visdesc_ = id(kVisDesc);
    unk_ = id(kUnk);
}

Tokenizer Tokenizer::for_world(const world::WorldConfig& config) {
    std::vector<std::string> vocab = {kPad, kBos, kEos, kImg, kVisDesc, kUnk};
    for (const char* m : {"[img]", "[desc]", "[long]", "[short]", "[inst]", "[g]"})
        vocab.emplace_back(m);
    for (const char* p : {",", ";", ":", "none"}) vocab.emplace_back(p);

    auto add_unique = [&vocab](const std::string& t) {
        for (const auto& v : vocab)
            if (v == t) return;
        vocab.push_back(t);
    };

    for (const auto& s : graph::entity_symbols()) add_unique(s);
    for (const auto& s : graph::predicate_symbols()) add_unique(s);
    for (const auto& e : config.entities) add_unique(e.name);
    for (const auto& p : config.predicates) add_unique(p);
    for (const auto& c : world::color_names()) add_unique(c);
    for (const auto& s : world::size_catalog()) add_unique(s);
    for (const auto& s : world::shape_catalog()) add_unique(s);
    for (const auto& t : world::texture_catalog()) add_unique(t);
    for (const auto& t : world::object_type_catalog()) add_unique(t);
    for (const char* w : {"predict", "the", "current", "scene", "graph", "using", "descriptors"})
        add_unique(w);
    return Tokenizer(std::move(vocab));
}

int Tokenizer::id(const std::string& token) const {
    const auto it = index_.find(token);
    if (it == index_.end()) throw std::invalid_argument("unknown token '" + token + "'");
    return it->second;
}

const std::string& Tokenizer::token(int id) const {
    return vocab_.at(static_cast<std::size_t>(id));
}

std::vector<int> Tokenizer::encode_tokens(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
        const auto it = index_.find(t);
        ids.push_back(it == index_.end() ? unk_ : it->second);
    }
    return ids;
}

std::vector<int> Tokenizer::encode_string(const std::string& text) const {
    std::vector<std::string> tokens;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) {
            tokens.push_back(word);
            word.clear();
        }
    };
    for (char c : text) {
        if (c == ',' || c == ';' || c == ':') {
            flush();
            tokens.emplace_back(1, c);
        } else if (c == ' ') {
            flush();
        } else {
            word += c;
        }
    }
    flush();
    return encode_tokens(tokens);
}

std::string Tokenizer::decode(const std::vector<int>& ids) const {
    std::string out;
    bool prev_word = false;
    for (int i : ids) {
        if (i == pad_ || i == bos_ || i == eos_) continue;
        const std::string& t = token(i);
        const bool is_delim = t == "," || t == ";" || t == ":";
        if (!out.empty() && prev_word && !is_delim) out += ' ';
        out += t;
        prev_word = !is_delim;
    }
    return out;
}

}  // namespace mvsg::model
