#include "mvsg/knowledge/prompt.hpp"

#include <algorithm>
#include <sstream>

namespace mvsg::knowledge {

std::vector<std::string> graph_tokens(const graph::SceneGraph& g) {
    if (g.empty()) return {"none"};
    std::vector<std::string> out;
    bool first = true;
    for (const auto& t : g) {
        if (!first) out.push_back(";");
        first = false;
        out.push_back(t.subject);
        out.push_back(",");
        out.push_back(t.object);
        out.push_back(",");
        out.push_back(t.predicate);
    }
    return out;
}

namespace {

void append_words(std::vector<std::string>& tokens, const std::string& text) {
    std::istringstream in(text);
    std::string word;
    while (in >> word) tokens.push_back(word);
}

void append_attr_tokens(std::vector<std::string>& tokens, const world::AttributeSet& a) {
    tokens.push_back(a.object_type);
    tokens.push_back(",");
    tokens.push_back(a.color);
    tokens.push_back(",");
    tokens.push_back(a.size);
    tokens.push_back(",");
    tokens.push_back(a.shape);
    tokens.push_back(",");
    tokens.push_back(a.texture);
}

}  // namespace

PromptSpec assemble_prompt(int n_image_tokens, std::vector<Descriptor> descriptors,
                           const std::optional<ChangeLog>& change_log,
                           const std::string& instruction,
                           const std::optional<std::set<std::string>>& required_symbols,
                           Rng* shuffle_rng) {
    if (required_symbols) {
        std::set<std::string> have;
        for (const auto& d : descriptors) have.insert(d.name_or_symbol);
        for (const auto& sym : *required_symbols)
            if (!have.count(sym))
                throw MissingDescriptor("target symbol '" + sym + "' has no descriptor");
    }

    if (shuffle_rng) {
        shuffle_rng->shuffle(descriptors);
    } else {
        std::sort(descriptors.begin(), descriptors.end(),
                  [](const Descriptor& a, const Descriptor& b) {
                      return a.name_or_symbol < b.name_or_symbol;
                  });
    }

    PromptSpec prompt;
    prompt.tokens.push_back("<bos>");
    prompt.tokens.push_back("[img]");
    for (int i = 0; i < n_image_tokens; ++i) prompt.tokens.push_back("<img>");

    if (!descriptors.empty()) {
        prompt.tokens.push_back("[desc]");
        for (const auto& d : descriptors) {
            prompt.tokens.push_back(d.name_or_symbol);
            prompt.tokens.push_back(":");
            if (d.modality == Modality::visual) {
                prompt.tokens.push_back("<visdesc>");
                prompt.visual_descriptors.push_back(d.sprite);
            } else {
                append_attr_tokens(prompt.tokens, d.attributes);
            }
            prompt.tokens.push_back(";");
        }
    }

    if (change_log) {
        prompt.tokens.push_back("[long]");
        if (change_log->long_term.empty()) {
            prompt.tokens.push_back("none");
        } else {
            bool first = true;
            for (const auto& t : change_log->long_term) {
                if (!first) prompt.tokens.push_back(";");
                first = false;
                prompt.tokens.push_back(t.subject);
                prompt.tokens.push_back(",");
                prompt.tokens.push_back(t.object);
                prompt.tokens.push_back(",");
                prompt.tokens.push_back(t.predicate);
            }
        }
        prompt.tokens.push_back("[short]");
        if (change_log->short_term.empty()) {
            prompt.tokens.push_back("none");
        } else {
            bool first = true;
            for (const auto& [t, g] : change_log->short_term) {
                if (!first) prompt.tokens.push_back("[g]");
                first = false;
                const auto toks = graph_tokens(g);
                prompt.tokens.insert(prompt.tokens.end(), toks.begin(), toks.end());
            }
        }
    }

    prompt.tokens.push_back("[inst]");
    append_words(prompt.tokens, instruction);
    return prompt;
}

std::string PromptSpec::dump() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

}  // namespace mvsg::knowledge
