#pragma once

#include <map>
#include <string>
#include <vector>

#include "mvsg/world/config.hpp"

namespace mvsg::model {

/// Atomic-token codec over the closed prompt/graph language: special and
/// marker tokens, grammar delimiters, symbols, catalog names, attribute and
/// instruction words. String encode/decode is exact on canonical triplet
/// grammar strings; prompts are assembled at the token level.
class Tokenizer {
public:
    static constexpr const char* kPad = "<pad>";
    static constexpr const char* kBos = "<bos>";
    static constexpr const char* kEos = "<eos>";
    static constexpr const char* kImg = "<img>";
    static constexpr const char* kVisDesc = "<visdesc>";
    static constexpr const char* kUnk = "<unk>";

    Tokenizer() = default;
    explicit Tokenizer(std::vector<std::string> vocab);

    /// Vocabulary covering a world's names, attributes, symbols and markers.
    static Tokenizer for_world(const world::WorldConfig& config);

    int id(const std::string& token) const;
    const std::string& token(int id) const;
    int size() const { return static_cast<int>(vocab_.size()); }
    const std::vector<std::string>& vocab() const { return vocab_; }

    int pad_id() const { return pad_; }
    int bos_id() const { return bos_; }
    int eos_id() const { return eos_; }
    int img_id() const { return img_; }
    int visdesc_id() const { return visdesc_; }
    int unk_id() const { return unk_; }

    /// Token-level encode; unknown tokens map to <unk>.
    std::vector<int> encode_tokens(const std::vector<std::string>& tokens) const;

    /// Lexes a triplet-grammar string (",", ";", ":" are single tokens,
    /// words split on spaces) and encodes it.
    std::vector<int> encode_string(const std::string& text) const;

    /// Inverse of encode_string on canonical grammar strings: delimiters
    /// join without spaces, consecutive words are space-separated.
    std::string decode(const std::vector<int>& ids) const;

private:
    std::vector<std::string> vocab_;
    std::map<std::string, int> index_;
    int pad_ = 0, bos_ = 0, eos_ = 0, img_ = 0, visdesc_ = 0, unk_ = 0;
};

}  // namespace mvsg::model
