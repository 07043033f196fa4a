#pragma once

#include <string>
#include <vector>

namespace parafine {

struct Lexicons;

enum class Pos {
    noun,
    propn,
    verb,
    aux,
    adj,
    adv,
    pron,
    det,
    adp,
    cconj,
    sconj,
    num,
    part,
    intj,
    other,
};

const char* pos_name(Pos pos);
Pos pos_from_name(const std::string& name);

struct Token {
    std::string surface;
    std::string lower;
    Pos pos = Pos::other;
    int chars = 0;      // alphanumeric characters only
    int syllables = 0;
    bool capitalized = false;
    bool sentence_initial = false;
};

// Sentences split on runs of . ! ?; words are maximal alphanumeric or
// apostrophe runs with edge apostrophes stripped. Sentences with no word
// tokens are dropped; trailing text without a terminator still forms a
// sentence. Everything is byte-level ASCII-oriented: the corpus this
// system trains on is plain English.
struct TokenizedText {
    std::vector<std::vector<Token>> sentences;

    std::size_t word_count() const {
        std::size_t n = 0;
        for (const auto& s : sentences) n += s.size();
        return n;
    }
    bool empty() const { return sentences.empty(); }
};

int count_syllables(const std::string& word);

// Deterministic segmentation + tagging. Tag precedence: digit forms,
// the "that"/"to" context rules, lexicon lookup, capitalized mid-sentence
// as proper noun, suffix rules, noun fallback.
TokenizedText tokenize(const std::string& text, const Lexicons& lexicons);

}  // namespace parafine
