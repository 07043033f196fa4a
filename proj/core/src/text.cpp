#include "parafine/text.hpp"

#include <cctype>
#include <stdexcept>

#include "parafine/lexicons.hpp"

namespace parafine {
namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
}

bool is_terminator(char c) {
    return c == '.' || c == '!' || c == '?';
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (const char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

// 1st, 22nd, 3rd, 11th
bool digit_ordinal(const std::string& lower) {
    if (lower.size() < 3) return false;
    const std::string tail = lower.substr(lower.size() - 2);
    if (tail != "st" && tail != "nd" && tail != "rd" && tail != "th") return false;
    return all_digits(lower.substr(0, lower.size() - 2));
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Pos suffix_tag(const std::string& low) {
    for (const char* s : {"tion", "sion", "ment", "ness", "ance", "ence", "ship", "hood", "dom"}) {
        if (ends_with(low, s)) return Pos::noun;
    }
    if (ends_with(low, "ity")) return Pos::noun;
    if (ends_with(low, "ly")) return Pos::adv;
    if (low.size() >= 5 && (ends_with(low, "ing") || ends_with(low, "ed"))) return Pos::verb;
    for (const char* s : {"ize", "ise", "ify"}) {
        if (ends_with(low, s)) return Pos::verb;
    }
    for (const char* s : {"ous", "ful", "ive", "able", "ible", "ish", "less", "est"}) {
        if (ends_with(low, s)) return Pos::adj;
    }
    if (ends_with(low, "ic") || (low.size() >= 5 && ends_with(low, "al"))) return Pos::adj;
    return Pos::noun;
}

// Lexicon-only classification of the following token, used by the
// "that" and "to" context rules.
Pos lexicon_tag_of(const Lexicons& lex, const std::vector<Token>& sentence, std::size_t next) {
    if (next >= sentence.size()) return Pos::other;
    const auto it = lex.pos.find(sentence[next].lower);
    return it == lex.pos.end() ? Pos::other : it->second;
}

}  // namespace

const char* pos_name(Pos pos) {
    switch (pos) {
        case Pos::noun: return "NOUN";
        case Pos::propn: return "PROPN";
        case Pos::verb: return "VERB";
        case Pos::aux: return "AUX";
        case Pos::adj: return "ADJ";
        case Pos::adv: return "ADV";
        case Pos::pron: return "PRON";
        case Pos::det: return "DET";
        case Pos::adp: return "ADP";
        case Pos::cconj: return "CCONJ";
        case Pos::sconj: return "SCONJ";
        case Pos::num: return "NUM";
        case Pos::part: return "PART";
        case Pos::intj: return "INTJ";
        case Pos::other: return "X";
    }
    return "X";
}

Pos pos_from_name(const std::string& name) {
    for (const Pos p : {Pos::noun, Pos::propn, Pos::verb, Pos::aux, Pos::adj, Pos::adv, Pos::pron,
                        Pos::det, Pos::adp, Pos::cconj, Pos::sconj, Pos::num, Pos::part, Pos::intj,
                        Pos::other}) {
        if (name == pos_name(p)) return p;
    }
    throw std::invalid_argument("unknown POS tag: " + name);
}

int count_syllables(const std::string& word) {
    std::string letters;
    for (const char c : word) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            letters.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (letters.empty()) return 1;
    auto is_vowel = [](char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    int groups = 0;
    bool in_group = false;
    for (const char c : letters) {
        if (is_vowel(c)) {
            if (!in_group) ++groups;
            in_group = true;
        } else {
            in_group = false;
        }
    }
    if (groups > 1 && letters.back() == 'e' && !ends_with(letters, "le")) --groups;
    return groups > 0 ? groups : 1;
}

TokenizedText tokenize(const std::string& text, const Lexicons& lexicons) {
    TokenizedText out;
    std::vector<Token> current;

    auto flush_sentence = [&] {
        if (!current.empty()) {
            out.sentences.push_back(std::move(current));
            current.clear();
        }
    };

    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (is_word_char(c)) {
            std::size_t j = i;
            while (j < n && is_word_char(text[j])) ++j;
            std::string raw = text.substr(i, j - i);
            std::size_t begin = 0;
            std::size_t end = raw.size();
            while (begin < end && raw[begin] == '\'') ++begin;
            while (end > begin && raw[end - 1] == '\'') --end;
            std::string surface = raw.substr(begin, end - begin);
            bool has_alnum = false;
            for (const char ch : surface) {
                if (std::isalnum(static_cast<unsigned char>(ch))) {
                    has_alnum = true;
                    break;
                }
            }
            if (has_alnum) {
                Token tok;
                tok.surface = surface;
                tok.lower.reserve(surface.size());
                for (const char ch : surface) {
                    tok.lower.push_back(
                        static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
                }
                for (const char ch : surface) {
                    if (std::isalnum(static_cast<unsigned char>(ch))) ++tok.chars;
                }
                tok.syllables = count_syllables(surface);
                tok.capitalized = std::isupper(static_cast<unsigned char>(surface[0])) != 0;
                tok.sentence_initial = current.empty();
                current.push_back(std::move(tok));
            }
            i = j;
        } else if (is_terminator(c)) {
            while (i < n && is_terminator(text[i])) ++i;
            flush_sentence();
        } else {
            ++i;
        }
    }
    flush_sentence();

    for (auto& sentence : out.sentences) {
        for (std::size_t k = 0; k < sentence.size(); ++k) {
            Token& tok = sentence[k];
            if (all_digits(tok.lower) || digit_ordinal(tok.lower)) {
                tok.pos = Pos::num;
                continue;
            }
            if (tok.lower == "that") {
                const Pos next = lexicon_tag_of(lexicons, sentence, k + 1);
                tok.pos = (next == Pos::noun || next == Pos::adj) ? Pos::det : Pos::sconj;
                continue;
            }
            if (tok.lower == "to") {
                const Pos next = lexicon_tag_of(lexicons, sentence, k + 1);
                tok.pos = (next == Pos::verb || next == Pos::aux) ? Pos::part : Pos::adp;
                continue;
            }
            if (const auto it = lexicons.pos.find(tok.lower); it != lexicons.pos.end()) {
                tok.pos = it->second;
                continue;
            }
            if (tok.capitalized && !tok.sentence_initial) {
                tok.pos = Pos::propn;
                continue;
            }
            tok.pos = suffix_tag(tok.lower);
        }
    }
    return out;
}

}  // namespace parafine
