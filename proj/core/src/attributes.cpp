#include "parafine/attributes.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "parafine/lexicons.hpp"

namespace parafine {
namespace {

constexpr AttrGroup lex = AttrGroup::lexical;
constexpr AttrGroup syn = AttrGroup::syntactic;
constexpr AttrGroup dis = AttrGroup::discourse;

const std::vector<AttributeSpec> kRegistry = {
    {0, "# unique sophisticated words", lex, "count", false},
    {1, "# unique lexical words", lex, "count", false},
    {2, "# unique sophisticated lexical words", lex, "count", false},
    {3, "# total words", lex, "count", false},
    {4, "# total sophisticated words", lex, "count", false},
    {5, "lexical sophistication (unique)", lex, "ratio", false},
    {6, "verb sophistication", lex, "ratio", false},
    {7, "ratio of unique words", lex, "ratio", false},
    {8, "ratio of unique verbs", lex, "ratio", false},
    {9, "ratio of unique adjectives", lex, "ratio", false},
    {10, "ratio of unique adverbs", lex, "ratio", false},
    {11, "# dependent clauses", syn, "count", false},
    {12, "# clauses", syn, "count", false},
    {13, "# t-units", syn, "count", false},
    {14, "# complex t-units", syn, "count", false},
    {15, "# complex nominals", syn, "count", false},
    {16, "# stop words", lex, "count", false},
    {17, "# sentences", syn, "count", false},
    {18, "# characters", lex, "count", false},
    {19, "average words per sentence", syn, "words", false},
    {20, "average characters per sentence", syn, "characters", false},
    {21, "average characters per word", lex, "characters", false},
    {22, "average syllables per sentence", syn, "syllables", false},
    {23, "total age of acquisition of words", lex, "years", false},
    {24, "# named entities norp", dis, "count", false},
    {25, "# named entities gpe", dis, "count", false},
    {26, "# named entities law", dis, "count", false},
    {27, "# named entities money", dis, "count", false},
    {28, "# named entities ordinal", dis, "count", false},
    {29, "# coordinating conjunctions", syn, "count", false},
    {30, "# nouns", lex, "count", false},
    {31, "# numerals", lex, "count", false},
    {32, "# proper nouns", lex, "count", false},
    {33, "# subordinating conjunctions", syn, "count", false},
    {34, "automated readability index", syn, "grade", false},
    {35, "reading time for average readers", lex, "seconds", false},
    {36, "# verbs", lex, "count", true},
    {37, "# adjectives", lex, "count", true},
    {38, "# adverbs", lex, "count", true},
    {39, "# unique words", lex, "count", true},
};

bool is_lexical_pos(Pos pos) {
    return pos == Pos::noun || pos == Pos::propn || pos == Pos::verb || pos == Pos::adj ||
           pos == Pos::adv;
}

bool ends_with(const std::string& s, const char* suffix) {
    const std::string suf(suffix);
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

bool nominalizer_noun(const Token& tok) {
    if (tok.pos != Pos::noun) return false;
    for (const char* s : {"tion", "sion", "ment", "ness", "ance", "ence", "ship", "hood", "dom",
                          "ity"}) {
        if (ends_with(tok.lower, s)) return true;
    }
    return false;
}

bool digit_ordinal_surface(const std::string& lower) {
    if (lower.size() < 3) return false;
    const std::string tail = lower.substr(lower.size() - 2);
    if (tail != "st" && tail != "nd" && tail != "rd" && tail != "th") return false;
    for (std::size_t i = 0; i + 2 < lower.size(); ++i) {
        if (lower[i] < '0' || lower[i] > '9') return false;
    }
    return true;
}

bool relative_pronoun(const Token& tok) {
    return tok.pos == Pos::pron && (tok.lower == "who" || tok.lower == "whom" ||
                                    tok.lower == "whose" || tok.lower == "which");
}

bool in_verb_run(Pos pos) {
    return pos == Pos::aux || pos == Pos::verb || pos == Pos::adv || pos == Pos::part;
}

struct ClauseCounts {
    int clauses = 0;
    int dependent = 0;
    int t_units = 0;
    int complex_t_units = 0;
};

// A clause is a maximal AUX/VERB/ADV/PART token run containing a finite
// verb; a run whose first verb is introduced by "to" is an infinitive and
// does not count. A clause opened while a subordinator or relative
// pronoun is pending is dependent. T-units per sentence are the
// independent clauses (at least one when any clause exists); a T-unit is
// complex when a dependent clause is available to attach to it.
ClauseCounts count_clauses(const std::vector<Token>& sentence) {
    ClauseCounts out;
    bool pending_sub = false;
    std::size_t i = 0;
    while (i < sentence.size()) {
        const Token& tok = sentence[i];
        if (tok.pos == Pos::sconj || relative_pronoun(tok)) {
            pending_sub = true;
            ++i;
            continue;
        }
        if (!in_verb_run(tok.pos)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < sentence.size() && in_verb_run(sentence[j].pos)) ++j;
        std::size_t first_verb = j;
        for (std::size_t k = i; k < j; ++k) {
            if (sentence[k].pos == Pos::aux || sentence[k].pos == Pos::verb) {
                first_verb = k;
                break;
            }
        }
        if (first_verb < j) {
            const bool infinitive = first_verb > i && sentence[first_verb - 1].pos == Pos::part &&
                                    sentence[first_verb - 1].lower == "to";
            if (!infinitive) {
                ++out.clauses;
                if (pending_sub) {
                    ++out.dependent;
                    pending_sub = false;
                }
            }
        }
        i = j;
    }
    if (out.clauses > 0) {
        out.t_units = std::max(1, out.clauses - out.dependent);
        out.complex_t_units = std::min(out.t_units, out.dependent);
    }
    return out;
}

struct EntityCounts {
    int norp = 0;
    int gpe = 0;
    int law = 0;
    int money = 0;
    int ordinal = 0;
};

EntityCounts count_entities(const std::vector<Token>& sentence, const Lexicons& lexicons) {
    EntityCounts out;
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        const Token& tok = sentence[i];
        if (lexicons.law_markers.count(tok.surface) && i > 0 && sentence[i - 1].capitalized) {
            ++out.law;
        }
        if (lexicons.money_units.count(tok.lower) && i > 0 && sentence[i - 1].pos == Pos::num) {
            ++out.money;
        }
        if (lexicons.ordinals.count(tok.lower) || digit_ordinal_surface(tok.lower)) {
            ++out.ordinal;
        }
    }
    // Greedy longest GPE match, then single-token NORP; a token spent on
    // one entity is not considered for the other.
    std::size_t i = 0;
    while (i < sentence.size()) {
        bool matched = false;
        const int max_len =
            std::min<int>(lexicons.gpe_max_tokens, static_cast<int>(sentence.size() - i));
        for (int len = max_len; len >= 1; --len) {
            std::string joined = sentence[i].surface;
            for (int k = 1; k < len; ++k) joined += " " + sentence[i + static_cast<std::size_t>(k)].surface;
            if (lexicons.gpe.count(joined)) {
                ++out.gpe;
                i += static_cast<std::size_t>(len);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (lexicons.norp.count(sentence[i].surface)) ++out.norp;
        ++i;
    }
    return out;
}

}  // namespace

const char* attr_group_name(AttrGroup group) {
    switch (group) {
        case AttrGroup::lexical: return "lexical";
        case AttrGroup::syntactic: return "syntactic";
        case AttrGroup::discourse: return "discourse";
    }
    return "lexical";
}

const std::vector<AttributeSpec>& attribute_registry() {
    return kRegistry;
}

AttrGroup group_of(int attribute_id) {
    if (attribute_id < 0 || attribute_id >= kAttributeCount) {
        throw std::out_of_range("attribute id out of range: " + std::to_string(attribute_id));
    }
    return kRegistry[static_cast<std::size_t>(attribute_id)].group;
}

int attribute_id(const std::string& name) {
    for (const auto& spec : kRegistry) {
        if (name == spec.name) return spec.id;
    }
    throw std::out_of_range("no attribute named " + name);
}

std::string registry_json() {
    std::ostringstream os;
    os << "[";
    for (const auto& spec : kRegistry) {
        if (spec.id) os << ",";
        os << "{\"id\":" << spec.id << ",\"name\":\"" << spec.name << "\",\"group\":\""
           << attr_group_name(spec.group) << "\",\"unit\":\"" << spec.unit << "\",\"supplemental\":"
           << (spec.supplemental ? "true" : "false") << "}";
    }
    os << "]";
    return os.str();
}

std::vector<Real> extract_attributes(const TokenizedText& text, const Lexicons& lexicons) {
    if (text.word_count() == 0) {
        throw std::invalid_argument("unmeasurable text: no word tokens");
    }

    int total_words = 0;
    int total_chars = 0;
    int total_syllables = 0;
    int stop_words = 0;
    int sophisticated = 0;
    int nouns = 0;
    int propns = 0;
    int verbs = 0;
    int adjs = 0;
    int advs = 0;
    int numerals = 0;
    int cconjs = 0;
    int sconjs = 0;
    double aoa_total = 0.0;
    constexpr double kAoaDefault = 11.0;

    std::unordered_set<std::string> uniq;
    std::unordered_set<std::string> uniq_soph;
    std::unordered_set<std::string> uniq_lexical;
    std::unordered_set<std::string> uniq_soph_lexical;
    std::unordered_set<std::string> uniq_verbs;
    std::unordered_set<std::string> uniq_soph_verbs;
    std::unordered_set<std::string> uniq_adjs;
    std::unordered_set<std::string> uniq_advs;

    ClauseCounts clause_totals;
    EntityCounts entity_totals;
    int complex_nominals = 0;

    for (const auto& sentence : text.sentences) {
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            const Token& tok = sentence[i];
            ++total_words;
            total_chars += tok.chars;
            total_syllables += tok.syllables;
            uniq.insert(tok.lower);

            const bool soph = lexicons.frequent.count(tok.lower) == 0;
            if (soph) {
                ++sophisticated;
                uniq_soph.insert(tok.lower);
            }
            if (is_lexical_pos(tok.pos)) {
                uniq_lexical.insert(tok.lower);
                if (soph) uniq_soph_lexical.insert(tok.lower);
            }
            if (lexicons.stopwords.count(tok.lower)) ++stop_words;

            switch (tok.pos) {
                case Pos::noun: ++nouns; break;
                case Pos::propn: ++propns; break;
                case Pos::verb:
                    ++verbs;
                    uniq_verbs.insert(tok.lower);
                    if (soph) uniq_soph_verbs.insert(tok.lower);
                    break;
                case Pos::adj:
                    ++adjs;
                    uniq_adjs.insert(tok.lower);
                    break;
                case Pos::adv:
                    ++advs;
                    uniq_advs.insert(tok.lower);
                    break;
                case Pos::num: ++numerals; break;
                case Pos::cconj: ++cconjs; break;
                case Pos::sconj: ++sconjs; break;
                default: break;
            }

            const auto aoa_it = lexicons.aoa.find(tok.lower);
            aoa_total += aoa_it == lexicons.aoa.end() ? kAoaDefault : aoa_it->second;

            if (tok.pos == Pos::adj && i + 1 < sentence.size() &&
                (sentence[i + 1].pos == Pos::noun || sentence[i + 1].pos == Pos::propn)) {
                ++complex_nominals;
            }
            if (nominalizer_noun(tok)) ++complex_nominals;
        }
        const ClauseCounts cc = count_clauses(sentence);
        clause_totals.clauses += cc.clauses;
        clause_totals.dependent += cc.dependent;
        clause_totals.t_units += cc.t_units;
        clause_totals.complex_t_units += cc.complex_t_units;
        const EntityCounts ec = count_entities(sentence, lexicons);
        entity_totals.norp += ec.norp;
        entity_totals.gpe += ec.gpe;
        entity_totals.law += ec.law;
        entity_totals.money += ec.money;
        entity_totals.ordinal += ec.ordinal;
    }

    const int sentences = static_cast<int>(text.sentences.size());
    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
    const double words = total_words;
    const double chars = total_chars;

    std::vector<Real> v(kAttributeCount, 0.0);
    v[0] = static_cast<Real>(uniq_soph.size());
    v[1] = static_cast<Real>(uniq_lexical.size());
    v[2] = static_cast<Real>(uniq_soph_lexical.size());
    v[3] = words;
    v[4] = sophisticated;
    v[5] = ratio(static_cast<double>(uniq_soph_lexical.size()), static_cast<double>(uniq_lexical.size()));
    v[6] = ratio(static_cast<double>(uniq_soph_verbs.size()), verbs);
    v[7] = ratio(static_cast<double>(uniq.size()), words);
    v[8] = ratio(static_cast<double>(uniq_verbs.size()), verbs);
    v[9] = ratio(static_cast<double>(uniq_adjs.size()), adjs);
    v[10] = ratio(static_cast<double>(uniq_advs.size()), advs);
    v[11] = clause_totals.dependent;
    v[12] = clause_totals.clauses;
    v[13] = clause_totals.t_units;
    v[14] = clause_totals.complex_t_units;
    v[15] = complex_nominals;
    v[16] = stop_words;
    v[17] = sentences;
    v[18] = chars;
    v[19] = ratio(words, sentences);
    v[20] = ratio(chars, sentences);
    v[21] = ratio(chars, words);
    v[22] = ratio(total_syllables, sentences);
    v[23] = aoa_total;
    v[24] = entity_totals.norp;
    v[25] = entity_totals.gpe;
    v[26] = entity_totals.law;
    v[27] = entity_totals.money;
    v[28] = entity_totals.ordinal;
    v[29] = cconjs;
    v[30] = nouns;
    v[31] = numerals;
    v[32] = propns;
    v[33] = sconjs;
    v[34] = 4.71 * ratio(chars, words) + 0.5 * ratio(words, sentences) - 21.43;
    v[35] = words * (60.0 / 240.0);
    v[36] = verbs;
    v[37] = adjs;
    v[38] = advs;
    v[39] = static_cast<Real>(uniq.size());
    return v;
}

std::vector<Real> extract_attributes(const std::string& text, const Lexicons& lexicons) {
    return extract_attributes(tokenize(text, lexicons), lexicons);
}

}  // namespace parafine
