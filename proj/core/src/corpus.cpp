#include "parafine/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "parafine/attributes.hpp"
#include "parafine/lexicons.hpp"
#include "parafine/rng.hpp"

namespace parafine {

ParaphrasePair make_pair(std::string source, std::string target, const Lexicons& lexicons) {
    ParaphrasePair pair;
    pair.source = std::move(source);
    pair.target = std::move(target);
    pair.source_attrs = extract_attributes(pair.source, lexicons);
    pair.target_attrs = extract_attributes(pair.target, lexicons);
    return pair;
}

void validate_pair(const ParaphrasePair& pair, const Lexicons& lexicons) {
    if (pair.source.empty() || pair.target.empty()) {
        throw std::invalid_argument("pair has an empty text");
    }
    if (pair.source_attrs.size() != kAttributeCount || pair.target_attrs.size() != kAttributeCount) {
        throw std::invalid_argument("pair attribute vector length does not match the registry");
    }
    const auto check = [&](const std::string& text, const std::vector<Real>& stored,
                           const char* side) {
        const auto fresh = extract_attributes(text, lexicons);
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            if (std::abs(fresh[i] - stored[i]) > 1e-9) {
                throw std::invalid_argument(std::string("pair ") + side +
                                            " attributes disagree with extraction");
            }
        }
    };
    check(pair.source, pair.source_attrs, "source");
    check(pair.target, pair.target_attrs, "target");
}

namespace {

std::vector<Real> checked_vector(const nlohmann::json& obj, const char* key, int line) {
    const auto& arr = obj.at(key);
    if (!arr.is_array() || arr.size() != kAttributeCount) {
        throw std::runtime_error("line " + std::to_string(line) + ": " + key + " must be an array of " +
                                 std::to_string(kAttributeCount) + " numbers");
    }
    std::vector<Real> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) {
            throw std::runtime_error("line " + std::to_string(line) + ": " + key +
                                     " holds a non-numeric entry");
        }
        out.push_back(v.get<Real>());
    }
    return out;
}

Real max_abs_diff(const std::vector<Real>& a, const std::vector<Real>& b) {
    Real worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

LoadedCorpus load_pairs(const std::string& path, const Lexicons& lexicons) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pair file: " + path);
    LoadedCorpus corpus;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!obj.is_object() || !obj.contains("source") || !obj.contains("target") ||
            !obj["source"].is_string() || !obj["target"].is_string()) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected an object with string source and target");
        }
        const std::string source = obj["source"].get<std::string>();
        const std::string target = obj["target"].get<std::string>();
        if (source.empty() || target.empty()) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": empty source or target");
        }
        ParaphrasePair pair = make_pair(source, target, lexicons);
        const auto cross_check = [&](const char* key, const std::vector<Real>& fresh) {
            if (!obj.contains(key)) return;
            const auto stored = checked_vector(obj, key, line_no);
            const Real diff = max_abs_diff(stored, fresh);
            if (diff > 1e-6) {
                std::ostringstream msg;
                msg << "line " << line_no << ": stored " << key
                    << " differs from extraction (max diff " << diff << "), extraction kept";
                corpus.warnings.push_back(msg.str());
            }
        };
        cross_check("l_s", pair.source_attrs);
        cross_check("l_t", pair.target_attrs);
        corpus.pairs.push_back(std::move(pair));
    }
    return corpus;
}

void save_pairs(const std::string& path, const std::vector<ParaphrasePair>& pairs) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write pair file: " + path);
    for (const auto& pair : pairs) {
        nlohmann::json obj;
        obj["source"] = pair.source;
        obj["target"] = pair.target;
        obj["l_s"] = pair.source_attrs;
        obj["l_t"] = pair.target_attrs;
        out << obj.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Synthetic corpus

namespace {

struct SynthBanks {
    struct Verb {
        std::string base;
        std::string past;
        std::string participle;
    };

    std::vector<Verb> verbs;
    std::vector<std::string> subjects;
    std::vector<std::string> objects;
    std::vector<std::string> adjectives;
    std::vector<std::string> adverbs;
    std::vector<std::string> places;
    std::vector<std::string> norps;
    std::vector<std::string> clauses;
    std::vector<std::string> subordinators;
    std::vector<std::string> money_units;
    std::vector<std::string> durations;
    std::unordered_map<std::string, std::string> syn;
    const Lexicons* lex = nullptr;

    explicit SynthBanks(const Lexicons& lexicons) : lex(&lexicons) {
        const std::unordered_map<std::string, std::string> participles = {
            {"take", "taken"}, {"see", "seen"},     {"know", "known"},
            {"write", "written"}, {"give", "given"}, {"begin", "begun"},
        };
        for (const char* base :
             {"watch", "open", "close", "visit", "follow", "support", "describe", "discuss",
              "examine", "repair", "paint", "clean", "deliver", "collect", "measure", "carry",
              "mention", "study", "remember", "take", "see", "know", "write", "give", "buy",
              "sell", "teach", "begin", "start", "move", "push", "pull"}) {
            const auto it = lexicons.verb_forms.find(base);
            if (it == lexicons.verb_forms.end()) {
                throw std::logic_error(std::string("bundled verb forms lack: ") + base);
            }
            const auto po = participles.find(base);
            verbs.push_back({base, it->second.past,
                             po == participles.end() ? it->second.past : po->second});
        }
        subjects = {"committee", "teacher", "student", "driver",   "farmer", "doctor",
                    "manager",   "worker",  "lawyer",  "judge",    "artist", "writer",
                    "singer",    "soldier", "merchant", "minister", "mayor",  "guard",
                    "crowd",     "engineer", "nurse",   "pilot"};
        objects = {"plan",   "contract", "letter", "bridge",  "road",      "house",
                   "garden", "machine",  "engine", "novel",   "poem",      "speech",
                   "budget", "treaty",   "agreement", "package", "ticket", "market",
                   "journey", "kitchen", "window", "door",    "lesson",    "song"};
        adjectives = {"big",   "large",  "old",      "ancient", "angry",  "furious",
                      "quiet", "silent", "tired",    "weary",   "famous", "renowned",
                      "young", "tall",   "green",    "red",     "bright", "strong",
                      "heavy", "narrow", "modern",   "gentle",  "brave",  "calm"};
        adverbs = {"quickly", "slowly", "carefully", "quietly",
                   "suddenly", "loudly", "gently",   "eagerly"};
        places = {"Paris", "London", "Berlin", "Cairo",  "Boston",
                  "Madrid", "Rome",  "Vienna", "Athens", "New York"};
        norps = {"French", "German", "Spanish", "Italian", "Egyptian", "Greek"};
        clauses = {"the rain fell",       "the crowd waited",   "the market closed",
                   "the meeting ended",   "the prices dropped", "the weather changed",
                   "the train arrived",   "the talks continued", "the lights failed",
                   "the children slept"};
        subordinators = {"although", "because", "when", "while", "after", "before"};
        money_units = {"dollars", "euros"};
        durations = {"days", "weeks", "months", "hours"};

        for (const auto& place : places) {
            if (!lexicons.gpe.count(place)) {
                throw std::logic_error("bundled place gazetteer lacks: " + place);
            }
        }
        for (const auto& norp : norps) {
            if (!lexicons.norp.count(norp)) {
                throw std::logic_error("bundled group gazetteer lacks: " + norp);
            }
        }
        for (const auto& sub : subordinators) {
            if (!lexicons.subordinators.count(sub)) {
                throw std::logic_error("bundled subordinator list lacks: " + sub);
            }
        }
        for (const auto& unit : money_units) {
            if (!lexicons.money_units.count(unit)) {
                throw std::logic_error("bundled money units lack: " + unit);
            }
        }
        for (const auto& [a, b] : lexicons.synonyms) {
            syn[a] = b;
            syn[b] = a;
        }
    }

    // Synonym alternate for an adjective slot; identity when none exists.
    std::string alt_adj(const std::string& word) const {
        const auto it = syn.find(word);
        return it == syn.end() ? word : it->second;
    }

    // Verb alternates must stay inflectable, otherwise keep the original.
    std::string alt_verb(const std::string& base) const {
        const auto it = syn.find(base);
        if (it == syn.end() || !lex->verb_forms.count(it->second)) return base;
        return it->second;
    }
};

struct NounSlot {
    std::vector<int> adjs;  // indices into adjectives
    int noun = 0;
};

struct SentencePlan {
    NounSlot subject;
    NounSlot object;
    int verb = 0;
    bool negated = false;
    int adverb = -1;
    int norp = -1;       // adjective on the subject
    int place = -1;      // trailing "in X" phrase
    std::string amount;  // "" or e.g. "for 40 dollars"
    int subordinator = -1;
    int clause = -1;

    // Surface toggles; the target side flips a subset.
    bool contracted = false;
    bool sub_first = false;
    bool passive = false;
    bool pp_front = false;
    bool alt_words = false;
};

int pick_count(Rng& rng) {
    const auto roll = rng.below(100);
    if (roll < 55) return 0;
    if (roll < 85) return 1;
    return 2;
}

NounSlot pick_noun(Rng& rng, std::size_t noun_bank, std::size_t adj_bank) {
    NounSlot slot;
    slot.noun = static_cast<int>(rng.below(noun_bank));
    const int n_adjs = pick_count(rng);
    for (int i = 0; i < n_adjs; ++i) {
        int adj = static_cast<int>(rng.below(adj_bank));
        while (i == 1 && adj == slot.adjs[0]) adj = static_cast<int>(rng.below(adj_bank));
        slot.adjs.push_back(adj);
    }
    return slot;
}

SentencePlan plan_sentence(Rng& rng, const SynthBanks& banks, bool entity_pair) {
    SentencePlan plan;
    plan.subject = pick_noun(rng, banks.subjects.size(), banks.adjectives.size());
    plan.object = pick_noun(rng, banks.objects.size(), banks.adjectives.size());
    plan.verb = static_cast<int>(rng.below(banks.verbs.size()));
    plan.negated = rng.below(100) < 15;
    if (rng.below(100) < 35) plan.adverb = static_cast<int>(rng.below(banks.adverbs.size()));
    if (rng.below(100) < 40) {
        plan.subordinator = static_cast<int>(rng.below(banks.subordinators.size()));
        plan.clause = static_cast<int>(rng.below(banks.clauses.size()));
    }
    if (entity_pair) {
        if (rng.below(100) < 70) plan.place = static_cast<int>(rng.below(banks.places.size()));
        if (rng.below(100) < 50) plan.norp = static_cast<int>(rng.below(banks.norps.size()));
        if (rng.below(100) < 35) {
            const int amount = static_cast<int>(rng.below(19) + 2) * 10;
            plan.amount = "for " + std::to_string(amount) + " " +
                          banks.money_units[rng.below(banks.money_units.size())];
        }
    } else if (rng.below(100) < 12) {
        const int count = static_cast<int>(rng.below(28) + 2);
        plan.amount =
            "for " + std::to_string(count) + " " + banks.durations[rng.below(banks.durations.size())];
    }
    plan.contracted = plan.negated && rng.below(2) == 0;
    plan.sub_first = plan.subordinator >= 0 && rng.below(2) == 0;
    plan.pp_front = plan.place >= 0 && plan.subordinator < 0 && rng.below(4) == 0;
    return plan;
}

bool has_alternate(const SentencePlan& plan, const SynthBanks& banks) {
    if (banks.alt_verb(banks.verbs[static_cast<std::size_t>(plan.verb)].base) !=
        banks.verbs[static_cast<std::size_t>(plan.verb)].base) {
        return true;
    }
    for (const auto& slot : {plan.subject, plan.object}) {
        for (const int adj : slot.adjs) {
            const auto& word = banks.adjectives[static_cast<std::size_t>(adj)];
            if (banks.alt_adj(word) != word) return true;
        }
    }
    return false;
}

// Flips a random subset of the toggles this plan supports. Returns whether
// anything flipped.
bool flip_toggles(SentencePlan& plan, Rng& rng, const SynthBanks& banks) {
    bool flipped = false;
    if (plan.negated && rng.below(2) == 0) {
        plan.contracted = !plan.contracted;
        flipped = true;
    }
    if (plan.subordinator >= 0 && rng.below(2) == 0) {
        plan.sub_first = !plan.sub_first;
        flipped = true;
    }
    if (!plan.negated && rng.below(2) == 0) {
        plan.passive = !plan.passive;
        flipped = true;
    }
    if (plan.place >= 0 && plan.subordinator < 0 && rng.below(2) == 0) {
        plan.pp_front = !plan.pp_front;
        flipped = true;
    }
    if (has_alternate(plan, banks) && rng.below(2) == 0) {
        plan.alt_words = !plan.alt_words;
        flipped = true;
    }
    return flipped;
}

// Every plan supports at least one of these two.
void force_flip(SentencePlan& plan) {
    if (plan.negated) {
        plan.contracted = !plan.contracted;
    } else {
        plan.passive = !plan.passive;
    }
}

std::string render_np(const NounSlot& slot, int norp, bool alt, const SynthBanks& banks,
                      const std::vector<std::string>& noun_bank) {
    std::string out = "the";
    for (const int adj : slot.adjs) {
        const auto& word = banks.adjectives[static_cast<std::size_t>(adj)];
        out += " " + (alt ? banks.alt_adj(word) : word);
    }
    if (norp >= 0) out += " " + banks.norps[static_cast<std::size_t>(norp)];
    out += " " + noun_bank[static_cast<std::size_t>(slot.noun)];
    return out;
}

std::string render_sentence(const SentencePlan& plan, const SynthBanks& banks) {
    const auto& verb = banks.verbs[static_cast<std::size_t>(plan.verb)];
    std::string base = verb.base;
    std::string past = verb.past;
    std::string participle = verb.participle;
    if (plan.alt_words) {
        const std::string alt = banks.alt_verb(base);
        if (alt != base) {
            base = alt;
            const auto& forms = banks.lex->verb_forms.at(alt);
            past = forms.past;
            participle = forms.past;
        }
    }
    const std::string subj = render_np(plan.subject, plan.norp, plan.alt_words, banks, banks.subjects);
    const std::string obj = render_np(plan.object, -1, plan.alt_words, banks, banks.objects);

    std::string main;
    if (plan.passive) {
        main = obj + " was " + participle;
        if (plan.adverb >= 0) main += " " + banks.adverbs[static_cast<std::size_t>(plan.adverb)];
        main += " by " + subj;
    } else {
        main = subj + " ";
        if (plan.negated) {
            main += (plan.contracted ? "didn't " : "did not ") + base;
        } else {
            main += past;
        }
        main += " " + obj;
        if (plan.adverb >= 0) main += " " + banks.adverbs[static_cast<std::size_t>(plan.adverb)];
    }
    const std::string place =
        plan.place >= 0 ? "in " + banks.places[static_cast<std::size_t>(plan.place)] : "";
    if (!place.empty() && !plan.pp_front) main += " " + place;
    if (!plan.amount.empty()) main += " " + plan.amount;
    if (!place.empty() && plan.pp_front) main = place + " " + main;

    std::string sentence;
    if (plan.subordinator >= 0) {
        const std::string sub = banks.subordinators[static_cast<std::size_t>(plan.subordinator)] +
                                " " + banks.clauses[static_cast<std::size_t>(plan.clause)];
        sentence = plan.sub_first ? sub + ", " + main : main + " " + sub;
    } else {
        sentence = main;
    }
    sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
    return sentence + ".";
}

}  // namespace

std::vector<ParaphrasePair> synth_corpus(int n, std::uint64_t seed, const Lexicons& lexicons) {
    if (n < 1) throw std::invalid_argument("synth_corpus needs n >= 1");
    const SynthBanks banks(lexicons);
    Rng rng(seed);
    std::vector<ParaphrasePair> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const bool entity_pair = rng.below(100) < 18;
        const int n_sentences = static_cast<int>(rng.below(3)) + 1;
        std::vector<SentencePlan> plans;
        for (int s = 0; s < n_sentences; ++s) plans.push_back(plan_sentence(rng, banks, entity_pair));

        std::vector<SentencePlan> flipped = plans;
        bool any = false;
        for (auto& plan : flipped) any = flip_toggles(plan, rng, banks) || any;
        if (!any) force_flip(flipped[0]);

        std::string source;
        std::string target;
        for (int s = 0; s < n_sentences; ++s) {
            if (s > 0) {
                source += " ";
                target += " ";
            }
            source += render_sentence(plans[static_cast<std::size_t>(s)], banks);
            target += render_sentence(flipped[static_cast<std::size_t>(s)], banks);
        }
        out.push_back(make_pair(std::move(source), std::move(target), lexicons));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<ParaphrasePair> augment(const std::vector<ParaphrasePair>& pairs, bool dedup) {
    if (pairs.empty()) throw std::invalid_argument("augment needs a non-empty pair list");
    std::vector<ParaphrasePair> out;
    out.reserve(pairs.size() * 4);
    std::unordered_set<std::string> seen;
    const auto push = [&](ParaphrasePair pair) {
        if (dedup && !seen.insert(pair.source + '\x1f' + pair.target).second) return;
        out.push_back(std::move(pair));
    };
    for (const auto& p : pairs) {
        push(p);
        push({p.target, p.source, p.target_attrs, p.source_attrs});
        push({p.source, p.source, p.source_attrs, p.source_attrs});
        push({p.target, p.target, p.target_attrs, p.target_attrs});
    }
    return out;
}

CorpusSplit split_corpus(const std::vector<ParaphrasePair>& pairs, std::uint64_t seed) {
    if (pairs.size() < 10) {
        throw std::invalid_argument("split needs at least 10 pairs, got " +
                                    std::to_string(pairs.size()));
    }
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    const std::size_t n = pairs.size();
    const std::size_t n_train = n * 8 / 10;
    const std::size_t n_val = n / 10;

    CorpusSplit split;
    split.seed = seed;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        if (i < n_train) {
            split.train.push_back(pairs[src]);
            split.train_indices.push_back(src);
        } else if (i < n_train + n_val) {
            split.validation.push_back(pairs[src]);
            split.validation_indices.push_back(src);
        } else {
            split.test.push_back(pairs[src]);
            split.test_indices.push_back(src);
        }
    }
    return split;
}

std::string CorpusSplit::manifest_json() const {
    nlohmann::json doc;
    doc["seed"] = seed;
    doc["train"] = train_indices;
    doc["validation"] = validation_indices;
    doc["test"] = test_indices;
    return doc.dump();
}

bool AttributeThreshold::matches(const std::vector<Real>& attrs) const {
    if (attribute < 0 || static_cast<std::size_t>(attribute) >= attrs.size()) {
        throw std::out_of_range("predicate attribute " + std::to_string(attribute) +
                                " outside vector of size " + std::to_string(attrs.size()));
    }
    const Real v = attrs[static_cast<std::size_t>(attribute)];
    return above ? v > threshold : v < threshold;
}

std::vector<std::vector<Real>> biased_target_sample(const std::vector<std::vector<Real>>& pool,
                                                    const AttributeThreshold& predicate, Real p_hi,
                                                    Real p_lo, int n, std::uint64_t seed) {
    if (pool.empty()) throw std::invalid_argument("target sampling needs a non-empty pool");
    if (n < 0) throw std::invalid_argument("target sampling needs n >= 0");
    if (!(p_lo >= 0.0 && p_hi >= p_lo && p_hi <= 1.0)) {
        throw std::invalid_argument("need 0 <= p_lo <= p_hi <= 1");
    }
    if (p_hi <= 0.0) throw std::invalid_argument("both acceptance probabilities are zero");

    Rng rng(seed);
    std::vector<std::vector<Real>> out;
    out.reserve(static_cast<std::size_t>(n));
    long long attempts = 0;
    const long long cap = 1000 + 200LL * n;
    while (out.size() < static_cast<std::size_t>(n)) {
        if (++attempts > cap) {
            throw std::runtime_error("target sampling stalled after " + std::to_string(cap) +
                                     " attempts");
        }
        const auto& candidate = pool[rng.below(pool.size())];
        const Real accept = predicate.matches(candidate) ? p_hi : p_lo;
        if (rng.uniform() < accept) out.push_back(candidate);
    }
    return out;
}

}  // namespace parafine
