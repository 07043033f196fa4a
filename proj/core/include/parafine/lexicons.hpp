#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "parafine/text.hpp"

namespace parafine {

// Resolution order for the bundled data directory: PARAFINE_DATA_DIR
// environment variable, the compile-time default, then ./data.
std::string default_data_dir();

// Word lists and gazetteers backing extraction and the synthetic corpus.
// Loaded once, immutable afterwards; safe to share across threads.
struct Lexicons {
    std::unordered_set<std::string> frequent;       // lowercase; membership defines "not sophisticated"
    std::unordered_map<std::string, double> aoa;    // lowercase -> years
    std::unordered_set<std::string> stopwords;
    std::unordered_set<std::string> subordinators;
    std::unordered_map<std::string, Pos> pos;
    std::unordered_set<std::string> gpe;            // space-joined surface forms, case-sensitive
    int gpe_max_tokens = 1;
    std::unordered_set<std::string> norp;
    std::unordered_set<std::string> law_markers;
    std::unordered_set<std::string> money_units;
    std::unordered_set<std::string> ordinals;
    std::vector<std::pair<std::string, std::string>> synonyms;  // interchangeable, same POS
    struct VerbForms {
        std::string past;
        std::string third;
        std::string ing;
    };
    std::unordered_map<std::string, VerbForms> verb_forms;  // base -> inflections

    static Lexicons load(const std::string& dir);

    // Cached load from default_data_dir().
    static const Lexicons& bundled();
};

}  // namespace parafine
