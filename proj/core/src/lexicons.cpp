#include "parafine/lexicons.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace parafine {
namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::pair<std::string, std::string> split_tab(const std::string& line, const std::string& path) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
        throw std::runtime_error("malformed line in " + path + ": " + line);
    }
    return {line.substr(0, tab), line.substr(tab + 1)};
}

}  // namespace

std::string default_data_dir() {
    if (const char* env = std::getenv("PARAFINE_DATA_DIR"); env && *env) return env;
#ifdef PARAFINE_DEFAULT_DATA_DIR
    return PARAFINE_DEFAULT_DATA_DIR;
#else
    return "./data";
#endif
}

Lexicons Lexicons::load(const std::string& dir) {
    Lexicons lex;
    for (const auto& w : read_lines(dir + "/frequent_words.txt")) lex.frequent.insert(w);
    for (const auto& line : read_lines(dir + "/aoa.txt")) {
        auto [word, value] = split_tab(line, dir + "/aoa.txt");
        lex.aoa[word] = std::stod(value);
    }
    for (const auto& w : read_lines(dir + "/stopwords.txt")) lex.stopwords.insert(w);
    for (const auto& w : read_lines(dir + "/subordinators.txt")) lex.subordinators.insert(w);
    for (const auto& line : read_lines(dir + "/pos_lexicon.txt")) {
        auto [word, tag] = split_tab(line, dir + "/pos_lexicon.txt");
        lex.pos[word] = pos_from_name(tag);
    }
    for (const auto& entry : read_lines(dir + "/gazetteer_gpe.txt")) {
        lex.gpe.insert(entry);
        const int tokens = 1 + static_cast<int>(std::count(entry.begin(), entry.end(), ' '));
        lex.gpe_max_tokens = std::max(lex.gpe_max_tokens, tokens);
    }
    for (const auto& w : read_lines(dir + "/gazetteer_norp.txt")) lex.norp.insert(w);
    for (const auto& w : read_lines(dir + "/law_markers.txt")) lex.law_markers.insert(w);
    for (const auto& w : read_lines(dir + "/money_units.txt")) lex.money_units.insert(w);
    for (const auto& w : read_lines(dir + "/ordinals.txt")) lex.ordinals.insert(w);
    for (const auto& line : read_lines(dir + "/synonyms.txt")) {
        auto [a, b] = split_tab(line, dir + "/synonyms.txt");
        lex.synonyms.emplace_back(a, b);
    }
    for (const auto& line : read_lines(dir + "/verb_forms.txt")) {
        std::istringstream fields(line);
        std::string base, past, third, ing;
        if (!(fields >> base >> past >> third >> ing)) {
            throw std::runtime_error("malformed line in " + dir + "/verb_forms.txt: " + line);
        }
        lex.verb_forms[base] = {past, third, ing};
    }
    return lex;
}

const Lexicons& Lexicons::bundled() {
    static const Lexicons instance = Lexicons::load(default_data_dir());
    return instance;
}

}  // namespace parafine
