#pragma once

// Ten short synthetic pairs with distinct sources, plus the vocabulary,
// standardizer, and teacher-forcing examples built over them. Small
// enough that a full training loop fits inside a unit test.

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "parafine/corpus.hpp"
#include "parafine/lexicons.hpp"
#include "parafine/standardize.hpp"
#include "parafine/tinyseq.hpp"

struct MemorizationFixture {
    std::vector<parafine::ParaphrasePair> pairs;
    parafine::Vocabulary vocab;
    parafine::Standardizer standardizer;
    std::vector<parafine::TrainExample> examples;
};

inline MemorizationFixture make_memorization_fixture() {
    using namespace parafine;
    const auto& lex = Lexicons::bundled();
    const auto pool = synth_corpus(200, 42, lex);
    const Vocabulary pool_vocab = Vocabulary::build(pool, lex);

    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    const auto cost = [&](std::size_t i) {
        return pool_vocab.encode(pool[i].source, lex).size() +
               pool_vocab.encode(pool[i].target, lex).size();
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cost(a) < cost(b); });

    MemorizationFixture fixture;
    std::set<std::string> seen;
    for (const std::size_t i : order) {
        if (!seen.insert(pool[i].source).second) continue;
        fixture.pairs.push_back(pool[i]);
        if (fixture.pairs.size() == 10) break;
    }

    fixture.vocab = Vocabulary::build(fixture.pairs, lex);
    std::vector<std::vector<Real>> rows;
    for (const auto& p : fixture.pairs) {
        rows.push_back(p.source_attrs);
        rows.push_back(p.target_attrs);
    }
    fixture.standardizer = parafine::Standardizer::fit(rows);
    for (const auto& p : fixture.pairs) {
        fixture.examples.push_back({fixture.vocab.encode(p.source, lex),
                                    fixture.vocab.encode(p.target, lex),
                                    fixture.standardizer.apply(p.target_attrs)});
    }
    return fixture;
}

inline parafine::GeneratorConfig memorization_config(const MemorizationFixture& fixture,
                                                     std::uint64_t seed = 7) {
    parafine::GeneratorConfig config;
    config.vocab = fixture.vocab.size();
    config.seed = seed;
    return config;
}
