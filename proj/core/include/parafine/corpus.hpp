#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parafine/tensor.hpp"

namespace parafine {

struct Lexicons;

// One training example: a sentence pair with the raw attribute vectors of
// both sides. Extraction is canonical: stored vectors always equal
// extract_attributes of their text.
struct ParaphrasePair {
    std::string source;
    std::string target;
    std::vector<Real> source_attrs;
    std::vector<Real> target_attrs;
};

ParaphrasePair make_pair(std::string source, std::string target, const Lexicons& lexicons);

// Throws when texts are empty, vectors have the wrong length, or a vector
// strays from extraction by more than 1e-9.
void validate_pair(const ParaphrasePair& pair, const Lexicons& lexicons);

struct LoadedCorpus {
    std::vector<ParaphrasePair> pairs;
    std::vector<std::string> warnings;  // stored attributes off extraction by > 1e-6
};

// JSONL, one object per line: {"source", "target", optional "l_s", "l_t"}.
// Attributes are recomputed on load; stored vectors are only cross-checked.
// Malformed lines abort with the 1-based line number.
LoadedCorpus load_pairs(const std::string& path, const Lexicons& lexicons);
void save_pairs(const std::string& path, const std::vector<ParaphrasePair>& pairs);

// Deterministic synthetic paraphrase pairs. Each pair renders one meaning
// plan twice with toggled surface choices (active/passive, clause order,
// negation contraction, synonym picks, fronted place phrase), so the two
// sides always differ as strings while preserving the plan. Word banks are
// drawn from the bundled lexicons; a bank entry missing from the data is a
// packaging error and throws.
std::vector<ParaphrasePair> synth_corpus(int n, std::uint64_t seed, const Lexicons& lexicons);

// Per input pair emits (s,t), (t,s), (s,s), (t,t) in that order, attribute
// vectors permuted to match; exactly 4x the input when dedup is off. With
// dedup, repeated (source, target) strings keep the first occurrence, which
// makes augmentation idempotent.
std::vector<ParaphrasePair> augment(const std::vector<ParaphrasePair>& pairs, bool dedup = false);

struct CorpusSplit {
    std::vector<ParaphrasePair> train;
    std::vector<ParaphrasePair> validation;
    std::vector<ParaphrasePair> test;
    std::uint64_t seed = 0;
    // Positions in the pre-shuffle input list, in assignment order.
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> validation_indices;
    std::vector<std::size_t> test_indices;

    std::string manifest_json() const;
};

// Seeded shuffle then 80/10/10 partition. Augment each part afterwards, not
// before, so no text crosses split boundaries. Requires at least 10 pairs.
CorpusSplit split_corpus(const std::vector<ParaphrasePair>& pairs, std::uint64_t seed);

// Threshold test on one attribute of the registry.
struct AttributeThreshold {
    int attribute = 0;
    Real threshold = 0.0;
    bool above = true;  // true: value > threshold satisfies

    bool matches(const std::vector<Real>& attrs) const;
};

// Draws n vectors from the pool, accepting satisfying vectors with
// probability p_hi and the rest with p_lo. Requires a non-empty pool,
// 0 <= p_lo <= p_hi <= 1, and p_hi > 0; throws when acceptance stalls
// (e.g. p_lo = 0 and nothing satisfies the predicate).
std::vector<std::vector<Real>> biased_target_sample(const std::vector<std::vector<Real>>& pool,
                                                    const AttributeThreshold& predicate, Real p_hi,
                                                    Real p_lo, int n, std::uint64_t seed);

}  // namespace parafine
