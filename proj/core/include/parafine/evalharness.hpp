#pragma once

// Evaluation harness: attribute-error metrics against both endpoints of
// a pair, a composite score normalized across the systems of one
// report, group breakdowns, shuffled-target challenge sets, and the
// trivial baselines everything is compared against.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parafine/attributes.hpp"
#include "parafine/corpus.hpp"
#include "parafine/predictor.hpp"
#include "parafine/quality_control.hpp"
#include "parafine/rng.hpp"
#include "parafine/sem_equiv.hpp"
#include "parafine/standardize.hpp"
#include "parafine/tinyseq.hpp"

namespace parafine {

// How faithfully a generated token sequence preserves the source
// meaning, in [0,1]. An empty generation scores 0.
class SemanticScorer {
  public:
    virtual ~SemanticScorer() = default;
    virtual Real score(const std::vector<int>& source,
                       const std::vector<int>& generated) const = 0;
};

// Calibrated probability from the trained equivalence classifier.
class ClassifierScorer final : public SemanticScorer {
  public:
    explicit ClassifierScorer(const SemClassifier& classifier) : classifier_(classifier) {}
    Real score(const std::vector<int>& source, const std::vector<int>& generated) const override;

  private:
    const SemClassifier& classifier_;
};

// Token-overlap F1 between the two sequences; needs no trained model.
class UnigramF1Scorer final : public SemanticScorer {
  public:
    Real score(const std::vector<int>& source, const std::vector<int>& generated) const override;
};

enum class MseMode { macro, micro };
enum class EvalMode { standard, novel_target };
enum class SystemKind { copy, reference, uncontrolled, conditioned, conditioned_qc };

const char* system_name(SystemKind kind);
const char* eval_mode_name(EvalMode mode);

struct EvalConfig {
    MseMode mse_mode = MseMode::macro;
    // Squared error charged to every attribute of an output with no
    // measurable words.
    Real penalty = 9.0;
    int max_new = 48;
    std::uint64_t shuffle_seed = 0;  // target reassignment in challenge mode
    QcConfig qc;
};

// One test pair, encoded and standardized once up front.
struct EvalItem {
    std::string source_text;
    std::string target_text;
    std::vector<int> source;
    std::vector<int> target;
    std::vector<Real> source_attrs_std;
    std::vector<Real> target_attrs_std;
};

EvalItem make_eval_item(const ParaphrasePair& pair, const Vocabulary& vocab,
                        const Standardizer& standardizer, const Lexicons& lexicons);
std::vector<EvalItem> make_eval_items(const std::vector<ParaphrasePair>& pairs,
                                      const Vocabulary& vocab, const Standardizer& standardizer,
                                      const Lexicons& lexicons);

// Cyclic permutation with no fixed points, deterministic in the stream.
std::vector<std::size_t> derangement(std::size_t n, Rng rng);

// Challenge variant: every item keeps its texts but receives another
// item's target attribute vector.
std::vector<EvalItem> novel_target_shuffle(const std::vector<EvalItem>& items,
                                           std::uint64_t seed);

// Mean squared error of a text's standardized attributes against a
// reference vector; empty when the text has no measurable words.
std::optional<Real> mse_attrs(const std::string& generated_text,
                              const std::vector<Real>& reference_std,
                              const Standardizer& standardizer, const Lexicons& lexicons);

struct GroupMse {
    Real lexical = 0.0;
    Real syntactic = 0.0;
    Real discourse = 0.0;
};

// Mean of the per-attribute values within each registry group.
GroupMse group_breakdown(const std::vector<Real>& per_attribute_mse);

// Composite scores across the systems of one report: the average of
// the semantic score, the min-max normalized distance from the source
// attributes, and one minus the normalized distance from the target
// attributes. A degenerate span (all systems tied) fixes that term at
// one half.
std::vector<Real> overall_scores(const std::vector<Real>& semantic,
                                 const std::vector<Real>& mse_target,
                                 const std::vector<Real>& mse_source,
                                 bool* degenerate = nullptr);

struct SystemReport {
    std::string system;
    Real semantic = 0.0;
    Real mse_target = 0.0;
    Real mse_source = 0.0;
    Real overall = 0.0;
    Real lexical = 0.0;
    Real syntactic = 0.0;
    Real discourse = 0.0;
    int samples = 0;
    int unmeasurable = 0;
};

struct EvalReport {
    std::string mode;
    bool degenerate_normalization = false;
    std::vector<SystemReport> systems;

    std::string to_json() const;
    static EvalReport from_json(const std::string& text);
    // One row per system, composite columns first.
    std::string to_csv() const;
};

// Everything a run needs; models may stay null for the baseline-only
// systems, and a missing model for a requested system is an error.
struct EvalContext {
    const Vocabulary& vocab;
    const Standardizer& standardizer;
    const Lexicons& lexicons;
    const SemanticScorer& scorer;
    EvalConfig config;
    const GeneratorModel* conditioned = nullptr;
    const GeneratorModel* uncontrolled = nullptr;
    const PredictorModel* predictor = nullptr;
    const SemClassifier* classifier = nullptr;
};

EvalReport run_eval(const std::vector<SystemKind>& systems, const std::vector<EvalItem>& items,
                    EvalMode mode, const EvalContext& context);

}  // namespace parafine
