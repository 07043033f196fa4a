#pragma once

// Inference-time refinement: starting from the source embeddings, walk
// the attribute error downhill in embedding space, accepting only steps
// that also keep the regenerated text semantically equivalent to the
// source. Models stay frozen; each call owns its own state.

#include <optional>
#include <string>
#include <vector>

#include "parafine/predictor.hpp"
#include "parafine/sem_equiv.hpp"
#include "parafine/tensor.hpp"
#include "parafine/tinyseq.hpp"

namespace parafine {

struct QcConfig {
    Real eta0 = 1e3;       // first step size tried
    Real gamma = 2.25;     // growth per rejected candidate
    Real tau = 0.95;       // semantic acceptance threshold
    int patience = 4;      // candidates per search before giving up
    int max_iterations = 100;  // hard cap on accepted outer steps

    void validate() const;
    std::string to_json() const;
    static QcConfig from_json(const std::string& text);
};

// One candidate evaluation inside the search.
struct QcCandidate {
    Real loss = 0.0;
    Real step = 0.0;
    Real semantic = 0.0;
    bool accepted = false;
};

// Anything the refinement loop can drive: a point evaluation (loss plus
// gate score) and a gradient at the current point. The gradient is
// computed once per outer iteration and reused across that iteration's
// candidate steps.
class RefinableSystem {
  public:
    struct Evaluation {
        Real loss = 0.0;
        Real semantic = 0.0;
    };

    virtual ~RefinableSystem() = default;
    virtual Evaluation evaluate(const std::vector<Real>& theta) = 0;
    virtual std::vector<Real> gradient(const std::vector<Real>& theta) = 0;
};

struct AcceptedCandidate {
    std::vector<Real> theta;
    Real loss = 0.0;
};

// Tries theta - eta * g at growing eta until a candidate both strictly
// reduces the loss and clears the semantic threshold; empty after
// `patience` failures. Every candidate lands in `trace` when given.
std::optional<AcceptedCandidate> adaptive_step_search(RefinableSystem& system,
                                                      const std::vector<Real>& theta,
                                                      const std::vector<Real>& gradient,
                                                      Real current_loss, const QcConfig& config,
                                                      std::vector<QcCandidate>* trace = nullptr);

struct RefineResult {
    std::vector<Real> theta;
    Real initial_loss = 0.0;
    Real final_loss = 0.0;
    int accepted_steps = 0;
    std::size_t evaluations = 0;  // candidate evaluations, initial point excluded
    std::vector<QcCandidate> trace;
};

// Outer loop: search, move, repeat until the search comes back empty, a
// gradient goes non-finite, or the iteration cap is reached. Accepted
// losses decrease strictly; the returned theta is always the best seen,
// so the result never regresses below the starting point.
RefineResult refine(RefinableSystem& system, std::vector<Real> theta0, const QcConfig& config);

// What a refined generation run reports.
struct QcOutcome {
    std::vector<int> tokens;
    std::vector<Real> predicted_attrs;
    Real mse_before = 0.0;
    Real mse_after = 0.0;
    Real semantic = 0.0;  // equivalence of the returned output to the source
    int accepted_steps = 0;
    std::vector<QcCandidate> trace;

    std::string trace_json() const;
};

// Refines the source embeddings of one generation toward the target
// attributes, gating every accepted step on equivalence with the
// source. All three models are read-only; concurrent calls are safe.
QcOutcome qc_generate(const GeneratorModel& generator, const PredictorModel& predictor,
                      const SemClassifier& classifier, const std::vector<int>& source,
                      const std::vector<Real>& target_attrs_std, const QcConfig& config,
                      int max_new);

}  // namespace parafine
