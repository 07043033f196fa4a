#pragma once

// Semantic equivalence classifier: a transformer encoder shared by both
// sides of a pair, mean-pooled, scored by a temperature-scaled dot
// product and calibrated to a probability with a logistic map. Trained
// contrastively against in-batch negatives; the trained score gates
// quality control and doubles as the fidelity metric in evaluation.

#include <cstdint>
#include <string>
#include <vector>

#include "parafine/blocks.hpp"
#include "parafine/checkpoint.hpp"
#include "parafine/optim.hpp"
#include "parafine/tensor.hpp"

namespace parafine {

struct SeConfig {
    int vocab = 0;
    int d = 64;
    int heads = 4;
    int layers = 2;
    int max_len = 64;
    Real temperature = 8.0;
    std::uint64_t seed = 0;

    void validate() const;
    std::string to_json() const;
    static SeConfig from_json(const std::string& text);
};

// One positive pair; both sides are token sequences over the shared
// vocabulary.
struct SePair {
    std::vector<int> left;
    std::vector<int> right;
};

// In-batch contrastive loss over a square score matrix whose diagonal
// holds the positives. The softmax denominator keeps the positive, so
// the loss is bounded below by zero and equals ln m when all scores in
// a row tie.
Tensor info_nce(const Tensor& scores);

class SemClassifier {
  public:
    explicit SemClassifier(SeConfig config);

    const SeConfig& config() const { return config_; }
    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }

    // Mean-pooled encoding of one side, graph-valued; rank-1 {d}.
    Tensor encode_pooled(const std::vector<int>& tokens) const;

    // Unnormalized compatibility: pooled dot product over the
    // temperature. Symmetric in its arguments.
    Real compatibility(const std::vector<int>& s, const std::vector<int>& t) const;

    // Calibrated probability in [0,1]: logistic over the compatibility.
    Real score(const std::vector<int>& s, const std::vector<int>& t) const;

    // Mean contrastive loss over a batch of positive pairs; every other
    // right side in the batch serves as a negative. Needs at least two
    // pairs, otherwise there is nothing to contrast against.
    Tensor batch_loss(const std::vector<SePair>& batch) const;
    TrainStepResult train_step(const std::vector<SePair>& batch, Optimizer& optimizer);

  private:
    SeConfig config_;
    ParamSet params_;
    Tensor embed_;
    Tensor pos_;
    std::vector<EncoderLayerParams> enc_;
    LayerNormParams enc_final_;
};

}  // namespace parafine
