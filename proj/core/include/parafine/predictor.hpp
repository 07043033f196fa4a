#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parafine/blocks.hpp"
#include "parafine/checkpoint.hpp"
#include "parafine/optim.hpp"
#include "parafine/tensor.hpp"

namespace parafine {

struct PredictorConfig {
    int vocab = 0;
    int d = 64;
    int heads = 4;
    int layers = 2;
    int max_len = 64;
    int attr_dim = 40;
    std::uint64_t seed = 0;

    void validate() const;
    std::string to_json() const;
    static PredictorConfig from_json(const std::string& text);
};

struct AttrExample {
    std::vector<int> tokens;
    std::vector<Real> attrs_std;
};

// One-hot token rows [T, vocab]; the continuous input format of the
// predictor's straight-through pathway.
Tensor one_hot_rows(const std::vector<int>& tokens, int vocab);

// Argmax one-hot per row whose value is exactly the one-hot but whose
// gradient flows to the logits untouched: onehot + logits - detach(logits).
Tensor ste_pass(const Tensor& logits);

// Encoder, mean pool, projection to standardized attribute space. Trained
// once on gold attribute vectors, then frozen: inference methods are
// const and share no mutable state, so a frozen model may serve
// concurrent callers.
class PredictorModel {
public:
    explicit PredictorModel(PredictorConfig config);

    const PredictorConfig& config() const { return config_; }
    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }
    void zero_grad();

    // Graph-valued prediction from one-hot (or soft) rows [T, vocab];
    // gradients flow back into `rows`.
    Tensor predict_rows(const Tensor& rows) const;
    std::vector<Real> predict(const std::vector<int>& tokens) const;

    // Mean squared error in standardized units, averaged over the batch.
    Tensor batch_loss(const std::vector<AttrExample>& batch) const;
    TrainStepResult train_step(const std::vector<AttrExample>& batch, Optimizer& optimizer);

private:
    Tensor encode_pooled(const Tensor& embedded) const;

    PredictorConfig config_;
    ParamSet params_;
    Tensor pos_;
    Tensor embed_;
    std::vector<EncoderLayerParams> enc_;
    LayerNormParams enc_final_;
    Tensor proj_w_, proj_b_;
};

}  // namespace parafine
