#pragma once

#include <string>
#include <vector>

#include "parafine/checkpoint.hpp"
#include "parafine/rng.hpp"
#include "parafine/tensor.hpp"

namespace parafine {

// Transformer building blocks shared by the generator, the attribute
// predictor, and the semantic classifier. Parameters register under
// dotted names and draw their init stream by forking the model base rng
// on that name, so two models sharing a seed agree on every parameter
// they have in common regardless of registration order.

struct LayerNormParams {
    Tensor gain, bias;
};

struct AttentionParams {
    Tensor wq, bq, wk, bk, wv, bv, wo, bo;
};

struct FfnParams {
    Tensor w1, b1, w2, b2;
};

struct EncoderLayerParams {
    LayerNormParams ln1;
    AttentionParams attn;
    LayerNormParams ln2;
    FfnParams ffn;
};

// stddev <= 0 means fan-in scaling sqrt(1/rows).
Tensor make_weight(ParamSet& params, const Rng& base, const std::string& name, int rows, int cols,
                   Real stddev = 0.0);
Tensor make_bias(ParamSet& params, const std::string& name, int n);
LayerNormParams make_norm(ParamSet& params, const std::string& name, int d);
AttentionParams make_attention(ParamSet& params, const Rng& base, const std::string& name, int d);
FfnParams make_ffn(ParamSet& params, const Rng& base, const std::string& name, int d);

Tensor sinusoid_table(int max_len, int d);
Tensor causal_mask(int n);

Tensor layer_norm_affine(const Tensor& x, const LayerNormParams& p);
Tensor attend(const AttentionParams& p, const Tensor& queries, const Tensor& keys_values,
              int heads, bool causal);
Tensor feed_forward(const FfnParams& p, const Tensor& x);

// Pre-norm residual stack over x0 (positions already added), closed by a
// final affine layer norm.
Tensor encoder_forward(const std::vector<EncoderLayerParams>& layers,
                       const LayerNormParams& final_norm, const Tensor& x0, int heads);

}  // namespace parafine
