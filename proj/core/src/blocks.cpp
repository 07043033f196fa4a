#include "parafine/blocks.hpp"

#include <cmath>

#include "parafine/ops.hpp"

namespace parafine {

Tensor make_weight(ParamSet& params, const Rng& base, const std::string& name, int rows, int cols,
                   Real stddev) {
    Rng stream = base.fork(name);
    if (stddev <= 0.0) stddev = std::sqrt(1.0 / static_cast<Real>(rows));
    return params.add(name, Tensor::randn({rows, cols}, stream, stddev, true));
}

Tensor make_bias(ParamSet& params, const std::string& name, int n) {
    return params.add(name, Tensor::zeros({n}, true));
}

LayerNormParams make_norm(ParamSet& params, const std::string& name, int d) {
    LayerNormParams ln;
    ln.gain = params.add(name + ".g", Tensor::full({d}, 1.0, true));
    ln.bias = params.add(name + ".b", Tensor::zeros({d}, true));
    return ln;
}

AttentionParams make_attention(ParamSet& params, const Rng& base, const std::string& name, int d) {
    AttentionParams a;
    a.wq = make_weight(params, base, name + ".wq", d, d);
    a.bq = make_bias(params, name + ".bq", d);
    a.wk = make_weight(params, base, name + ".wk", d, d);
    a.bk = make_bias(params, name + ".bk", d);
    a.wv = make_weight(params, base, name + ".wv", d, d);
    a.bv = make_bias(params, name + ".bv", d);
    a.wo = make_weight(params, base, name + ".wo", d, d);
    a.bo = make_bias(params, name + ".bo", d);
    return a;
}

FfnParams make_ffn(ParamSet& params, const Rng& base, const std::string& name, int d) {
    FfnParams f;
    const int hidden = 4 * d;
    f.w1 = make_weight(params, base, name + ".w1", d, hidden);
    f.b1 = make_bias(params, name + ".b1", hidden);
    f.w2 = make_weight(params, base, name + ".w2", hidden, d);
    f.b2 = make_bias(params, name + ".b2", d);
    return f;
}

Tensor sinusoid_table(int max_len, int d) {
    std::vector<Real> data(static_cast<std::size_t>(max_len) * static_cast<std::size_t>(d));
    for (int p = 0; p < max_len; ++p) {
        for (int i = 0; i < d; ++i) {
            const Real angle =
                p / std::pow(10000.0, static_cast<Real>(2 * (i / 2)) / static_cast<Real>(d));
            data[static_cast<std::size_t>(p) * static_cast<std::size_t>(d) +
                 static_cast<std::size_t>(i)] = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
        }
    }
    return Tensor::from({max_len, d}, std::move(data));
}

Tensor causal_mask(int n) {
    std::vector<Real> data(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            data[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                 static_cast<std::size_t>(j)] = -1e9;
        }
    }
    return Tensor::from({n, n}, std::move(data));
}

Tensor layer_norm_affine(const Tensor& x, const LayerNormParams& p) {
    return add(mul(layer_norm_rows(x), p.gain), p.bias);
}

Tensor attend(const AttentionParams& p, const Tensor& queries, const Tensor& keys_values,
              int heads, bool causal) {
    const Tensor q = add(matmul(queries, p.wq), p.bq);
    const Tensor k = add(matmul(keys_values, p.wk), p.bk);
    const Tensor v = add(matmul(keys_values, p.wv), p.bv);
    const int dh = q.cols() / heads;
    const Real inv_scale = 1.0 / std::sqrt(static_cast<Real>(dh));
    Tensor mask;
    if (causal) mask = causal_mask(queries.rows());
    std::vector<Tensor> pooled;
    pooled.reserve(static_cast<std::size_t>(heads));
    for (int h = 0; h < heads; ++h) {
        const Tensor qh = slice_cols(q, h * dh, (h + 1) * dh);
        const Tensor kh = slice_cols(k, h * dh, (h + 1) * dh);
        const Tensor vh = slice_cols(v, h * dh, (h + 1) * dh);
        Tensor scores = scale(matmul(qh, transpose(kh)), inv_scale);
        if (causal) scores = add(scores, mask);
        pooled.push_back(matmul(softmax_rows(scores), vh));
    }
    return add(matmul(concat_cols(pooled), p.wo), p.bo);
}

Tensor feed_forward(const FfnParams& p, const Tensor& x) {
    return add(matmul(relu(add(matmul(x, p.w1), p.b1)), p.w2), p.b2);
}

Tensor encoder_forward(const std::vector<EncoderLayerParams>& layers,
                       const LayerNormParams& final_norm, const Tensor& x0, int heads) {
    Tensor x = x0;
    for (const auto& layer : layers) {
        const Tensor n1 = layer_norm_affine(x, layer.ln1);
        x = add(x, attend(layer.attn, n1, n1, heads, false));
        const Tensor n2 = layer_norm_affine(x, layer.ln2);
        x = add(x, feed_forward(layer.ffn, n2));
    }
    return layer_norm_affine(x, final_norm);
}

}  // namespace parafine
