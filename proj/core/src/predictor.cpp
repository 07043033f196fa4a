#include "parafine/predictor.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "parafine/ops.hpp"

namespace parafine {

void PredictorConfig::validate() const {
    if (vocab < 4) throw std::invalid_argument("vocab must cover the three markers plus content");
    if (d < 1 || heads < 1 || d % heads != 0) {
        throw std::invalid_argument("model width " + std::to_string(d) +
                                    " not divisible by heads " + std::to_string(heads));
    }
    if (layers < 1) throw std::invalid_argument("need >= 1 layer");
    if (max_len < 1) throw std::invalid_argument("max_len must be positive");
    if (attr_dim < 1) throw std::invalid_argument("attr_dim must be positive");
}

std::string PredictorConfig::to_json() const {
    nlohmann::json doc;
    doc["vocab"] = vocab;
    doc["d"] = d;
    doc["heads"] = heads;
    doc["layers"] = layers;
    doc["max_len"] = max_len;
    doc["attr_dim"] = attr_dim;
    doc["seed"] = seed;
    return doc.dump();
}

PredictorConfig PredictorConfig::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    PredictorConfig config;
    config.vocab = doc.at("vocab").get<int>();
    config.d = doc.at("d").get<int>();
    config.heads = doc.at("heads").get<int>();
    config.layers = doc.at("layers").get<int>();
    config.max_len = doc.at("max_len").get<int>();
    config.attr_dim = doc.at("attr_dim").get<int>();
    config.seed = doc.at("seed").get<std::uint64_t>();
    config.validate();
    return config;
}

Tensor one_hot_rows(const std::vector<int>& tokens, int vocab) {
    if (tokens.empty()) throw std::invalid_argument("token list is empty");
    std::vector<Real> data(tokens.size() * static_cast<std::size_t>(vocab), 0.0);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] < 0 || tokens[i] >= vocab) {
            throw std::out_of_range("token id " + std::to_string(tokens[i]) +
                                    " outside vocabulary of " + std::to_string(vocab));
        }
        data[i * static_cast<std::size_t>(vocab) + static_cast<std::size_t>(tokens[i])] = 1.0;
    }
    return Tensor::from({static_cast<int>(tokens.size()), vocab}, std::move(data));
}

Tensor ste_pass(const Tensor& logits) {
    if (logits.shape().size() != 2 || logits.rows() < 1 || logits.cols() < 1) {
        throw std::invalid_argument("ste expects a [positions, vocab] logits matrix");
    }
    const int rows = logits.rows();
    const int cols = logits.cols();
    std::vector<Real> onehot(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
    for (int i = 0; i < rows; ++i) {
        int best = 0;
        Real best_value = logits.at(i, 0);
        for (int j = 1; j < cols; ++j) {
            if (logits.at(i, j) > best_value) {
                best = j;
                best_value = logits.at(i, j);
            }
        }
        onehot[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(best)] = 1.0;
    }
    // Value: onehot exactly (logits - logits vanishes element-wise).
    // Gradient: identity into logits; the detached copy carries none.
    return add(Tensor::from(logits.shape(), std::move(onehot)), sub(logits, detach(logits)));
}

PredictorModel::PredictorModel(PredictorConfig config) : config_(config) {
    config_.validate();
    const Rng base(config_.seed);
    const int d = config_.d;

    embed_ = make_weight(params_, base, "embed", config_.vocab, d);
    for (int i = 0; i < config_.layers; ++i) {
        const std::string prefix = "enc" + std::to_string(i);
        EncoderLayerParams layer;
        layer.ln1 = make_norm(params_, prefix + ".ln1", d);
        layer.attn = make_attention(params_, base, prefix + ".attn", d);
        layer.ln2 = make_norm(params_, prefix + ".ln2", d);
        layer.ffn = make_ffn(params_, base, prefix + ".ffn", d);
        enc_.push_back(layer);
    }
    enc_final_ = make_norm(params_, "enc.ln", d);
    proj_w_ = make_weight(params_, base, "proj.w", d, config_.attr_dim);
    proj_b_ = make_bias(params_, "proj.b", config_.attr_dim);

    pos_ = sinusoid_table(config_.max_len, d);
}

void PredictorModel::zero_grad() {
    for (const auto& entry : params_.entries()) {
        Tensor t = entry.second;
        t.zero_grad();
    }
}

Tensor PredictorModel::encode_pooled(const Tensor& embedded) const {
    const Tensor scaled = scale(embedded, std::sqrt(static_cast<Real>(config_.d)));
    const Tensor x0 = add(scaled, slice_rows(pos_, 0, embedded.rows()));
    const Tensor encoded = encoder_forward(enc_, enc_final_, x0, config_.heads);
    return mean_rows(encoded);
}

Tensor PredictorModel::predict_rows(const Tensor& rows) const {
    if (rows.shape().size() != 2 || rows.cols() != config_.vocab) {
        throw std::invalid_argument("prediction input shaped " + shape_str(rows.shape()) +
                                    " does not match vocabulary " + std::to_string(config_.vocab));
    }
    if (rows.rows() < 1 || rows.rows() > config_.max_len) {
        throw std::invalid_argument("prediction input of " + std::to_string(rows.rows()) +
                                    " positions outside [1, " + std::to_string(config_.max_len) +
                                    "]");
    }
    const Tensor pooled = encode_pooled(matmul(rows, embed_));
    return add(matmul(pooled, proj_w_), proj_b_);
}

std::vector<Real> PredictorModel::predict(const std::vector<int>& tokens) const {
    if (tokens.empty()) throw std::invalid_argument("token list is empty");
    if (static_cast<int>(tokens.size()) > config_.max_len) {
        throw std::invalid_argument("sequence of " + std::to_string(tokens.size()) +
                                    " tokens exceeds max_len " + std::to_string(config_.max_len));
    }
    const Tensor pooled = encode_pooled(embedding_rows(embed_, tokens));
    const Tensor out = add(matmul(pooled, proj_w_), proj_b_);
    return {out.data().begin(), out.data().end()};
}

Tensor PredictorModel::batch_loss(const std::vector<AttrExample>& batch) const {
    if (batch.empty()) throw std::invalid_argument("empty training batch");
    Tensor total;
    for (const auto& example : batch) {
        if (static_cast<int>(example.attrs_std.size()) != config_.attr_dim) {
            throw std::invalid_argument("gold vector of " +
                                        std::to_string(example.attrs_std.size()) +
                                        " values, expected " + std::to_string(config_.attr_dim));
        }
        if (example.tokens.empty()) throw std::invalid_argument("token list is empty");
        if (static_cast<int>(example.tokens.size()) > config_.max_len) {
            throw std::invalid_argument("sequence of " + std::to_string(example.tokens.size()) +
                                        " tokens exceeds max_len " +
                                        std::to_string(config_.max_len));
        }
        const Tensor pooled = encode_pooled(embedding_rows(embed_, example.tokens));
        const Tensor pred = add(matmul(pooled, proj_w_), proj_b_);
        const Tensor gold = Tensor::from({config_.attr_dim}, example.attrs_std);
        const Tensor err = mse(pred, gold);
        total = total.defined() ? add(total, err) : err;
    }
    return scale(total, 1.0 / static_cast<Real>(batch.size()));
}

TrainStepResult PredictorModel::train_step(const std::vector<AttrExample>& batch,
                                           Optimizer& optimizer) {
    zero_grad();
    const Tensor loss = batch_loss(batch);
    TrainStepResult result;
    result.loss = loss.item();
    if (!std::isfinite(result.loss)) {
        result.applied = false;
        return result;
    }
    backward(loss);
    result.applied = optimizer.step();
    return result;
}

}  // namespace parafine
