#include "parafine/sem_equiv.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "parafine/ops.hpp"
#include "parafine/rng.hpp"

namespace parafine {

void SeConfig::validate() const {
    if (vocab < 4) throw std::invalid_argument("vocab must cover the three markers plus content");
    if (d < 1 || heads < 1 || d % heads != 0) {
        throw std::invalid_argument("model width " + std::to_string(d) +
                                    " not divisible by heads " + std::to_string(heads));
    }
    if (layers < 1) throw std::invalid_argument("need >= 1 layer");
    if (max_len < 1) throw std::invalid_argument("max_len must be positive");
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
}

std::string SeConfig::to_json() const {
    nlohmann::json doc;
    doc["vocab"] = vocab;
    doc["d"] = d;
    doc["heads"] = heads;
    doc["layers"] = layers;
    doc["max_len"] = max_len;
    doc["temperature"] = temperature;
    doc["seed"] = seed;
    return doc.dump();
}

SeConfig SeConfig::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    SeConfig config;
    config.vocab = doc.at("vocab").get<int>();
    config.d = doc.at("d").get<int>();
    config.heads = doc.at("heads").get<int>();
    config.layers = doc.at("layers").get<int>();
    config.max_len = doc.at("max_len").get<int>();
    config.temperature = doc.at("temperature").get<Real>();
    config.seed = doc.at("seed").get<std::uint64_t>();
    config.validate();
    return config;
}

Tensor info_nce(const Tensor& scores) {
    if (scores.shape().size() != 2 || scores.rows() != scores.cols()) {
        throw std::invalid_argument("contrastive scores must form a square matrix, got " +
                                    shape_str(scores.shape()));
    }
    if (scores.rows() < 2) {
        throw std::invalid_argument("need at least two pairs for in-batch negatives");
    }
    std::vector<int> diagonal(static_cast<std::size_t>(scores.rows()));
    std::iota(diagonal.begin(), diagonal.end(), 0);
    return cross_entropy_rows(scores, diagonal);
}

SemClassifier::SemClassifier(SeConfig config) : config_(config) {
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
    pos_ = sinusoid_table(config_.max_len, d);
}

Tensor SemClassifier::encode_pooled(const std::vector<int>& tokens) const {
    if (tokens.empty()) throw std::invalid_argument("token list is empty");
    if (static_cast<int>(tokens.size()) > config_.max_len) {
        throw std::invalid_argument("sequence of " + std::to_string(tokens.size()) +
                                    " tokens exceeds max_len " + std::to_string(config_.max_len));
    }
    const Tensor embedded = embedding_rows(embed_, tokens);
    const Tensor scaled = scale(embedded, std::sqrt(static_cast<Real>(config_.d)));
    const Tensor x0 = add(scaled, slice_rows(pos_, 0, embedded.rows()));
    const Tensor encoded = encoder_forward(enc_, enc_final_, x0, config_.heads);
    return mean_rows(encoded);
}

Real SemClassifier::compatibility(const std::vector<int>& s, const std::vector<int>& t) const {
    const Tensor ps = encode_pooled(s);
    const Tensor pt = encode_pooled(t);
    return sum_all(mul(ps, pt)).item() / config_.temperature;
}

Real SemClassifier::score(const std::vector<int>& s, const std::vector<int>& t) const {
    return 1.0 / (1.0 + std::exp(-compatibility(s, t)));
}

Tensor SemClassifier::batch_loss(const std::vector<SePair>& batch) const {
    if (batch.size() < 2) {
        throw std::invalid_argument("need at least two pairs for in-batch negatives");
    }
    std::vector<Tensor> lefts;
    std::vector<Tensor> rights;
    for (const auto& pair : batch) {
        lefts.push_back(encode_pooled(pair.left));
        rights.push_back(encode_pooled(pair.right));
    }
    const Tensor queries = concat_rows(lefts);
    const Tensor candidates = concat_rows(rights);
    const Tensor scores =
        scale(matmul(queries, transpose(candidates)), 1.0 / config_.temperature);
    return info_nce(scores);
}

TrainStepResult SemClassifier::train_step(const std::vector<SePair>& batch, Optimizer& optimizer) {
    for (const auto& entry : params_.entries()) {
        Tensor t = entry.second;
        t.zero_grad();
    }
    const Tensor loss = batch_loss(batch);
    TrainStepResult result;
    result.loss = loss.item();
    if (!std::isfinite(result.loss)) return result;
    backward(loss);
    result.applied = optimizer.step();
    return result;
}

}  // namespace parafine
