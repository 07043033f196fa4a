#include "parafine/tinyseq.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "parafine/corpus.hpp"
#include "parafine/lexicons.hpp"
#include "parafine/ops.hpp"
#include "parafine/text.hpp"

namespace parafine {

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary Vocabulary::build(const std::vector<ParaphrasePair>& pairs, const Lexicons& lexicons) {
    Vocabulary vocab;
    const auto intern = [&vocab](const std::string& token) {
        if (vocab.ids_.emplace(token, static_cast<int>(vocab.tokens_.size())).second) {
            vocab.tokens_.push_back(token);
        }
    };
    intern("<bos>");
    intern("<eos>");
    intern("<unk>");
    for (const auto& pair : pairs) {
        for (const auto* text : {&pair.source, &pair.target}) {
            const auto tokenized = tokenize(*text, lexicons);
            for (const auto& sentence : tokenized.sentences) {
                for (const auto& token : sentence) intern(token.surface);
                intern(".");
            }
        }
    }
    return vocab;
}

int Vocabulary::id_of(const std::string& token) const {
    const auto it = ids_.find(token);
    return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token_of(int id) const {
    if (id < 0 || id >= size()) {
        throw std::out_of_range("token id " + std::to_string(id) + " outside vocabulary of " +
                                std::to_string(size()));
    }
    return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::string& text, const Lexicons& lexicons) const {
    std::vector<int> out;
    const auto tokenized = tokenize(text, lexicons);
    for (const auto& sentence : tokenized.sentences) {
        for (const auto& token : sentence) out.push_back(id_of(token.surface));
        out.push_back(id_of("."));
    }
    return out;
}

std::string Vocabulary::decode(const std::vector<int>& ids) const {
    std::string out;
    for (const int id : ids) {
        if (id == kBos || id == kEos) continue;
        const std::string& token = id == kUnk ? "unk" : token_of(id);
        if (token == ".") {
            out += ".";
        } else {
            if (!out.empty()) out += " ";
            out += token;
        }
    }
    return out;
}

std::string Vocabulary::to_json() const {
    nlohmann::json doc;
    doc["tokens"] = tokens_;
    return doc.dump();
}

Vocabulary Vocabulary::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    Vocabulary vocab;
    vocab.tokens_ = doc.at("tokens").get<std::vector<std::string>>();
    if (vocab.tokens_.size() < 3 || vocab.tokens_[0] != "<bos>" || vocab.tokens_[1] != "<eos>" ||
        vocab.tokens_[2] != "<unk>") {
        throw std::runtime_error("vocabulary json lacks the three marker tokens");
    }
    for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
        if (!vocab.ids_.emplace(vocab.tokens_[i], static_cast<int>(i)).second) {
            throw std::runtime_error("vocabulary json repeats token: " + vocab.tokens_[i]);
        }
    }
    return vocab;
}

// ---------------------------------------------------------------------------
// Config

void GeneratorConfig::validate() const {
    if (vocab < 4) throw std::invalid_argument("vocab must cover the three markers plus content");
    if (d < 1 || heads < 1 || d % heads != 0) {
        throw std::invalid_argument("model width " + std::to_string(d) +
                                    " not divisible by heads " + std::to_string(heads));
    }
    if (encoder_layers < 1 || decoder_layers < 1) throw std::invalid_argument("need >= 1 layer");
    if (max_len < 2) throw std::invalid_argument("max_len must leave room for the markers");
    if (attr_dim < 1) throw std::invalid_argument("attr_dim must be positive");
}

std::string GeneratorConfig::to_json() const {
    nlohmann::json doc;
    doc["vocab"] = vocab;
    doc["d"] = d;
    doc["heads"] = heads;
    doc["encoder_layers"] = encoder_layers;
    doc["decoder_layers"] = decoder_layers;
    doc["max_len"] = max_len;
    doc["attr_dim"] = attr_dim;
    doc["seed"] = seed;
    doc["conditioned"] = conditioned;
    return doc.dump();
}

GeneratorConfig GeneratorConfig::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    GeneratorConfig config;
    config.vocab = doc.at("vocab").get<int>();
    config.d = doc.at("d").get<int>();
    config.heads = doc.at("heads").get<int>();
    config.encoder_layers = doc.at("encoder_layers").get<int>();
    config.decoder_layers = doc.at("decoder_layers").get<int>();
    config.max_len = doc.at("max_len").get<int>();
    config.attr_dim = doc.at("attr_dim").get<int>();
    config.seed = doc.at("seed").get<std::uint64_t>();
    config.conditioned = doc.at("conditioned").get<bool>();
    config.validate();
    return config;
}

// ---------------------------------------------------------------------------
// Model

GeneratorModel::GeneratorModel(GeneratorConfig config) : config_(config) {
    config_.validate();
    const Rng base(config_.seed);
    const int d = config_.d;

    embed_ = make_weight(params_, base, "embed", config_.vocab, d);
    le_w_ = make_weight(params_, base, "le.w", config_.attr_dim, d);
    le_b_ = make_bias(params_, "le.b", d);
    for (int i = 0; i < config_.encoder_layers; ++i) {
        const std::string prefix = "enc" + std::to_string(i);
        EncoderLayerParams layer;
        layer.ln1 = make_norm(params_, prefix + ".ln1", d);
        layer.attn = make_attention(params_, base, prefix + ".attn", d);
        layer.ln2 = make_norm(params_, prefix + ".ln2", d);
        layer.ffn = make_ffn(params_, base, prefix + ".ffn", d);
        enc_.push_back(layer);
    }
    enc_final_ = make_norm(params_, "enc.ln", d);
    for (int i = 0; i < config_.decoder_layers; ++i) {
        const std::string prefix = "dec" + std::to_string(i);
        DecoderLayer layer;
        layer.ln1 = make_norm(params_, prefix + ".ln1", d);
        layer.self = make_attention(params_, base, prefix + ".self", d);
        layer.ln2 = make_norm(params_, prefix + ".ln2", d);
        layer.cross = make_attention(params_, base, prefix + ".cross", d);
        layer.ln3 = make_norm(params_, prefix + ".ln3", d);
        layer.ffn = make_ffn(params_, base, prefix + ".ffn", d);
        dec_.push_back(layer);
    }
    dec_final_ = make_norm(params_, "dec.ln", d);
    // Near-zero head: the untrained model predicts close to uniform.
    out_w_ = make_weight(params_, base, "out.w", d, config_.vocab, 0.02);
    out_b_ = make_bias(params_, "out.b", config_.vocab);

    pos_ = sinusoid_table(config_.max_len, d);
}

void GeneratorModel::zero_grad() {
    for (const auto& entry : params_.entries()) {
        Tensor t = entry.second;
        t.zero_grad();
    }
}

Tensor GeneratorModel::positions(int rows) const { return slice_rows(pos_, 0, rows); }

Tensor GeneratorModel::embed_source(const std::vector<int>& source) const {
    if (source.empty()) throw std::invalid_argument("source token list is empty");
    if (static_cast<int>(source.size()) > config_.max_len) {
        throw std::invalid_argument("source of " + std::to_string(source.size()) +
                                    " tokens exceeds max_len " + std::to_string(config_.max_len));
    }
    // Embedding rows are scaled to unit variance so the positional signal
    // does not dominate token identity.
    return scale(embedding_rows(embed_, source), std::sqrt(static_cast<Real>(config_.d)));
}

Tensor GeneratorModel::encode(const std::vector<int>& source) const {
    return encode_embeddings(embed_source(source));
}

Tensor GeneratorModel::encode_embeddings(const Tensor& theta) const {
    if (theta.cols() != config_.d || theta.rows() < 1 || theta.rows() > config_.max_len) {
        throw std::invalid_argument("source embeddings shaped " + shape_str(theta.shape()) +
                                    " do not fit the encoder");
    }
    return encoder_forward(enc_, enc_final_, add(theta, positions(theta.rows())), config_.heads);
}

Tensor GeneratorModel::fuse_attributes(const Tensor& y, const std::vector<Real>& attrs_std) const {
    if (y.cols() != config_.d || y.rows() < 1) {
        throw std::invalid_argument("decoder embeddings shaped " + shape_str(y.shape()) +
                                    " cannot take the attribute row");
    }
    if (static_cast<int>(attrs_std.size()) != config_.attr_dim) {
        throw std::invalid_argument("attribute vector of " + std::to_string(attrs_std.size()) +
                                    " values, expected " + std::to_string(config_.attr_dim));
    }
    if (!config_.conditioned) return y;
    const Tensor l = Tensor::from({1, config_.attr_dim}, attrs_std);
    const Tensor le = add(matmul(l, le_w_), le_b_);
    if (y.rows() == 1) return add(y, le);
    return concat_rows({add(slice_rows(y, 0, 1), le), slice_rows(y, 1, y.rows())});
}

Tensor GeneratorModel::decoder_stack(const Tensor& y0, const Tensor& memory) const {
    Tensor x = y0;
    for (const auto& layer : dec_) {
        const Tensor n1 = layer_norm_affine(x, layer.ln1);
        x = add(x, attend(layer.self, n1, n1, config_.heads, true));
        const Tensor n2 = layer_norm_affine(x, layer.ln2);
        x = add(x, attend(layer.cross, n2, memory, config_.heads, false));
        const Tensor n3 = layer_norm_affine(x, layer.ln3);
        x = add(x, feed_forward(layer.ffn, n3));
    }
    return layer_norm_affine(x, dec_final_);
}

Tensor GeneratorModel::decode_logits(const Tensor& memory, const std::vector<int>& decoder_inputs,
                                     const std::vector<Real>& attrs_std) const {
    if (decoder_inputs.empty()) throw std::invalid_argument("decoder input list is empty");
    if (static_cast<int>(decoder_inputs.size()) > config_.max_len) {
        throw std::invalid_argument("decoder input of " + std::to_string(decoder_inputs.size()) +
                                    " tokens exceeds max_len " + std::to_string(config_.max_len));
    }
    if (memory.cols() != config_.d) {
        throw std::invalid_argument("memory shaped " + shape_str(memory.shape()) +
                                    " does not match model width");
    }
    const int t = static_cast<int>(decoder_inputs.size());
    Tensor y = add(scale(embedding_rows(embed_, decoder_inputs),
                         std::sqrt(static_cast<Real>(config_.d))),
                   positions(t));
    y = fuse_attributes(y, attrs_std);
    const Tensor h = decoder_stack(y, memory);
    return add(matmul(h, out_w_), out_b_);
}

Tensor GeneratorModel::batch_loss(const std::vector<TrainExample>& batch) const {
    if (batch.empty()) throw std::invalid_argument("empty training batch");
    Tensor weighted;
    std::size_t total_tokens = 0;
    for (const auto& example : batch) {
        if (example.target.empty()) throw std::invalid_argument("training target is empty");
        const Tensor memory = encode(example.source);
        std::vector<int> inputs;
        inputs.reserve(example.target.size() + 1);
        inputs.push_back(Vocabulary::kBos);
        inputs.insert(inputs.end(), example.target.begin(), example.target.end());
        std::vector<int> labels = example.target;
        labels.push_back(Vocabulary::kEos);

        const Tensor logits = decode_logits(memory, inputs, example.target_attrs_std);
        const Tensor ce = cross_entropy_rows(logits, labels);
        const Tensor share = scale(ce, static_cast<Real>(labels.size()));
        weighted = weighted.defined() ? add(weighted, share) : share;
        total_tokens += labels.size();
    }
    return scale(weighted, 1.0 / static_cast<Real>(total_tokens));
}

TrainStepResult GeneratorModel::train_step(const std::vector<TrainExample>& batch,
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

std::vector<int> GeneratorModel::greedy_loop(const Tensor& memory,
                                             const std::vector<Real>& attrs_std,
                                             int max_new) const {
    const int cap = std::min(max_new, config_.max_len - 1);
    std::vector<int> inputs = {Vocabulary::kBos};
    std::vector<int> out;
    while (static_cast<int>(out.size()) < cap) {
        const Tensor logits = decode_logits(memory, inputs, attrs_std);
        const int last = logits.rows() - 1;
        int best = 0;
        Real best_value = logits.at(last, 0);
        for (int j = 1; j < logits.cols(); ++j) {
            const Real value = logits.at(last, j);
            if (value > best_value) {
                best = j;
                best_value = value;
            }
        }
        if (best == Vocabulary::kEos) break;
        out.push_back(best);
        inputs.push_back(best);
    }
    return out;
}

std::vector<int> GeneratorModel::generate(const std::vector<int>& source,
                                          const std::vector<Real>& attrs_std, int max_new) const {
    return greedy_loop(encode(source), attrs_std, max_new);
}

std::vector<int> GeneratorModel::generate_from_embeddings(const Tensor& theta,
                                                          const std::vector<Real>& attrs_std,
                                                          int max_new) const {
    return greedy_loop(encode_embeddings(theta), attrs_std, max_new);
}

}  // namespace parafine
