#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "parafine/blocks.hpp"
#include "parafine/checkpoint.hpp"
#include "parafine/optim.hpp"
#include "parafine/tensor.hpp"

namespace parafine {

struct Lexicons;
struct ParaphrasePair;

// Word-level cased vocabulary. Sentences encode as their word surfaces
// followed by a "." token; decode reverses that, so a decoded string
// extracts the same attribute values as the text it came from.
class Vocabulary {
public:
    static constexpr int kBos = 0;
    static constexpr int kEos = 1;
    static constexpr int kUnk = 2;

    static Vocabulary build(const std::vector<ParaphrasePair>& pairs, const Lexicons& lexicons);

    int size() const { return static_cast<int>(tokens_.size()); }
    int id_of(const std::string& token) const;  // kUnk when absent
    const std::string& token_of(int id) const;

    // Content tokens only; begin/end markers are the model's concern.
    std::vector<int> encode(const std::string& text, const Lexicons& lexicons) const;
    std::string decode(const std::vector<int>& ids) const;

    std::string to_json() const;
    static Vocabulary from_json(const std::string& text);

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> ids_;
};

struct GeneratorConfig {
    int vocab = 0;
    int d = 64;
    int heads = 4;
    int encoder_layers = 2;
    int decoder_layers = 2;
    int max_len = 64;
    int attr_dim = 40;
    std::uint64_t seed = 0;
    // The unconditioned variant keeps the attribute embedding parameters
    // (so both variants initialize identically) but never applies them.
    bool conditioned = true;

    void validate() const;
    std::string to_json() const;
    static GeneratorConfig from_json(const std::string& text);
};

struct TrainExample {
    std::vector<int> source;
    std::vector<int> target;
    std::vector<Real> target_attrs_std;
};

// Pre-norm transformer encoder-decoder with the target attribute vector
// embedded into the first decoder input row. All trainables live in a
// named ParamSet; initialization draws one forked stream per parameter,
// so models sharing a seed share every common parameter bit-for-bit.
class GeneratorModel {
public:
    explicit GeneratorModel(GeneratorConfig config);

    const GeneratorConfig& config() const { return config_; }
    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }
    void zero_grad();

    // Token rows from the embedding table, no positions added; the shape
    // generate_from_embeddings expects.
    Tensor embed_source(const std::vector<int>& source) const;

    Tensor encode(const std::vector<int>& source) const;
    Tensor encode_embeddings(const Tensor& theta) const;

    // y[0] + LE(attrs) in row 0, rows 1.. untouched. Identity for the
    // unconditioned variant.
    Tensor fuse_attributes(const Tensor& y, const std::vector<Real>& attrs_std) const;

    // Teacher-forced decoder logits [T, vocab] over `memory` from encode().
    Tensor decode_logits(const Tensor& memory, const std::vector<int>& decoder_inputs,
                         const std::vector<Real>& attrs_std) const;

    // Token-count-weighted mean cross-entropy over the batch, as one graph.
    Tensor batch_loss(const std::vector<TrainExample>& batch) const;
    TrainStepResult train_step(const std::vector<TrainExample>& batch, Optimizer& optimizer);

    // Greedy decode, at most max_new tokens, end marker excluded. The
    // decoder input window also caps emission at max_len - 1 tokens.
    std::vector<int> generate(const std::vector<int>& source, const std::vector<Real>& attrs_std,
                              int max_new) const;
    std::vector<int> generate_from_embeddings(const Tensor& theta,
                                              const std::vector<Real>& attrs_std, int max_new) const;

private:
    struct DecoderLayer {
        LayerNormParams ln1;
        AttentionParams self;
        LayerNormParams ln2;
        AttentionParams cross;
        LayerNormParams ln3;
        FfnParams ffn;
    };

    Tensor positions(int rows) const;
    Tensor decoder_stack(const Tensor& y0, const Tensor& memory) const;
    std::vector<int> greedy_loop(const Tensor& memory, const std::vector<Real>& attrs_std,
                                 int max_new) const;

    GeneratorConfig config_;
    ParamSet params_;
    Tensor pos_;  // sinusoidal table, constant
    Tensor embed_;
    Tensor le_w_, le_b_;
    std::vector<EncoderLayerParams> enc_;
    LayerNormParams enc_final_;
    std::vector<DecoderLayer> dec_;
    LayerNormParams dec_final_;
    Tensor out_w_, out_b_;
};

}  // namespace parafine
