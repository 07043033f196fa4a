#include <algorithm>
#include <cmath>
#include <filesystem>
#include <thread>
#include <vector>

#include <doctest.h>

#include "parafine/checkpoint.hpp"
#include "parafine/corpus.hpp"
#include "parafine/lexicons.hpp"
#include "parafine/ops.hpp"
#include "parafine/optim.hpp"
#include "parafine/rng.hpp"
#include "parafine/sem_equiv.hpp"
#include "parafine/tinyseq.hpp"

using namespace parafine;

namespace {

struct SeFixture {
    Vocabulary vocab;
    std::vector<SePair> pairs;
};

SeFixture make_se_fixture() {
    const auto& lex = Lexicons::bundled();
    const auto raw = synth_corpus(100, 21, lex);
    SeFixture fixture;
    fixture.vocab = Vocabulary::build(raw, lex);
    for (const auto& p : raw) {
        fixture.pairs.push_back(
            {fixture.vocab.encode(p.source, lex), fixture.vocab.encode(p.target, lex)});
    }
    return fixture;
}

SeConfig fixture_config(const SeFixture& fixture, std::uint64_t seed = 7) {
    SeConfig config;
    config.vocab = fixture.vocab.size();
    config.seed = seed;
    return config;
}

}  // namespace

TEST_CASE("classifier config validates and survives json") {
    SeConfig config;
    config.vocab = 50;
    CHECK_NOTHROW(config.validate());
    SeConfig bad = config;
    bad.temperature = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = config;
    bad.d = 66;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    const SeConfig restored = SeConfig::from_json(config.to_json());
    CHECK(restored.vocab == config.vocab);
    CHECK(restored.d == config.d);
    CHECK(restored.heads == config.heads);
    CHECK(restored.layers == config.layers);
    CHECK(restored.max_len == config.max_len);
    CHECK(restored.temperature == config.temperature);
    CHECK(restored.seed == config.seed);
}

TEST_CASE("uniform score matrices lose exactly ln m") {
    for (const int m : {2, 3, 4, 5, 6}) {
        CHECK(info_nce(Tensor::full({m, m}, 0.7)).item() ==
              doctest::Approx(std::log(static_cast<Real>(m))).epsilon(1e-14));
    }
}

TEST_CASE("a dominant diagonal drives the contrastive loss to zero") {
    const int m = 5;
    std::vector<Real> data(m * m, -50.0);
    for (int i = 0; i < m; ++i) data[static_cast<std::size_t>(i) * m + i] = 50.0;
    CHECK(info_nce(Tensor::from({m, m}, data)).item() < 1e-8);
    CHECK(info_nce(Tensor::from({m, m}, data)).item() >= 0.0);
}

TEST_CASE("contrastive loss rejects degenerate score matrices") {
    CHECK_THROWS_AS(info_nce(Tensor::zeros({1, 1})), std::invalid_argument);
    CHECK_THROWS_AS(info_nce(Tensor::zeros({3, 4})), std::invalid_argument);
    CHECK_THROWS_AS(info_nce(Tensor::zeros({4})), std::invalid_argument);
}

TEST_CASE("contrastive loss gradient favors the positive pair") {
    Tensor scores = Tensor::from({2, 2}, {1.0, 1.0, 1.0, 1.0}, true);
    backward(info_nce(scores));
    const auto grad = scores.grad();
    REQUIRE(grad.size() == 4);
    CHECK(grad[0] < 0.0);
    CHECK(grad[1] > 0.0);
    CHECK(grad[2] > 0.0);
    CHECK(grad[3] < 0.0);
}

TEST_CASE("scores are probabilities, symmetric, and repeatable") {
    const auto fixture = make_se_fixture();
    const SemClassifier model(fixture_config(fixture));
    const auto& a = fixture.pairs[0].left;
    const auto& b = fixture.pairs[0].right;

    const Real once = model.score(a, b);
    CHECK(once >= 0.0);
    CHECK(once <= 1.0);
    CHECK(model.score(a, b) == once);
    CHECK(model.score(b, a) == once);

    std::vector<Real> results(4);
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&model, &a, &b, &results, t] { results[t] = model.score(a, b); });
    }
    for (auto& w : workers) w.join();
    for (const Real r : results) CHECK(r == once);
}

TEST_CASE("classifier rejects empty and oversized inputs") {
    const auto fixture = make_se_fixture();
    SeConfig config = fixture_config(fixture);
    config.max_len = 4;
    const SemClassifier model(config);
    const std::vector<int> ok = {3, 4, 5};
    const std::vector<int> long_text(5, 3);

    CHECK_THROWS_AS((void)model.score({}, ok), std::invalid_argument);
    CHECK_THROWS_AS((void)model.score(ok, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)model.score(ok, long_text), std::invalid_argument);
    CHECK_THROWS_AS((void)model.batch_loss({{ok, ok}}), std::invalid_argument);
    CHECK_THROWS_AS((void)model.batch_loss({}), std::invalid_argument);
}

TEST_CASE("seeds pin the classifier exactly") {
    const auto fixture = make_se_fixture();
    const SemClassifier one(fixture_config(fixture));
    const SemClassifier two(fixture_config(fixture));
    const SemClassifier other(fixture_config(fixture, 8));
    const auto& p = fixture.pairs[3];
    CHECK(one.score(p.left, p.right) == two.score(p.left, p.right));
    CHECK(one.score(p.left, p.right) != other.score(p.left, p.right));
}

TEST_CASE("contrastive training separates paraphrases from strangers") {
    const auto fixture = make_se_fixture();
    SemClassifier model(fixture_config(fixture));
    OptimizerConfig oc;
    Optimizer opt(oc, model.params().tensors());

    std::vector<Real> curve;
    for (int epoch = 0; epoch < 5; ++epoch) {
        Real total = 0.0;
        int steps = 0;
        for (std::size_t i = 0; i + 1 < fixture.pairs.size(); i += 10) {
            const std::vector<SePair> batch(
                fixture.pairs.begin() + i,
                fixture.pairs.begin() + std::min(fixture.pairs.size(), i + 10));
            const auto result = model.train_step(batch, opt);
            REQUIRE(result.applied);
            total += result.loss;
            ++steps;
        }
        curve.push_back(total / static_cast<Real>(steps));
    }

    // Mean epoch loss keeps falling, also after adjacent-pair smoothing.
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        CHECK(curve[i] > curve[i + 1]);
    }
    for (std::size_t i = 0; i + 2 < curve.size(); ++i) {
        CHECK(0.5 * (curve[i] + curve[i + 1]) > 0.5 * (curve[i + 1] + curve[i + 2]));
    }

    // Every training sentence passes the acceptance threshold against
    // itself once trained.
    Real min_self = 1.0;
    for (const auto& p : fixture.pairs) {
        min_self = std::min(min_self, model.score(p.left, p.left));
        min_self = std::min(min_self, model.score(p.right, p.right));
    }
    CHECK(min_self > 0.9);
    CHECK(min_self >= 0.95);

    // A true paraphrase outranks a random pool sentence in at least
    // nine of ten triples; unrelated pairs stay clearly below self
    // scores.
    Rng rng(99);
    int wins = 0;
    int total_triples = 0;
    Real cross_sum = 0.0;
    for (std::size_t i = 0; i < fixture.pairs.size(); ++i) {
        const Real positive = model.score(fixture.pairs[i].left, fixture.pairs[i].right);
        for (int k = 0; k < 3; ++k) {
            std::size_t j = rng.below(fixture.pairs.size());
            if (j == i) j = (j + 1) % fixture.pairs.size();
            const Real negative = model.score(fixture.pairs[i].left, fixture.pairs[j].right);
            cross_sum += negative;
            if (positive > negative) ++wins;
            ++total_triples;
        }
    }
    CHECK(static_cast<Real>(wins) >= 0.9 * static_cast<Real>(total_triples));
    CHECK(cross_sum / static_cast<Real>(total_triples) < 0.9);

    // The trained classifier survives a checkpoint round trip.
    const auto path = std::filesystem::temp_directory_path() / "sem_equiv_roundtrip.json";
    save_checkpoint(path.string(), model.params(), {{"config", model.config().to_json()}});
    SemClassifier restored(fixture_config(fixture, 123));
    load_checkpoint(path.string(), restored.params());
    const auto& p = fixture.pairs[0];
    CHECK(restored.score(p.left, p.right) == model.score(p.left, p.right));
    std::filesystem::remove(path);
}
