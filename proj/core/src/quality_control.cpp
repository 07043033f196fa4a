#include "parafine/quality_control.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "parafine/ops.hpp"

namespace parafine {

void QcConfig::validate() const {
    if (!(eta0 > 0.0)) throw std::invalid_argument("base step size must be positive");
    if (!(gamma > 1.0)) throw std::invalid_argument("step growth factor must exceed 1");
    if (!(tau > 0.0) || tau > 1.0) throw std::invalid_argument("semantic threshold outside (0,1]");
    if (patience < 1) throw std::invalid_argument("patience must be at least 1");
    if (max_iterations < 1) throw std::invalid_argument("iteration cap must be at least 1");
}

std::string QcConfig::to_json() const {
    nlohmann::json doc;
    doc["eta0"] = eta0;
    doc["gamma"] = gamma;
    doc["tau"] = tau;
    doc["patience"] = patience;
    doc["max_iterations"] = max_iterations;
    return doc.dump();
}

QcConfig QcConfig::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    QcConfig config;
    config.eta0 = doc.at("eta0").get<Real>();
    config.gamma = doc.at("gamma").get<Real>();
    config.tau = doc.at("tau").get<Real>();
    config.patience = doc.at("patience").get<int>();
    config.max_iterations = doc.at("max_iterations").get<int>();
    config.validate();
    return config;
}

std::optional<AcceptedCandidate> adaptive_step_search(RefinableSystem& system,
                                                      const std::vector<Real>& theta,
                                                      const std::vector<Real>& gradient,
                                                      Real current_loss, const QcConfig& config,
                                                      std::vector<QcCandidate>* trace) {
    if (gradient.size() != theta.size()) {
        throw std::invalid_argument("gradient length " + std::to_string(gradient.size()) +
                                    " does not match parameter length " +
                                    std::to_string(theta.size()));
    }
    Real eta = config.eta0;
    for (int attempt = 0; attempt < config.patience; ++attempt) {
        std::vector<Real> candidate(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) {
            candidate[i] = theta[i] - eta * gradient[i];
        }
        const auto eval = system.evaluate(candidate);
        const bool ok = eval.loss < current_loss && eval.semantic >= config.tau;
        if (trace) trace->push_back({eval.loss, eta, eval.semantic, ok});
        if (ok) return AcceptedCandidate{std::move(candidate), eval.loss};
        eta *= config.gamma;
    }
    return std::nullopt;
}

RefineResult refine(RefinableSystem& system, std::vector<Real> theta0, const QcConfig& config) {
    config.validate();
    RefineResult result;
    result.theta = std::move(theta0);
    const auto start = system.evaluate(result.theta);
    result.initial_loss = start.loss;
    result.final_loss = start.loss;

    Real current = start.loss;
    for (int iteration = 0; iteration < config.max_iterations; ++iteration) {
        const auto gradient = system.gradient(result.theta);
        bool finite = gradient.size() == result.theta.size();
        for (const Real g : gradient) {
            if (!std::isfinite(g)) {
                finite = false;
                break;
            }
        }
        if (!finite) break;
        auto step = adaptive_step_search(system, result.theta, gradient, current, config,
                                         &result.trace);
        if (!step) break;
        result.theta = std::move(step->theta);
        current = step->loss;
        result.final_loss = current;
        ++result.accepted_steps;
    }
    result.evaluations = result.trace.size();
    return result;
}

std::string QcOutcome::trace_json() const {
    nlohmann::json doc;
    doc["mse_before"] = mse_before;
    doc["mse_after"] = mse_after;
    doc["semantic"] = semantic;
    doc["accepted_steps"] = accepted_steps;
    auto& items = doc["iterations"] = nlohmann::json::array();
    for (const auto& c : trace) {
        items.push_back({{"loss", c.loss},
                         {"step", c.step},
                         {"semantic", c.semantic},
                         {"accepted", c.accepted}});
    }
    return doc.dump();
}

namespace {

// Joins the three frozen models behind the refinement interface. Theta
// is the flattened source embedding matrix; every evaluation regrows
// the paraphrase greedily from it, and the gradient flows from the
// attribute error through argmax one-hots back into theta.
class ParaphraseSystem : public RefinableSystem {
  public:
    ParaphraseSystem(const GeneratorModel& generator, const PredictorModel& predictor,
                     const SemClassifier& classifier, std::vector<int> source,
                     std::vector<Real> target_attrs_std, int max_new)
        : generator_(generator),
          predictor_(predictor),
          classifier_(classifier),
          source_(std::move(source)),
          attrs_(std::move(target_attrs_std)),
          max_new_(max_new),
          rows_(static_cast<int>(source_.size())),
          d_(generator.config().d),
          gold_(Tensor::from({static_cast<int>(attrs_.size())},
                             std::vector<Real>(attrs_.begin(), attrs_.end()))) {}

    std::vector<int> generate_at(const std::vector<Real>& theta) const {
        return generator_.generate_from_embeddings(unflatten(theta, false), attrs_, max_new_);
    }

    Evaluation evaluate(const std::vector<Real>& theta) override {
        const auto emitted = generate_at(theta);
        if (emitted.empty()) {
            return {std::numeric_limits<Real>::infinity(), 0.0};
        }
        const Tensor predicted =
            Tensor::from({static_cast<int>(attrs_.size())}, predictor_.predict(emitted));
        return {mse(predicted, gold_).item(), classifier_.score(source_, emitted)};
    }

    std::vector<Real> gradient(const std::vector<Real>& theta) override {
        const Tensor t = unflatten(theta, true);
        const auto emitted = generator_.generate_from_embeddings(t, attrs_, max_new_);
        if (emitted.empty()) {
            return std::vector<Real>(theta.size(), 0.0);
        }
        const Tensor memory = generator_.encode_embeddings(t);
        std::vector<int> inputs = {Vocabulary::kBos};
        inputs.insert(inputs.end(), emitted.begin(), emitted.end());
        const Tensor logits = generator_.decode_logits(memory, inputs, attrs_);
        const Tensor onehot = ste_pass(slice_rows(logits, 0, static_cast<int>(emitted.size())));
        backward(mse(predictor_.predict_rows(onehot), gold_));
        const auto grad = t.grad();
        return {grad.begin(), grad.end()};
    }

  private:
    Tensor unflatten(const std::vector<Real>& theta, bool requires_grad) const {
        return Tensor::from({rows_, d_}, std::vector<Real>(theta.begin(), theta.end()),
                            requires_grad);
    }

    const GeneratorModel& generator_;
    const PredictorModel& predictor_;
    const SemClassifier& classifier_;
    const std::vector<int> source_;
    const std::vector<Real> attrs_;
    const int max_new_;
    const int rows_;
    const int d_;
    const Tensor gold_;
};

}  // namespace

QcOutcome qc_generate(const GeneratorModel& generator, const PredictorModel& predictor,
                      const SemClassifier& classifier, const std::vector<int>& source,
                      const std::vector<Real>& target_attrs_std, const QcConfig& config,
                      int max_new) {
    config.validate();
    if (source.empty()) throw std::invalid_argument("source is empty");
    if (max_new < 1) throw std::invalid_argument("must allow at least one new token");
    const int vocab = generator.config().vocab;
    if (predictor.config().vocab != vocab || classifier.config().vocab != vocab) {
        throw std::invalid_argument("models disagree on vocabulary size");
    }
    if (static_cast<int>(target_attrs_std.size()) != generator.config().attr_dim ||
        predictor.config().attr_dim != generator.config().attr_dim) {
        throw std::invalid_argument("attribute vector length does not match the models");
    }
    if (static_cast<int>(source.size()) > classifier.config().max_len) {
        throw std::invalid_argument("source exceeds the classifier window");
    }
    if (max_new > predictor.config().max_len || max_new > classifier.config().max_len) {
        throw std::invalid_argument("generation budget exceeds a scoring window");
    }

    ParaphraseSystem system(generator, predictor, classifier, source, target_attrs_std, max_new);
    const Tensor start = generator.embed_source(source);
    RefineResult refined = refine(system, {start.data().begin(), start.data().end()}, config);

    QcOutcome outcome;
    outcome.tokens = system.generate_at(refined.theta);
    if (!outcome.tokens.empty()) {
        outcome.predicted_attrs = predictor.predict(outcome.tokens);
        outcome.semantic = classifier.score(source, outcome.tokens);
    }
    outcome.mse_before = refined.initial_loss;
    outcome.mse_after = refined.final_loss;
    outcome.accepted_steps = refined.accepted_steps;
    outcome.trace = std::move(refined.trace);
    return outcome;
}

}  // namespace parafine
