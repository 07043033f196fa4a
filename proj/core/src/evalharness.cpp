#include "parafine/evalharness.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "parafine/lexicons.hpp"

namespace parafine {

Real ClassifierScorer::score(const std::vector<int>& source,
                             const std::vector<int>& generated) const {
    if (source.empty() || generated.empty()) return 0.0;
    return classifier_.score(source, generated);
}

Real UnigramF1Scorer::score(const std::vector<int>& source,
                            const std::vector<int>& generated) const {
    if (source.empty() || generated.empty()) return 0.0;
    std::unordered_map<int, int> counts;
    for (const int t : source) ++counts[t];
    int overlap = 0;
    for (const int t : generated) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    return 2.0 * overlap / static_cast<Real>(source.size() + generated.size());
}

const char* system_name(SystemKind kind) {
    switch (kind) {
        case SystemKind::copy: return "copy";
        case SystemKind::reference: return "reference";
        case SystemKind::uncontrolled: return "uncontrolled";
        case SystemKind::conditioned: return "conditioned";
        case SystemKind::conditioned_qc: return "conditioned+qc";
    }
    throw std::invalid_argument("unknown system kind");
}

const char* eval_mode_name(EvalMode mode) {
    switch (mode) {
        case EvalMode::standard: return "standard";
        case EvalMode::novel_target: return "novel-target";
    }
    throw std::invalid_argument("unknown evaluation mode");
}

EvalItem make_eval_item(const ParaphrasePair& pair, const Vocabulary& vocab,
                        const Standardizer& standardizer, const Lexicons& lexicons) {
    EvalItem item;
    item.source_text = pair.source;
    item.target_text = pair.target;
    item.source = vocab.encode(pair.source, lexicons);
    item.target = vocab.encode(pair.target, lexicons);
    item.source_attrs_std = standardizer.apply(pair.source_attrs);
    item.target_attrs_std = standardizer.apply(pair.target_attrs);
    return item;
}

std::vector<EvalItem> make_eval_items(const std::vector<ParaphrasePair>& pairs,
                                      const Vocabulary& vocab, const Standardizer& standardizer,
                                      const Lexicons& lexicons) {
    std::vector<EvalItem> items;
    items.reserve(pairs.size());
    for (const auto& pair : pairs) {
        items.push_back(make_eval_item(pair, vocab, standardizer, lexicons));
    }
    return items;
}

std::vector<std::size_t> derangement(std::size_t n, Rng rng) {
    if (n < 2) throw std::invalid_argument("a derangement needs at least two items");
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    // Single-cycle shuffle: drawing strictly below i keeps every element
    // off its own position.
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(p[i], p[j]);
    }
    return p;
}

std::vector<EvalItem> novel_target_shuffle(const std::vector<EvalItem>& items,
                                           std::uint64_t seed) {
    const auto perm = derangement(items.size(), Rng(seed));
    std::vector<EvalItem> shuffled = items;
    for (std::size_t i = 0; i < items.size(); ++i) {
        shuffled[i].target_attrs_std = items[perm[i]].target_attrs_std;
    }
    return shuffled;
}

namespace {

// Standardized attributes of a decoded generation; empty when there is
// nothing measurable in it.
std::optional<std::vector<Real>> measure_tokens(const std::vector<int>& tokens,
                                                const Vocabulary& vocab,
                                                const Standardizer& standardizer,
                                                const Lexicons& lexicons) {
    if (tokens.empty()) return std::nullopt;
    const std::string text = vocab.decode(tokens);
    try {
        return standardizer.apply(extract_attributes(text, lexicons));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

std::vector<Real> normalized01(const std::vector<Real>& values, bool* degenerate) {
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const Real lo = *lo_it;
    const Real hi = *hi_it;
    if (hi == lo) {
        if (degenerate) *degenerate = true;
        return std::vector<Real>(values.size(), 0.5);
    }
    std::vector<Real> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / (hi - lo);
    return out;
}

}  // namespace

std::optional<Real> mse_attrs(const std::string& generated_text,
                              const std::vector<Real>& reference_std,
                              const Standardizer& standardizer, const Lexicons& lexicons) {
    std::vector<Real> measured;
    try {
        measured = standardizer.apply(extract_attributes(generated_text, lexicons));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    if (measured.size() != reference_std.size()) {
        throw std::invalid_argument("reference vector length does not match the attribute set");
    }
    Real total = 0.0;
    for (std::size_t i = 0; i < measured.size(); ++i) {
        const Real d = measured[i] - reference_std[i];
        total += d * d;
    }
    return total / static_cast<Real>(measured.size());
}

GroupMse group_breakdown(const std::vector<Real>& per_attribute_mse) {
    if (static_cast<int>(per_attribute_mse.size()) != kAttributeCount) {
        throw std::invalid_argument("expected one value per registry attribute");
    }
    Real sums[3] = {0.0, 0.0, 0.0};
    int counts[3] = {0, 0, 0};
    for (int a = 0; a < kAttributeCount; ++a) {
        const int g = static_cast<int>(group_of(a));
        sums[g] += per_attribute_mse[static_cast<std::size_t>(a)];
        ++counts[g];
    }
    GroupMse out;
    out.lexical = sums[static_cast<int>(AttrGroup::lexical)] /
                  counts[static_cast<int>(AttrGroup::lexical)];
    out.syntactic = sums[static_cast<int>(AttrGroup::syntactic)] /
                    counts[static_cast<int>(AttrGroup::syntactic)];
    out.discourse = sums[static_cast<int>(AttrGroup::discourse)] /
                    counts[static_cast<int>(AttrGroup::discourse)];
    return out;
}

std::vector<Real> overall_scores(const std::vector<Real>& semantic,
                                 const std::vector<Real>& mse_target,
                                 const std::vector<Real>& mse_source, bool* degenerate) {
    if (semantic.size() != mse_target.size() || semantic.size() != mse_source.size()) {
        throw std::invalid_argument("metric vectors differ in length");
    }
    if (semantic.empty()) throw std::invalid_argument("no systems to score");
    if (degenerate) *degenerate = false;
    const auto norm_target = normalized01(mse_target, degenerate);
    const auto norm_source = normalized01(mse_source, degenerate);
    std::vector<Real> out(semantic.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (semantic[i] + norm_source[i] + (1.0 - norm_target[i])) / 3.0;
    }
    return out;
}

std::string EvalReport::to_json() const {
    nlohmann::json doc;
    doc["mode"] = mode;
    doc["degenerate_normalization"] = degenerate_normalization;
    auto& rows = doc["systems"] = nlohmann::json::array();
    for (const auto& s : systems) {
        rows.push_back({{"system", s.system},
                        {"semantic", s.semantic},
                        {"mse_target", s.mse_target},
                        {"mse_source", s.mse_source},
                        {"overall", s.overall},
                        {"lexical", s.lexical},
                        {"syntactic", s.syntactic},
                        {"discourse", s.discourse},
                        {"samples", s.samples},
                        {"unmeasurable", s.unmeasurable}});
    }
    return doc.dump(2);
}

EvalReport EvalReport::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    EvalReport report;
    report.mode = doc.at("mode").get<std::string>();
    report.degenerate_normalization = doc.at("degenerate_normalization").get<bool>();
    for (const auto& row : doc.at("systems")) {
        SystemReport s;
        s.system = row.at("system").get<std::string>();
        s.semantic = row.at("semantic").get<Real>();
        s.mse_target = row.at("mse_target").get<Real>();
        s.mse_source = row.at("mse_source").get<Real>();
        s.overall = row.at("overall").get<Real>();
        s.lexical = row.at("lexical").get<Real>();
        s.syntactic = row.at("syntactic").get<Real>();
        s.discourse = row.at("discourse").get<Real>();
        s.samples = row.at("samples").get<int>();
        s.unmeasurable = row.at("unmeasurable").get<int>();
        report.systems.push_back(std::move(s));
    }
    return report;
}

std::string EvalReport::to_csv() const {
    std::string out =
        "system,semantic,mse_target,mse_source,overall,lexical,syntactic,discourse,"
        "samples,unmeasurable\n";
    char buffer[512];
    for (const auto& s : systems) {
        std::snprintf(buffer, sizeof(buffer),
                      "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n", s.system.c_str(),
                      s.semantic, s.mse_target, s.mse_source, s.overall, s.lexical, s.syntactic,
                      s.discourse, s.samples, s.unmeasurable);
        out += buffer;
    }
    return out;
}

namespace {

std::vector<int> produce_output(SystemKind kind, const EvalItem& item,
                                const EvalContext& context) {
    switch (kind) {
        case SystemKind::copy:
            return item.source;
        case SystemKind::reference:
            return item.target;
        case SystemKind::uncontrolled:
            return context.uncontrolled->generate(item.source, item.target_attrs_std,
                                                  context.config.max_new);
        case SystemKind::conditioned:
            return context.conditioned->generate(item.source, item.target_attrs_std,
                                                 context.config.max_new);
        case SystemKind::conditioned_qc:
            return qc_generate(*context.conditioned, *context.predictor, *context.classifier,
                               item.source, item.target_attrs_std, context.config.qc,
                               context.config.max_new)
                .tokens;
    }
    throw std::invalid_argument("unknown system kind");
}

void require_models(SystemKind kind, const EvalContext& context) {
    const auto missing = [&](const char* what) {
        throw std::invalid_argument(std::string(system_name(kind)) + " needs a " + what);
    };
    switch (kind) {
        case SystemKind::copy:
        case SystemKind::reference:
            return;
        case SystemKind::uncontrolled:
            if (!context.uncontrolled) missing("generator trained without conditioning");
            return;
        case SystemKind::conditioned:
            if (!context.conditioned) missing("conditioned generator");
            return;
        case SystemKind::conditioned_qc:
            if (!context.conditioned) missing("conditioned generator");
            if (!context.predictor) missing("attribute predictor");
            if (!context.classifier) missing("equivalence classifier");
            return;
    }
}

}  // namespace

EvalReport run_eval(const std::vector<SystemKind>& systems, const std::vector<EvalItem>& items,
                    EvalMode mode, const EvalContext& context) {
    if (systems.empty()) throw std::invalid_argument("no systems requested");
    if (items.empty()) throw std::invalid_argument("no evaluation items");
    for (const SystemKind kind : systems) require_models(kind, context);

    const std::vector<EvalItem>* used = &items;
    std::vector<EvalItem> shuffled;
    if (mode == EvalMode::novel_target) {
        shuffled = novel_target_shuffle(items, context.config.shuffle_seed);
        used = &shuffled;
    }

    EvalReport report;
    report.mode = eval_mode_name(mode);
    const std::size_t k = kAttributeCount;
    const int n = static_cast<int>(used->size());

    for (const SystemKind kind : systems) {
        std::vector<Real> target_sq(k, 0.0);
        std::vector<Real> source_sq(k, 0.0);
        Real semantic_total = 0.0;
        int unmeasurable = 0;

        for (const EvalItem& item : *used) {
            const auto tokens = produce_output(kind, item, context);
            semantic_total += context.scorer.score(item.source, tokens);
            const auto measured =
                measure_tokens(tokens, context.vocab, context.standardizer, context.lexicons);
            if (measured) {
                for (std::size_t a = 0; a < k; ++a) {
                    const Real dt = (*measured)[a] - item.target_attrs_std[a];
                    const Real ds = (*measured)[a] - item.source_attrs_std[a];
                    target_sq[a] += dt * dt;
                    source_sq[a] += ds * ds;
                }
            } else {
                ++unmeasurable;
                for (std::size_t a = 0; a < k; ++a) {
                    target_sq[a] += context.config.penalty;
                    source_sq[a] += context.config.penalty;
                }
            }
        }

        std::vector<Real> per_attr_target(k);
        std::vector<Real> per_attr_source(k);
        for (std::size_t a = 0; a < k; ++a) {
            per_attr_target[a] = target_sq[a] / n;
            per_attr_source[a] = source_sq[a] / n;
        }
        const auto mean_of = [](const std::vector<Real>& v) {
            Real t = 0.0;
            for (const Real x : v) t += x;
            return t / static_cast<Real>(v.size());
        };
        const auto pooled = [n, k](const std::vector<Real>& sq) {
            Real t = 0.0;
            for (const Real x : sq) t += x;
            return t / static_cast<Real>(n * k);
        };

        SystemReport row;
        row.system = system_name(kind);
        row.semantic = semantic_total / n;
        if (context.config.mse_mode == MseMode::macro) {
            row.mse_target = mean_of(per_attr_target);
            row.mse_source = mean_of(per_attr_source);
        } else {
            row.mse_target = pooled(target_sq);
            row.mse_source = pooled(source_sq);
        }
        const GroupMse groups = group_breakdown(per_attr_target);
        row.lexical = groups.lexical;
        row.syntactic = groups.syntactic;
        row.discourse = groups.discourse;
        row.samples = n;
        row.unmeasurable = unmeasurable;
        report.systems.push_back(std::move(row));
    }

    std::vector<Real> semantic(report.systems.size());
    std::vector<Real> mse_t(report.systems.size());
    std::vector<Real> mse_s(report.systems.size());
    for (std::size_t i = 0; i < report.systems.size(); ++i) {
        semantic[i] = report.systems[i].semantic;
        mse_t[i] = report.systems[i].mse_target;
        mse_s[i] = report.systems[i].mse_source;
    }
    const auto composite = overall_scores(semantic, mse_t, mse_s,
                                          &report.degenerate_normalization);
    for (std::size_t i = 0; i < report.systems.size(); ++i) {
        report.systems[i].overall = composite[i];
    }
    return report;
}

}  // namespace parafine
