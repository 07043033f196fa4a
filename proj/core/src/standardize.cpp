#include "parafine/standardize.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace parafine {

Standardizer Standardizer::fit(const std::vector<std::vector<Real>>& vectors) {
    if (vectors.size() < 2) {
        throw std::invalid_argument("standardizer needs at least 2 vectors, got " +
                                    std::to_string(vectors.size()));
    }
    const std::size_t k = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != k) throw std::invalid_argument("standardizer: ragged attribute vectors");
    }

    Standardizer out;
    out.means_.assign(k, 0.0);
    out.stds_.assign(k, 0.0);
    const Real n = static_cast<Real>(vectors.size());
    for (const auto& v : vectors) {
        for (std::size_t j = 0; j < k; ++j) out.means_[j] += v[j];
    }
    for (std::size_t j = 0; j < k; ++j) out.means_[j] /= n;
    for (const auto& v : vectors) {
        for (std::size_t j = 0; j < k; ++j) {
            const Real d = v[j] - out.means_[j];
            out.stds_[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        const Real var = out.stds_[j] / n;
        if (var < 1e-12) {
            out.stds_[j] = 1.0;
            out.degenerate_.push_back(static_cast<int>(j));
        } else {
            out.stds_[j] = std::sqrt(var);
        }
    }
    return out;
}

std::vector<Real> Standardizer::apply(const std::vector<Real>& raw) const {
    if (raw.size() != means_.size()) {
        throw std::invalid_argument("standardizer: vector has " + std::to_string(raw.size()) +
                                    " dims, fitted on " + std::to_string(means_.size()));
    }
    std::vector<Real> out(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) out[j] = (raw[j] - means_[j]) / stds_[j];
    return out;
}

std::vector<Real> Standardizer::invert(const std::vector<Real>& standardized) const {
    if (standardized.size() != means_.size()) {
        throw std::invalid_argument("standardizer: vector has " +
                                    std::to_string(standardized.size()) + " dims, fitted on " +
                                    std::to_string(means_.size()));
    }
    std::vector<Real> out(standardized.size());
    for (std::size_t j = 0; j < standardized.size(); ++j) {
        out[j] = standardized[j] * stds_[j] + means_[j];
    }
    return out;
}

std::string Standardizer::to_json() const {
    nlohmann::json doc;
    doc["means"] = means_;
    doc["stds"] = stds_;
    doc["degenerate"] = degenerate_;
    return doc.dump();
}

Standardizer Standardizer::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    Standardizer out;
    out.means_ = doc.at("means").get<std::vector<Real>>();
    out.stds_ = doc.at("stds").get<std::vector<Real>>();
    out.degenerate_ = doc.at("degenerate").get<std::vector<int>>();
    if (out.means_.size() != out.stds_.size()) {
        throw std::runtime_error("standardizer: means/stds length mismatch");
    }
    return out;
}

}  // namespace parafine
