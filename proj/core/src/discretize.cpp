#include "parafine/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace parafine {
namespace {

constexpr int kLloydCap = 100;

// 1-D k-means over distinct values with multiplicities. k <= number of
// distinct values, so every cluster can stay non-empty.
std::vector<Real> kmeans_1d(const std::vector<Real>& distinct, const std::vector<int>& weight,
                            int k) {
    const int n = static_cast<int>(distinct.size());
    std::vector<Real> centers(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const int idx = static_cast<int>((static_cast<double>(j) + 0.5) * n / k);
        centers[static_cast<std::size_t>(j)] = distinct[static_cast<std::size_t>(std::min(idx, n - 1))];
    }
    // Quantile init can collide on skewed data; force strictly increasing
    // start points so no cluster begins dead.
    for (int j = 1; j < k; ++j) {
        if (centers[static_cast<std::size_t>(j)] <= centers[static_cast<std::size_t>(j - 1)]) {
            const Real prev = centers[static_cast<std::size_t>(j - 1)];
            auto it = std::upper_bound(distinct.begin(), distinct.end(), prev);
            centers[static_cast<std::size_t>(j)] = it != distinct.end() ? *it : prev + 1.0;
        }
    }

    std::vector<int> assign(static_cast<std::size_t>(n));
    for (int iter = 0; iter < kLloydCap; ++iter) {
        for (int i = 0; i < n; ++i) {
            const Real v = distinct[static_cast<std::size_t>(i)];
            int best = 0;
            Real best_d = std::abs(v - centers[0]);
            for (int j = 1; j < k; ++j) {
                const Real d = std::abs(v - centers[static_cast<std::size_t>(j)]);
                if (d < best_d) {
                    best_d = d;
                    best = j;
                }
            }
            assign[static_cast<std::size_t>(i)] = best;
        }

        std::vector<Real> sum(static_cast<std::size_t>(k), 0.0);
        std::vector<long> count(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            const auto j = static_cast<std::size_t>(assign[static_cast<std::size_t>(i)]);
            sum[j] += distinct[static_cast<std::size_t>(i)] * weight[static_cast<std::size_t>(i)];
            count[j] += weight[static_cast<std::size_t>(i)];
        }

        std::vector<Real> next(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            if (count[static_cast<std::size_t>(j)] > 0) {
                next[static_cast<std::size_t>(j)] =
                    sum[static_cast<std::size_t>(j)] / static_cast<Real>(count[static_cast<std::size_t>(j)]);
            } else {
                // Reseed at the value farthest from its nearest center.
                int far_i = 0;
                Real far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const Real v = distinct[static_cast<std::size_t>(i)];
                    Real nearest = std::abs(v - centers[0]);
                    for (int c = 1; c < k; ++c) {
                        nearest = std::min(nearest, std::abs(v - centers[static_cast<std::size_t>(c)]));
                    }
                    if (nearest > far_d) {
                        far_d = nearest;
                        far_i = i;
                    }
                }
                next[static_cast<std::size_t>(j)] = distinct[static_cast<std::size_t>(far_i)];
            }
        }
        std::sort(next.begin(), next.end());
        if (next == centers) break;
        centers = std::move(next);
    }
    return centers;
}

}  // namespace

Discretizer Discretizer::fit(const std::vector<std::vector<Real>>& vectors, int bins) {
    if (vectors.empty()) throw std::invalid_argument("discretizer: empty corpus");
    if (bins < 1) throw std::invalid_argument("discretizer: bins must be positive");
    const std::size_t k = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != k) throw std::invalid_argument("discretizer: ragged attribute vectors");
        for (const Real x : v) {
            if (!std::isfinite(x)) throw std::invalid_argument("discretizer: non-finite value");
        }
    }

    Discretizer out;
    out.centers_.resize(k);
    std::vector<Real> column(vectors.size());
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < vectors.size(); ++i) column[i] = vectors[i][j];
        std::sort(column.begin(), column.end());

        std::vector<Real> distinct;
        std::vector<int> weight;
        for (const Real v : column) {
            if (distinct.empty() || v != distinct.back()) {
                distinct.push_back(v);
                weight.push_back(1);
            } else {
                ++weight.back();
            }
        }

        const int k_eff = std::min<int>(bins, static_cast<int>(distinct.size()));
        if (static_cast<int>(distinct.size()) <= k_eff) {
            out.centers_[j] = distinct;
        } else {
            out.centers_[j] = kmeans_1d(distinct, weight, k_eff);
        }
    }
    return out;
}

int Discretizer::bin_count(int attribute) const {
    if (attribute < 0 || static_cast<std::size_t>(attribute) >= centers_.size()) {
        throw std::out_of_range("discretizer: attribute id " + std::to_string(attribute));
    }
    return static_cast<int>(centers_[static_cast<std::size_t>(attribute)].size());
}

int Discretizer::assign(int attribute, Real value) const {
    const auto& c = centers_[static_cast<std::size_t>(attribute)];
    int best = 0;
    Real best_d = std::abs(value - c[0]);
    for (std::size_t b = 1; b < c.size(); ++b) {
        const Real d = std::abs(value - c[b]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(b);
        }
    }
    return best;
}

std::vector<int> Discretizer::discretize(const std::vector<Real>& values) const {
    if (values.size() != centers_.size()) {
        throw std::invalid_argument("discretizer: vector has " + std::to_string(values.size()) +
                                    " dims, fitted on " + std::to_string(centers_.size()));
    }
    std::vector<int> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        out[j] = assign(static_cast<int>(j), values[j]);
    }
    return out;
}

Real Discretizer::bin_center(int attribute, int bin) const {
    const int count = bin_count(attribute);
    if (bin < 0 || bin >= count) {
        throw std::out_of_range("discretizer: bin " + std::to_string(bin) + " of attribute " +
                                std::to_string(attribute) + " with " + std::to_string(count) +
                                " bins");
    }
    return centers_[static_cast<std::size_t>(attribute)][static_cast<std::size_t>(bin)];
}

std::vector<Real> Discretizer::debin(const std::vector<int>& bins) const {
    if (bins.size() != centers_.size()) {
        throw std::invalid_argument("discretizer: vector has " + std::to_string(bins.size()) +
                                    " dims, fitted on " + std::to_string(centers_.size()));
    }
    std::vector<Real> out(bins.size());
    for (std::size_t j = 0; j < bins.size(); ++j) {
        out[j] = bin_center(static_cast<int>(j), bins[j]);
    }
    return out;
}

std::string Discretizer::to_json() const {
    nlohmann::json doc;
    doc["centers"] = centers_;
    return doc.dump();
}

Discretizer Discretizer::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    Discretizer out;
    out.centers_ = doc.at("centers").get<std::vector<std::vector<Real>>>();
    for (const auto& c : out.centers_) {
        if (c.empty()) throw std::runtime_error("discretizer: attribute with no bins");
        for (std::size_t b = 1; b < c.size(); ++b) {
            if (c[b] <= c[b - 1]) throw std::runtime_error("discretizer: centers not increasing");
        }
    }
    return out;
}

}  // namespace parafine
