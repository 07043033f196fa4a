#pragma once

#include <string>
#include <vector>

#include "parafine/tensor.hpp"

namespace parafine {

// Per-attribute one-dimensional k-means binning. Each attribute gets
// exactly min(bins, distinct-values) strictly increasing centers;
// discretize maps to the nearest center (lower index on ties) and
// bin_center recovers the representative value for de-binning.
// Fitting is fully deterministic: quantile init over the sorted values,
// a fixed Lloyd iteration cap, farthest-point reseeding of emptied
// clusters.
class Discretizer {
public:
    static Discretizer fit(const std::vector<std::vector<Real>>& vectors, int bins = 20);

    std::size_t dims() const { return centers_.size(); }
    int bin_count(int attribute) const;
    int assign(int attribute, Real value) const;
    std::vector<int> discretize(const std::vector<Real>& values) const;
    Real bin_center(int attribute, int bin) const;
    std::vector<Real> debin(const std::vector<int>& bins) const;
    const std::vector<std::vector<Real>>& centers() const { return centers_; }

    std::string to_json() const;
    static Discretizer from_json(const std::string& text);

private:
    std::vector<std::vector<Real>> centers_;  // ascending per attribute
};

}  // namespace parafine
