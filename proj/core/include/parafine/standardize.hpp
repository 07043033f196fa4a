#pragma once

#include <string>
#include <vector>

#include "parafine/tensor.hpp"

namespace parafine {

// Per-attribute affine transform to mean 0, variance 1 (population
// variance). A constant attribute gets std forced to 1 and its id
// recorded, so applying the transform zeroes it instead of dividing by 0.
class Standardizer {
public:
    static Standardizer fit(const std::vector<std::vector<Real>>& vectors);

    std::vector<Real> apply(const std::vector<Real>& raw) const;
    std::vector<Real> invert(const std::vector<Real>& standardized) const;

    std::size_t dims() const { return means_.size(); }
    const std::vector<Real>& means() const { return means_; }
    const std::vector<Real>& stds() const { return stds_; }
    const std::vector<int>& degenerate_ids() const { return degenerate_; }

    std::string to_json() const;
    static Standardizer from_json(const std::string& text);

private:
    std::vector<Real> means_;
    std::vector<Real> stds_;
    std::vector<int> degenerate_;
};

}  // namespace parafine
