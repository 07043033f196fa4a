#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "parafine/ops.hpp"

namespace parafine {

struct GradCheckReport {
    Real max_rel_error = 0.0;
    std::size_t worst_index = 0;
    std::string worst_leaf;
    bool finite = true;
    std::string detail;

    bool ok(Real tolerance) const { return finite && max_rel_error < tolerance; }
};

// Compares the backward pass of `function` against central differences at
// `point`. Relative error per coordinate is
// |analytic - difference| / (|analytic| + |difference| + 1e-12).
// Non-finite values anywhere surface as a failed report naming the
// coordinate instead of a number that could be misread as small.
GradCheckReport grad_check(const std::function<Tensor(const Tensor&)>& function,
                           const Tensor& point, Real epsilon);

// Same check for a loss that closes over several named leaves (a whole
// model). Leaves are perturbed in place and restored.
GradCheckReport grad_check_many(const std::function<Tensor()>& loss,
                                const std::vector<std::pair<std::string, Tensor>>& leaves,
                                Real epsilon);

}  // namespace parafine
