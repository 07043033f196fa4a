#include "parafine/grad_check.hpp"

#include <cmath>
#include <limits>

namespace parafine {
namespace {

constexpr Real kGuard = 1e-12;

void flag_non_finite(GradCheckReport& report, const std::string& leaf, std::size_t index,
                     const char* what) {
    report.finite = false;
    report.max_rel_error = std::numeric_limits<Real>::infinity();
    report.worst_leaf = leaf;
    report.worst_index = index;
    report.detail = std::string(what) + " non-finite at " + (leaf.empty() ? "input" : leaf) + "[" +
                    std::to_string(index) + "]";
}

// Shared core: evaluate once for the analytic gradients, then walk every
// coordinate of every leaf with central differences.
GradCheckReport run_check(const std::function<Tensor()>& loss,
                          const std::vector<std::pair<std::string, Tensor>>& leaves, Real epsilon) {
    GradCheckReport report;

    for (const auto& [name, leaf] : leaves) {
        auto h = leaf.handle();
        h->grad.clear();
    }
    Tensor base = loss();
    if (!std::isfinite(base.item())) {
        flag_non_finite(report, "loss", 0, "loss value");
        return report;
    }
    backward(base);

    std::vector<std::vector<Real>> analytic;
    analytic.reserve(leaves.size());
    for (const auto& [name, leaf] : leaves) {
        std::vector<Real> g(leaf.numel(), 0.0);
        if (!leaf.grad().empty()) g.assign(leaf.grad().begin(), leaf.grad().end());
        analytic.push_back(std::move(g));
    }

    for (std::size_t li = 0; li < leaves.size(); ++li) {
        const std::string& name = leaves[li].first;
        auto node = leaves[li].second.handle();
        for (std::size_t i = 0; i < node->data.size(); ++i) {
            const Real saved = node->data[i];
            node->data[i] = saved + epsilon;
            const Real up = loss().item();
            node->data[i] = saved - epsilon;
            const Real down = loss().item();
            node->data[i] = saved;

            if (!std::isfinite(up) || !std::isfinite(down)) {
                flag_non_finite(report, name, i, "perturbed loss");
                return report;
            }
            const Real numeric = (up - down) / (2.0 * epsilon);
            const Real a = analytic[li][i];
            if (!std::isfinite(a)) {
                flag_non_finite(report, name, i, "analytic gradient");
                return report;
            }
            const Real rel = std::abs(a - numeric) / (std::abs(a) + std::abs(numeric) + kGuard);
            if (rel > report.max_rel_error) {
                report.max_rel_error = rel;
                report.worst_index = i;
                report.worst_leaf = name;
            }
        }
    }
    return report;
}

}  // namespace

GradCheckReport grad_check(const std::function<Tensor(const Tensor&)>& function,
                           const Tensor& point, Real epsilon) {
    Tensor x = Tensor::from(point.shape(), {point.data().begin(), point.data().end()},
                            /*requires_grad=*/true);
    return run_check([&function, &x]() { return function(x); }, {{std::string(), x}}, epsilon);
}

GradCheckReport grad_check_many(const std::function<Tensor()>& loss,
                                const std::vector<std::pair<std::string, Tensor>>& leaves,
                                Real epsilon) {
    return run_check(loss, leaves, epsilon);
}

}  // namespace parafine
