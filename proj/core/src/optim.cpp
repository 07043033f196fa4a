#include "parafine/optim.hpp"

#include <cmath>

namespace parafine {

Optimizer::Optimizer(OptimizerConfig config, std::vector<Tensor> params)
    : config_(config), params_(std::move(params)) {
    m_.resize(params_.size());
    v_.resize(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) {
        m_[i].assign(params_[i].numel(), 0.0);
        v_[i].assign(params_[i].numel(), 0.0);
    }
}

bool Optimizer::step() {
    for (const Tensor& p : params_) {
        for (const Real g : p.grad()) {
            if (!std::isfinite(g)) {
                ++skipped_;
                return false;
            }
        }
    }

    ++steps_;
    const Real lr = config_.learning_rate;
    if (config_.kind == OptKind::sgd) {
        for (Tensor& p : params_) {
            auto grad = p.grad();
            if (grad.empty()) continue;
            auto data = p.mutable_data();
            for (std::size_t i = 0; i < data.size(); ++i) data[i] -= lr * grad[i];
        }
        return true;
    }

    const Real b1 = config_.beta1;
    const Real b2 = config_.beta2;
    const Real bc1 = 1.0 - std::pow(b1, static_cast<Real>(steps_));
    const Real bc2 = 1.0 - std::pow(b2, static_cast<Real>(steps_));
    for (std::size_t pi = 0; pi < params_.size(); ++pi) {
        Tensor& p = params_[pi];
        auto grad = p.grad();
        if (grad.empty()) continue;
        auto data = p.mutable_data();
        auto& m = m_[pi];
        auto& v = v_[pi];
        for (std::size_t i = 0; i < data.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
            v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
            const Real mhat = m[i] / bc1;
            const Real vhat = v[i] / bc2;
            data[i] -= lr * mhat / (std::sqrt(vhat) + config_.epsilon);
        }
    }
    return true;
}

void Optimizer::zero_grad() {
    for (Tensor& p : params_) p.zero_grad();
}

}  // namespace parafine
