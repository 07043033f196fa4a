#pragma once

#include <vector>

#include "parafine/tensor.hpp"

namespace parafine {

enum class OptKind { sgd, adam };

struct OptimizerConfig {
    OptKind kind = OptKind::adam;
    Real learning_rate = 1e-3;
    Real beta1 = 0.9;
    Real beta2 = 0.999;
    Real epsilon = 1e-8;
};

// What one training step reported, whichever model ran it.
struct TrainStepResult {
    Real loss = 0.0;
    bool applied = false;  // false: non-finite loss or gradient, nothing moved
};

// In-place parameter updates with per-tensor Adam moment state. A step
// containing any non-finite gradient is skipped whole: no parameter moves
// and no moment decays, so one overshoot cannot poison later steps.
class Optimizer {
public:
    Optimizer(OptimizerConfig config, std::vector<Tensor> params);

    // Returns false when the step was skipped over a non-finite gradient.
    bool step();
    void zero_grad();

    // Schedules (decay, warmup) live with the caller; moments are kept.
    void set_learning_rate(Real lr) { config_.learning_rate = lr; }
    Real learning_rate() const { return config_.learning_rate; }

    std::size_t skipped_steps() const { return skipped_; }
    const std::vector<Tensor>& params() const { return params_; }

private:
    OptimizerConfig config_;
    std::vector<Tensor> params_;
    std::vector<std::vector<Real>> m_;
    std::vector<std::vector<Real>> v_;
    long steps_ = 0;
    std::size_t skipped_ = 0;
};

}  // namespace parafine
