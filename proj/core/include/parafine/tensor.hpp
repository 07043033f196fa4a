#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "parafine/rng.hpp"

namespace parafine {

using Real = double;
using Shape = std::vector<int>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

// One node of the define-by-run graph. Parents are recorded ahead of the
// node itself, so any traversal that follows parents yields a consistent
// topological order.
struct TensorNode {
    Shape shape;
    std::vector<Real> data;
    std::vector<Real> grad;  // allocated on first touch
    bool requires_grad = false;
    const char* op = "leaf";
    std::vector<std::shared_ptr<TensorNode>> parents;
    std::function<void(const TensorNode&)> backward_fn;

    std::size_t numel() const { return data.size(); }
    void ensure_grad() {
        if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
    }
};

// Value-semantic handle to a graph node.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, Real value, bool requires_grad = false);
    static Tensor from(Shape shape, std::vector<Real> data, bool requires_grad = false);
    static Tensor scalar(Real value, bool requires_grad = false);
    static Tensor randn(Shape shape, Rng& rng, Real stddev, bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const Shape& shape() const { return node_->shape; }
    std::size_t numel() const { return node_->numel(); }
    bool requires_grad() const { return node_->requires_grad; }
    bool is_scalar() const { return numel() == 1; }

    // Rank-2 accessors; rank-1 tensors count as a single row.
    int rows() const;
    int cols() const;

    std::span<const Real> data() const { return node_->data; }
    std::span<Real> mutable_data() { return node_->data; }
    std::span<const Real> grad() const;
    void zero_grad() { node_->grad.clear(); }

    Real item() const;
    Real at(int r, int c) const;

    bool all_finite() const;

    // Grad-free copy of the values.
    Tensor detached_copy() const;

    TensorNode* node() const { return node_.get(); }
    const std::shared_ptr<TensorNode>& handle() const { return node_; }

    static Tensor wrap(std::shared_ptr<TensorNode> node);

private:
    std::shared_ptr<TensorNode> node_;
};

}  // namespace parafine
