#include "parafine/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace parafine {

std::size_t shape_numel(const Shape& shape) {
    std::size_t n = 1;
    for (const int d : shape) {
        if (d < 0) throw std::invalid_argument("negative dimension in shape " + shape_str(shape));
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

std::string shape_str(const Shape& shape) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << "x";
        os << shape[i];
    }
    os << "]";
    return os.str();
}

Tensor Tensor::wrap(std::shared_ptr<TensorNode> node) {
    Tensor t;
    t.node_ = std::move(node);
    return t;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
    auto node = std::make_shared<TensorNode>();
    node->data.assign(shape_numel(shape), 0.0);
    node->shape = std::move(shape);
    node->requires_grad = requires_grad;
    return wrap(std::move(node));
}

Tensor Tensor::full(Shape shape, Real value, bool requires_grad) {
    Tensor t = zeros(std::move(shape), requires_grad);
    for (auto& v : t.node()->data) v = value;
    return t;
}

Tensor Tensor::from(Shape shape, std::vector<Real> data, bool requires_grad) {
    if (shape_numel(shape) != data.size()) {
        throw std::invalid_argument("tensor data length " + std::to_string(data.size()) +
                                    " does not match shape " + shape_str(shape));
    }
    auto node = std::make_shared<TensorNode>();
    node->shape = std::move(shape);
    node->data = std::move(data);
    node->requires_grad = requires_grad;
    return wrap(std::move(node));
}

Tensor Tensor::scalar(Real value, bool requires_grad) {
    return from({1}, {value}, requires_grad);
}

Tensor Tensor::randn(Shape shape, Rng& rng, Real stddev, bool requires_grad) {
    Tensor t = zeros(std::move(shape), requires_grad);
    for (auto& v : t.node()->data) v = rng.normal(0.0, stddev);
    return t;
}

int Tensor::rows() const {
    const Shape& s = node_->shape;
    if (s.size() == 2) return s[0];
    if (s.size() == 1) return 1;
    throw std::invalid_argument("rows() on tensor of shape " + shape_str(s));
}

int Tensor::cols() const {
    const Shape& s = node_->shape;
    if (s.size() == 2) return s[1];
    if (s.size() == 1) return s[0];
    throw std::invalid_argument("cols() on tensor of shape " + shape_str(s));
}

std::span<const Real> Tensor::grad() const {
    node_->ensure_grad();
    return node_->grad;
}

Real Tensor::item() const {
    if (numel() != 1) {
        throw std::invalid_argument("item() on non-scalar tensor of shape " + shape_str(shape()));
    }
    return node_->data[0];
}

Real Tensor::at(int r, int c) const {
    return node_->data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols()) +
                       static_cast<std::size_t>(c)];
}

bool Tensor::all_finite() const {
    for (const Real v : node_->data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Tensor Tensor::detached_copy() const {
    auto node = std::make_shared<TensorNode>();
    node->shape = node_->shape;
    node->data = node_->data;
    node->requires_grad = false;
    return wrap(std::move(node));
}

}  // namespace parafine
