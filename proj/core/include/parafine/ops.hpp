#pragma once

#include <vector>

#include "parafine/tensor.hpp"

namespace parafine {

// Reverse-mode primitives over rank-1/rank-2 tensors. Every op validates
// shapes up front and names the offending op and shapes in the diagnostic.
// Broadcasting is limited to what the models need: a rank-1 tensor of
// length `cols` broadcasts over the rows of a rank-2 operand.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, Real factor);
Tensor transpose(const Tensor& a);

Tensor relu(const Tensor& a);
Tensor softmax_rows(const Tensor& a);
Tensor layer_norm_rows(const Tensor& a, Real epsilon = 1e-5);

Tensor embedding_rows(const Tensor& table, const std::vector<int>& ids);

// Mean token-level cross-entropy of row logits against integer targets.
Tensor cross_entropy_rows(const Tensor& logits, const std::vector<int>& targets);
// Mean squared error over all elements.
Tensor mse(const Tensor& a, const Tensor& b);

Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor slice_rows(const Tensor& a, int row_begin, int row_end);
Tensor slice_cols(const Tensor& a, int col_begin, int col_end);

Tensor sum_all(const Tensor& a);
Tensor mean_rows(const Tensor& a);

// Value copy with the graph cut; gradient does not flow past it.
Tensor detach(const Tensor& a);

// Ordered record of the nodes reaching a scalar loss. Construction
// performs the topological sort (parents before children); backward()
// seeds the root with 1 and visits each node exactly once.
class GradTape {
public:
    explicit GradTape(const Tensor& root);
    void backward();
    std::size_t size() const { return order_.size(); }

private:
    std::vector<TensorNode*> order_;
    Tensor root_;
};

// Convenience: tape + sweep. The loss must be a scalar.
void backward(const Tensor& loss);

}  // namespace parafine
