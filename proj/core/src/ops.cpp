#include "parafine/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace parafine {
namespace {

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
    throw std::invalid_argument(std::string(op) + ": incompatible shapes " + shape_str(a.shape()) +
                                " and " + shape_str(b.shape()));
}

[[noreturn]] void shape_error(const char* op, const Tensor& a) {
    throw std::invalid_argument(std::string(op) + ": unsupported shape " + shape_str(a.shape()));
}

bool any_requires_grad(const std::vector<Tensor>& inputs) {
    return std::any_of(inputs.begin(), inputs.end(),
                       [](const Tensor& t) { return t.requires_grad(); });
}

// Builds the result node and records it on the graph only when some
// input participates in differentiation.
Tensor make_op(const char* op, Shape shape, std::vector<Real> data, const std::vector<Tensor>& inputs,
               std::function<void(const TensorNode&)> backward_fn) {
    Tensor out = Tensor::from(std::move(shape), std::move(data));
    TensorNode* node = out.node();
    node->op = op;
    if (any_requires_grad(inputs)) {
        node->requires_grad = true;
        node->parents.reserve(inputs.size());
        for (const Tensor& t : inputs) node->parents.push_back(t.handle());
        node->backward_fn = std::move(backward_fn);
    }
    return out;
}

void accumulate(const std::shared_ptr<TensorNode>& target,
                const std::function<void(std::vector<Real>&)>& fn) {
    if (!target->requires_grad) return;
    target->ensure_grad();
    fn(target->grad);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    const bool a_is_row = a.shape().size() == 1;
    const int m = a.rows();
    const int k = a.cols();
    if (b.shape().size() != 2 || b.shape()[0] != k) shape_error("matmul", a, b);
    const int n = b.cols();

    std::vector<Real> out(static_cast<std::size_t>(m) * n, 0.0);
    const Real* pa = a.data().data();
    const Real* pb = b.data().data();
    for (int i = 0; i < m; ++i) {
        Real* po = out.data() + static_cast<std::size_t>(i) * n;
        const Real* pai = pa + static_cast<std::size_t>(i) * k;
        for (int kk = 0; kk < k; ++kk) {
            const Real av = pai[kk];
            if (av == 0.0) continue;
            const Real* pbk = pb + static_cast<std::size_t>(kk) * n;
            for (int j = 0; j < n; ++j) po[j] += av * pbk[j];
        }
    }

    Shape out_shape = a_is_row ? Shape{n} : Shape{m, n};
    auto an = a.handle();
    auto bn = b.handle();
    return make_op("matmul", std::move(out_shape), std::move(out), {a, b},
                   [an, bn, m, k, n](const TensorNode& self) {
                       const Real* g = self.grad.data();
                       accumulate(an, [&](std::vector<Real>& da) {
                           const Real* pb = bn->data.data();
                           for (int i = 0; i < m; ++i) {
                               const Real* gi = g + static_cast<std::size_t>(i) * n;
                               Real* dai = da.data() + static_cast<std::size_t>(i) * k;
                               for (int kk = 0; kk < k; ++kk) {
                                   const Real* pbk = pb + static_cast<std::size_t>(kk) * n;
                                   Real acc = 0.0;
                                   for (int j = 0; j < n; ++j) acc += gi[j] * pbk[j];
                                   dai[kk] += acc;
                               }
                           }
                       });
                       accumulate(bn, [&](std::vector<Real>& db) {
                           const Real* pa = an->data.data();
                           for (int i = 0; i < m; ++i) {
                               const Real* gi = g + static_cast<std::size_t>(i) * n;
                               const Real* pai = pa + static_cast<std::size_t>(i) * k;
                               for (int kk = 0; kk < k; ++kk) {
                                   const Real av = pai[kk];
                                   if (av == 0.0) continue;
                                   Real* dbk = db.data() + static_cast<std::size_t>(kk) * n;
                                   for (int j = 0; j < n; ++j) dbk[j] += av * gi[j];
                               }
                           }
                       });
                   });
}

namespace {

enum class Broadcast { none, row };

Broadcast elementwise_mode(const char* op, const Tensor& a, const Tensor& b) {
    if (a.shape() == b.shape()) return Broadcast::none;
    if (a.shape().size() == 2 && b.shape().size() == 1 && b.shape()[0] == a.shape()[1]) {
        return Broadcast::row;
    }
    shape_error(op, a, b);
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
    const Broadcast mode = elementwise_mode("add", a, b);
    std::vector<Real> out(a.data().begin(), a.data().end());
    const int cols = a.cols();
    if (mode == Broadcast::none) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.data()[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.data()[i % cols];
    }
    auto an = a.handle();
    auto bn = b.handle();
    return make_op("add", a.shape(), std::move(out), {a, b},
                   [an, bn, mode, cols](const TensorNode& self) {
                       accumulate(an, [&](std::vector<Real>& da) {
                           for (std::size_t i = 0; i < self.grad.size(); ++i) da[i] += self.grad[i];
                       });
                       accumulate(bn, [&](std::vector<Real>& db) {
                           if (mode == Broadcast::none) {
                               for (std::size_t i = 0; i < self.grad.size(); ++i) db[i] += self.grad[i];
                           } else {
                               for (std::size_t i = 0; i < self.grad.size(); ++i) {
                                   db[i % cols] += self.grad[i];
                               }
                           }
                       });
                   });
}

Tensor sub(const Tensor& a, const Tensor& b) {
    const Broadcast mode = elementwise_mode("sub", a, b);
    std::vector<Real> out(a.data().begin(), a.data().end());
    const int cols = a.cols();
    if (mode == Broadcast::none) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.data()[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.data()[i % cols];
    }
    auto an = a.handle();
    auto bn = b.handle();
    return make_op("sub", a.shape(), std::move(out), {a, b},
                   [an, bn, mode, cols](const TensorNode& self) {
                       accumulate(an, [&](std::vector<Real>& da) {
                           for (std::size_t i = 0; i < self.grad.size(); ++i) da[i] += self.grad[i];
                       });
                       accumulate(bn, [&](std::vector<Real>& db) {
                           if (mode == Broadcast::none) {
                               for (std::size_t i = 0; i < self.grad.size(); ++i) db[i] -= self.grad[i];
                           } else {
                               for (std::size_t i = 0; i < self.grad.size(); ++i) {
                                   db[i % cols] -= self.grad[i];
                               }
                           }
                       });
                   });
}

Tensor mul(const Tensor& a, const Tensor& b) {
    const Broadcast mode = elementwise_mode("mul", a, b);
    std::vector<Real> out(a.data().begin(), a.data().end());
    const int cols = a.cols();
    if (mode == Broadcast::none) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.data()[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.data()[i % cols];
    }
    auto an = a.handle();
    auto bn = b.handle();
    return make_op("mul", a.shape(), std::move(out), {a, b},
                   [an, bn, mode, cols](const TensorNode& self) {
                       accumulate(an, [&](std::vector<Real>& da) {
                           if (mode == Broadcast::none) {
                               for (std::size_t i = 0; i < self.grad.size(); ++i) {
                                   da[i] += self.grad[i] * bn->data[i];
                               }
                           } else {
                               for (std::size_t i = 0; i < self.grad.size(); ++i) {
                                   da[i] += self.grad[i] * bn->data[i % cols];
                               }
                           }
                       });
                       accumulate(bn, [&](std::vector<Real>& db) {
                           if (mode == Broadcast::none) {
                               for (std::size_t i = 0; i < self.grad.size(); ++i) {
                                   db[i] += self.grad[i] * an->data[i];
                               }
                           } else {
                               for (std::size_t i = 0; i < self.grad.size(); ++i) {
                                   db[i % cols] += self.grad[i] * an->data[i];
                               }
                           }
                       });
                   });
}

Tensor scale(const Tensor& a, Real factor) {
    std::vector<Real> out(a.data().begin(), a.data().end());
    for (auto& v : out) v *= factor;
    auto an = a.handle();
    return make_op("scale", a.shape(), std::move(out), {a}, [an, factor](const TensorNode& self) {
        accumulate(an, [&](std::vector<Real>& da) {
            for (std::size_t i = 0; i < self.grad.size(); ++i) da[i] += factor * self.grad[i];
        });
    });
}

Tensor transpose(const Tensor& a) {
    if (a.shape().size() != 2) shape_error("transpose", a);
    const int m = a.rows();
    const int n = a.cols();
    std::vector<Real> out(a.numel());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            out[static_cast<std::size_t>(j) * m + i] = a.data()[static_cast<std::size_t>(i) * n + j];
        }
    }
    auto an = a.handle();
    return make_op("transpose", {n, m}, std::move(out), {a}, [an, m, n](const TensorNode& self) {
        accumulate(an, [&](std::vector<Real>& da) {
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < m; ++i) {
                    da[static_cast<std::size_t>(i) * n + j] +=
                        self.grad[static_cast<std::size_t>(j) * m + i];
                }
            }
        });
    });
}

Tensor relu(const Tensor& a) {
    std::vector<Real> out(a.data().begin(), a.data().end());
    for (auto& v : out) v = v > 0.0 ? v : 0.0;
    auto an = a.handle();
    return make_op("relu", a.shape(), std::move(out), {a}, [an](const TensorNode& self) {
        accumulate(an, [&](std::vector<Real>& da) {
            for (std::size_t i = 0; i < self.grad.size(); ++i) {
                if (an->data[i] > 0.0) da[i] += self.grad[i];
            }
        });
    });
}

Tensor softmax_rows(const Tensor& a) {
    const int m = a.rows();
    const int n = a.cols();
    std::vector<Real> out(a.numel());
    for (int i = 0; i < m; ++i) {
        const Real* row = a.data().data() + static_cast<std::size_t>(i) * n;
        Real* orow = out.data() + static_cast<std::size_t>(i) * n;
        Real mx = row[0];
        for (int j = 1; j < n; ++j) mx = std::max(mx, row[j]);
        Real sum = 0.0;
        for (int j = 0; j < n; ++j) {
            orow[j] = std::exp(row[j] - mx);
            sum += orow[j];
        }
        for (int j = 0; j < n; ++j) orow[j] /= sum;
    }
    auto an = a.handle();
    return make_op("softmax", a.shape(), std::move(out), {a}, [an, m, n](const TensorNode& self) {
        accumulate(an, [&](std::vector<Real>& da) {
            for (int i = 0; i < m; ++i) {
                const Real* y = self.data.data() + static_cast<std::size_t>(i) * n;
                const Real* g = self.grad.data() + static_cast<std::size_t>(i) * n;
                Real dot = 0.0;
                for (int j = 0; j < n; ++j) dot += g[j] * y[j];
                Real* d = da.data() + static_cast<std::size_t>(i) * n;
                for (int j = 0; j < n; ++j) d[j] += y[j] * (g[j] - dot);
            }
        });
    });
}

Tensor layer_norm_rows(const Tensor& a, Real epsilon) {
    const int m = a.rows();
    const int n = a.cols();
    std::vector<Real> out(a.numel());
    std::vector<Real> inv_std(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const Real* row = a.data().data() + static_cast<std::size_t>(i) * n;
        Real mean = 0.0;
        for (int j = 0; j < n; ++j) mean += row[j];
        mean /= n;
        Real var = 0.0;
        for (int j = 0; j < n; ++j) var += (row[j] - mean) * (row[j] - mean);
        var /= n;
        const Real is = 1.0 / std::sqrt(var + epsilon);
        inv_std[static_cast<std::size_t>(i)] = is;
        Real* orow = out.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) orow[j] = (row[j] - mean) * is;
    }
    auto an = a.handle();
    return make_op("layer-norm", a.shape(), std::move(out), {a},
                   [an, m, n, inv_std](const TensorNode& self) {
                       accumulate(an, [&](std::vector<Real>& da) {
                           for (int i = 0; i < m; ++i) {
                               const Real* y = self.data.data() + static_cast<std::size_t>(i) * n;
                               const Real* g = self.grad.data() + static_cast<std::size_t>(i) * n;
                               Real g_mean = 0.0;
                               Real gy_mean = 0.0;
                               for (int j = 0; j < n; ++j) {
                                   g_mean += g[j];
                                   gy_mean += g[j] * y[j];
                               }
                               g_mean /= n;
                               gy_mean /= n;
                               const Real is = inv_std[static_cast<std::size_t>(i)];
                               Real* d = da.data() + static_cast<std::size_t>(i) * n;
                               for (int j = 0; j < n; ++j) {
                                   d[j] += is * (g[j] - g_mean - y[j] * gy_mean);
                               }
                           }
                       });
                   });
}

Tensor embedding_rows(const Tensor& table, const std::vector<int>& ids) {
    if (table.shape().size() != 2) shape_error("embedding", table);
    const int v = table.rows();
    const int d = table.cols();
    std::vector<Real> out(ids.size() * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const int id = ids[i];
        if (id < 0 || id >= v) {
            throw std::invalid_argument("embedding: id " + std::to_string(id) +
                                        " out of range for table " + shape_str(table.shape()));
        }
        std::copy_n(table.data().data() + static_cast<std::size_t>(id) * d, d,
                    out.data() + i * static_cast<std::size_t>(d));
    }
    auto tn = table.handle();
    return make_op("embedding", {static_cast<int>(ids.size()), d}, std::move(out), {table},
                   [tn, ids, d](const TensorNode& self) {
                       accumulate(tn, [&](std::vector<Real>& dt) {
                           for (std::size_t i = 0; i < ids.size(); ++i) {
                               const Real* g = self.grad.data() + i * static_cast<std::size_t>(d);
                               Real* drow = dt.data() + static_cast<std::size_t>(ids[i]) * d;
                               for (int j = 0; j < d; ++j) drow[j] += g[j];
                           }
                       });
                   });
}

Tensor cross_entropy_rows(const Tensor& logits, const std::vector<int>& targets) {
    const int m = logits.rows();
    const int n = logits.cols();
    if (static_cast<int>(targets.size()) != m) {
        throw std::invalid_argument("cross-entropy: " + std::to_string(targets.size()) +
                                    " targets for logits " + shape_str(logits.shape()));
    }
    std::vector<Real> probs(logits.numel());
    Real total = 0.0;
    for (int i = 0; i < m; ++i) {
        const int t = targets[static_cast<std::size_t>(i)];
        if (t < 0 || t >= n) {
            throw std::invalid_argument("cross-entropy: target " + std::to_string(t) +
                                        " out of range for logits " + shape_str(logits.shape()));
        }
        const Real* row = logits.data().data() + static_cast<std::size_t>(i) * n;
        Real* prow = probs.data() + static_cast<std::size_t>(i) * n;
        Real mx = row[0];
        for (int j = 1; j < n; ++j) mx = std::max(mx, row[j]);
        Real sum = 0.0;
        for (int j = 0; j < n; ++j) {
            prow[j] = std::exp(row[j] - mx);
            sum += prow[j];
        }
        for (int j = 0; j < n; ++j) prow[j] /= sum;
        total += (mx + std::log(sum)) - row[t];
    }
    auto ln = logits.handle();
    return make_op("cross-entropy", {1}, {total / m}, {logits},
                   [ln, probs = std::move(probs), targets, m, n](const TensorNode& self) {
                       accumulate(ln, [&](std::vector<Real>& dl) {
                           const Real g = self.grad[0] / m;
                           for (int i = 0; i < m; ++i) {
                               const Real* prow = probs.data() + static_cast<std::size_t>(i) * n;
                               Real* drow = dl.data() + static_cast<std::size_t>(i) * n;
                               for (int j = 0; j < n; ++j) drow[j] += g * prow[j];
                               drow[targets[static_cast<std::size_t>(i)]] -= g;
                           }
                       });
                   });
}

Tensor mse(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape()) shape_error("mse", a, b);
    const std::size_t n = a.numel();
    Real total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Real d = a.data()[i] - b.data()[i];
        total += d * d;
    }
    auto an = a.handle();
    auto bn = b.handle();
    return make_op("mse", {1}, {total / static_cast<Real>(n)}, {a, b},
                   [an, bn, n](const TensorNode& self) {
                       const Real g = self.grad[0] * 2.0 / static_cast<Real>(n);
                       accumulate(an, [&](std::vector<Real>& da) {
                           for (std::size_t i = 0; i < n; ++i) {
                               da[i] += g * (an->data[i] - bn->data[i]);
                           }
                       });
                       accumulate(bn, [&](std::vector<Real>& db) {
                           for (std::size_t i = 0; i < n; ++i) {
                               db[i] -= g * (an->data[i] - bn->data[i]);
                           }
                       });
                   });
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat-rows: no inputs");
    const int n = parts.front().cols();
    int rows = 0;
    for (const Tensor& p : parts) {
        if (p.cols() != n) shape_error("concat-rows", parts.front(), p);
        rows += p.rows();
    }
    std::vector<Real> out;
    out.reserve(static_cast<std::size_t>(rows) * n);
    for (const Tensor& p : parts) out.insert(out.end(), p.data().begin(), p.data().end());
    std::vector<std::shared_ptr<TensorNode>> handles;
    for (const Tensor& p : parts) handles.push_back(p.handle());
    return make_op("concat-rows", {rows, n}, std::move(out), parts,
                   [handles](const TensorNode& self) {
                       std::size_t offset = 0;
                       for (const auto& h : handles) {
                           const std::size_t len = h->data.size();
                           accumulate(h, [&](std::vector<Real>& d) {
                               for (std::size_t i = 0; i < len; ++i) d[i] += self.grad[offset + i];
                           });
                           offset += len;
                       }
                   });
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat-cols: no inputs");
    const int m = parts.front().rows();
    int cols = 0;
    for (const Tensor& p : parts) {
        if (p.rows() != m) shape_error("concat-cols", parts.front(), p);
        cols += p.cols();
    }
    std::vector<Real> out(static_cast<std::size_t>(m) * cols);
    int col_offset = 0;
    for (const Tensor& p : parts) {
        const int pn = p.cols();
        for (int i = 0; i < m; ++i) {
            std::copy_n(p.data().data() + static_cast<std::size_t>(i) * pn, pn,
                        out.data() + static_cast<std::size_t>(i) * cols + col_offset);
        }
        col_offset += pn;
    }
    std::vector<std::shared_ptr<TensorNode>> handles;
    std::vector<int> widths;
    for (const Tensor& p : parts) {
        handles.push_back(p.handle());
        widths.push_back(p.cols());
    }
    return make_op("concat-cols", {m, cols}, std::move(out), parts,
                   [handles, widths, m, cols](const TensorNode& self) {
                       int offset = 0;
                       for (std::size_t pi = 0; pi < handles.size(); ++pi) {
                           const int pn = widths[pi];
                           accumulate(handles[pi], [&](std::vector<Real>& d) {
                               for (int i = 0; i < m; ++i) {
                                   const Real* g =
                                       self.grad.data() + static_cast<std::size_t>(i) * cols + offset;
                                   Real* drow = d.data() + static_cast<std::size_t>(i) * pn;
                                   for (int j = 0; j < pn; ++j) drow[j] += g[j];
                               }
                           });
                           offset += pn;
                       }
                   });
}

Tensor slice_rows(const Tensor& a, int row_begin, int row_end) {
    const int m = a.rows();
    const int n = a.cols();
    if (row_begin < 0 || row_end > m || row_begin >= row_end) {
        throw std::invalid_argument("slice-rows: range [" + std::to_string(row_begin) + ", " +
                                    std::to_string(row_end) + ") on " + shape_str(a.shape()));
    }
    std::vector<Real> out(a.data().begin() + static_cast<std::size_t>(row_begin) * n,
                          a.data().begin() + static_cast<std::size_t>(row_end) * n);
    auto an = a.handle();
    return make_op("slice-rows", {row_end - row_begin, n}, std::move(out), {a},
                   [an, row_begin, n](const TensorNode& self) {
                       accumulate(an, [&](std::vector<Real>& da) {
                           Real* base = da.data() + static_cast<std::size_t>(row_begin) * n;
                           for (std::size_t i = 0; i < self.grad.size(); ++i) base[i] += self.grad[i];
                       });
                   });
}

Tensor slice_cols(const Tensor& a, int col_begin, int col_end) {
    const int m = a.rows();
    const int n = a.cols();
    if (col_begin < 0 || col_end > n || col_begin >= col_end) {
        throw std::invalid_argument("slice-cols: range [" + std::to_string(col_begin) + ", " +
                                    std::to_string(col_end) + ") on " + shape_str(a.shape()));
    }
    const int w = col_end - col_begin;
    std::vector<Real> out(static_cast<std::size_t>(m) * w);
    for (int i = 0; i < m; ++i) {
        std::copy_n(a.data().data() + static_cast<std::size_t>(i) * n + col_begin, w,
                    out.data() + static_cast<std::size_t>(i) * w);
    }
    auto an = a.handle();
    return make_op("slice-cols", {m, w}, std::move(out), {a},
                   [an, col_begin, n, w, m](const TensorNode& self) {
                       accumulate(an, [&](std::vector<Real>& da) {
                           for (int i = 0; i < m; ++i) {
                               const Real* g = self.grad.data() + static_cast<std::size_t>(i) * w;
                               Real* d = da.data() + static_cast<std::size_t>(i) * n + col_begin;
                               for (int j = 0; j < w; ++j) d[j] += g[j];
                           }
                       });
                   });
}

Tensor sum_all(const Tensor& a) {
    Real total = 0.0;
    for (const Real v : a.data()) total += v;
    auto an = a.handle();
    return make_op("sum", {1}, {total}, {a}, [an](const TensorNode& self) {
        accumulate(an, [&](std::vector<Real>& da) {
            for (auto& v : da) v += self.grad[0];
        });
    });
}

Tensor mean_rows(const Tensor& a) {
    if (a.shape().size() != 2) shape_error("mean-rows", a);
    const int m = a.rows();
    const int n = a.cols();
    std::vector<Real> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i) {
        const Real* row = a.data().data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] += row[j];
    }
    for (auto& v : out) v /= m;
    auto an = a.handle();
    return make_op("mean-rows", {n}, std::move(out), {a}, [an, m, n](const TensorNode& self) {
        accumulate(an, [&](std::vector<Real>& da) {
            for (int i = 0; i < m; ++i) {
                Real* d = da.data() + static_cast<std::size_t>(i) * n;
                for (int j = 0; j < n; ++j) d[j] += self.grad[static_cast<std::size_t>(j)] / m;
            }
        });
    });
}

Tensor detach(const Tensor& a) {
    return a.detached_copy();
}

GradTape::GradTape(const Tensor& root) : root_(root) {
    if (!root.defined() || root.numel() != 1) {
        throw std::invalid_argument("backward: loss must be a scalar, got " +
                                    (root.defined() ? shape_str(root.shape()) : std::string("<empty>")));
    }
    if (!root.requires_grad()) return;

    // Iterative post-order DFS: a node is emitted after all of its
    // parents, so order_ is topological with parents first.
    std::unordered_set<TensorNode*> visited;
    std::vector<std::pair<TensorNode*, std::size_t>> stack;
    stack.emplace_back(root.node(), 0);
    visited.insert(root.node());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            TensorNode* parent = node->parents[next].get();
            ++next;
            if (parent->requires_grad && visited.insert(parent).second) {
                stack.emplace_back(parent, 0);
            }
        } else {
            order_.push_back(node);
            stack.pop_back();
        }
    }
}

void GradTape::backward() {
    if (order_.empty()) return;
    TensorNode* root = order_.back();
    root->ensure_grad();
    root->grad[0] += 1.0;
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
        TensorNode* node = *it;
        if (node->backward_fn) {
            node->ensure_grad();
            node->backward_fn(*node);
        }
    }
}

void backward(const Tensor& loss) {
    GradTape tape(loss);
    tape.backward();
}

}  // namespace parafine
