#pragma once

#include <deque>
#include <functional>
#include <utility>
#include <vector>

#include "poixa/params.hpp"
#include "poixa/tensor.hpp"

namespace poixa {

// Reverse-mode tape. Ops append nodes in evaluation order; since every op
// only references earlier nodes, creation order is a topological order and
// backward() is a single reverse sweep. One tape per training step.
template <typename S>
class TapeT {
 public:
  struct Node {
    TensorT<S> value;
    TensorT<S> grad;
    std::function<void(Node&)> back;  // pulls this->grad into input grads
  };

  // Leaf holding a constant; gradients flow into it but go nowhere further.
  Node* input(TensorT<S> v) { return make(std::move(v), nullptr); }

  // Leaf bound to a parameter; backward() accumulates into p.grad.
  Node* param(ParamT<S>& p) {
    Node* n = make(p.value, nullptr);
    bindings_.emplace_back(n, &p);
    return n;
  }

  Node* matmul(Node* a, Node* b) {
    Node* n = make(matmul_val(a->value, b->value), [a, b](Node& self) {
      // dA += dC * B^T ; dB += A^T * dC
      const int m = a->value.shape[0], k = a->value.shape[1], p = b->value.shape[1];
      for (int i = 0; i < m; ++i)
        for (int q = 0; q < k; ++q) {
          double acc = static_cast<double>(a->grad.at(i, q));
          for (int j = 0; j < p; ++j)
            acc += static_cast<double>(self.grad.at(i, j)) * static_cast<double>(b->value.at(q, j));
          a->grad.at(i, q) = static_cast<S>(acc);
        }
      for (int q = 0; q < k; ++q)
        for (int j = 0; j < p; ++j) {
          double acc = static_cast<double>(b->grad.at(q, j));
          for (int i = 0; i < m; ++i)
            acc += static_cast<double>(a->value.at(i, q)) * static_cast<double>(self.grad.at(i, j));
          b->grad.at(q, j) = static_cast<S>(acc);
        }
    });
    return n;
  }

  Node* transpose(Node* a) {
    return make(transpose_val(a->value), [a](Node& self) {
      for (int i = 0; i < self.value.shape[0]; ++i)
        for (int j = 0; j < self.value.shape[1]; ++j) a->grad.at(j, i) += self.grad.at(i, j);
    });
  }

  // Elementwise add, or row-broadcast when b is a vector of length a.cols.
  Node* add(Node* a, Node* b) {
    const bool broadcast = !a->value.same_shape(b->value);
    return make(add_val(a->value, b->value), [a, b, broadcast](Node& self) {
      for (std::int64_t i = 0; i < a->grad.numel(); ++i) a->grad[i] += self.grad[i];
      if (!broadcast) {
        for (std::int64_t i = 0; i < b->grad.numel(); ++i) b->grad[i] += self.grad[i];
      } else {
        const int rows = a->value.shape[0], cols = a->value.shape[1];
        for (int j = 0; j < cols; ++j) {
          double acc = static_cast<double>(b->grad[j]);
          for (int i = 0; i < rows; ++i) acc += static_cast<double>(self.grad.at(i, j));
          b->grad[j] = static_cast<S>(acc);
        }
      }
    });
  }

  // Add a non-learned constant tensor (same shape).
  Node* add_const(Node* a, const TensorT<S>& c) {
    require(a->value.same_shape(c), errc::shape_error, "add_const shape mismatch");
    return make(add_val(a->value, c), [a](Node& self) {
      for (std::int64_t i = 0; i < a->grad.numel(); ++i) a->grad[i] += self.grad[i];
    });
  }

  Node* scale(Node* a, double c) {
    return make(scale_val(a->value, c), [a, c](Node& self) {
      for (std::int64_t i = 0; i < a->grad.numel(); ++i)
        a->grad[i] += static_cast<S>(static_cast<double>(self.grad[i]) * c);
    });
  }

  // value = s * c where s is a 1-element node and c is a constant tensor.
  Node* scalar_mul(Node* s, TensorT<S> c) {
    require(s->value.numel() == 1, errc::shape_error, "scalar_mul expects 1-element node");
    TensorT<S> out = c;
    const double sv = static_cast<double>(s->value[0]);
    for (auto& v : out.data) v = static_cast<S>(static_cast<double>(v) * sv);
    ensure_finite(out, "scalar_mul");
    return make(std::move(out), [s, c = std::move(c)](Node& self) {
      double acc = static_cast<double>(s->grad[0]);
      for (std::int64_t i = 0; i < c.numel(); ++i)
        acc += static_cast<double>(self.grad[i]) * static_cast<double>(c[i]);
      s->grad[0] = static_cast<S>(acc);
    });
  }

  Node* relu(Node* a) {
    return make(relu_val(a->value), [a](Node& self) {
      for (std::int64_t i = 0; i < a->grad.numel(); ++i)
        if (a->value[i] > S(0)) a->grad[i] += self.grad[i];
    });
  }

  Node* row_softmax(Node* a) {
    return make(row_softmax_val(a->value), [a](Node& self) {
      // dx_j = y_j * (dy_j - sum_k dy_k y_k), row-wise
      const int rows = self.value.shape[0], cols = self.value.shape[1];
      for (int i = 0; i < rows; ++i) {
        double dot = 0.0;
        for (int j = 0; j < cols; ++j)
          dot += static_cast<double>(self.grad.at(i, j)) * static_cast<double>(self.value.at(i, j));
        for (int j = 0; j < cols; ++j) {
          const double y = static_cast<double>(self.value.at(i, j));
          a->grad.at(i, j) += static_cast<S>(y * (static_cast<double>(self.grad.at(i, j)) - dot));
        }
      }
    });
  }

  Node* embedding_lookup(Node* table, std::vector<int> idx) {
    return make(lookup_val(table->value, idx), [table, idx = std::move(idx)](Node& self) {
      const int cols = table->value.shape[1];
      for (std::size_t r = 0; r < idx.size(); ++r)
        for (int j = 0; j < cols; ++j) table->grad.at(idx[r], j) += self.grad.at(static_cast<int>(r), j);
    });
  }

  Node* mean_pool_rows(Node* a, std::vector<bool> mask = {}) {
    TensorT<S> out = mean_pool_rows_val(a->value, mask);
    int kept = 0;
    if (mask.empty()) {
      kept = a->value.shape[0];
    } else {
      for (bool b : mask) kept += b ? 1 : 0;
    }
    return make(std::move(out), [a, mask = std::move(mask), kept](Node& self) {
      const int rows = a->value.shape[0], cols = a->value.shape[1];
      for (int i = 0; i < rows; ++i) {
        if (!mask.empty() && !mask[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j < cols; ++j)
          a->grad.at(i, j) += static_cast<S>(static_cast<double>(self.grad.at(0, j)) / kept);
      }
    });
  }

  Node* cross_entropy(Node* logits, int target) {
    TensorT<S> out = TensorT<S>::scalar(static_cast<S>(cross_entropy_val(logits->value, target)));
    return make(std::move(out), [logits, target](Node& self) {
      // d loss / d logits = softmax(logits) - onehot(target)
      const std::int64_t n = logits->value.numel();
      double mx = static_cast<double>(logits->value[0]);
      for (std::int64_t i = 1; i < n; ++i) mx = std::max(mx, static_cast<double>(logits->value[i]));
      double sum = 0.0;
      for (std::int64_t i = 0; i < n; ++i) sum += std::exp(static_cast<double>(logits->value[i]) - mx);
      const double g = static_cast<double>(self.grad[0]);
      for (std::int64_t i = 0; i < n; ++i) {
        double soft = std::exp(static_cast<double>(logits->value[i]) - mx) / sum;
        if (i == target) soft -= 1.0;
        logits->grad[i] += static_cast<S>(g * soft);
      }
    });
  }

  // Seeds d(loss)/d(loss) = 1, sweeps the tape in reverse, then accumulates
  // leaf gradients into their bound parameters.
  void backward(Node* loss) {
    require(loss->value.numel() == 1, errc::shape_error, "backward expects a scalar loss");
    loss->grad[0] = S(1);
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it)
      if (it->back) it->back(*it);
    for (auto& [node, p] : bindings_)
      for (std::int64_t i = 0; i < p->grad.numel(); ++i) p->grad[i] += node->grad[i];
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  Node* make(TensorT<S> value, std::function<void(Node&)> back) {
    nodes_.emplace_back();
    Node& n = nodes_.back();
    n.grad = TensorT<S>::zeros(value.shape);
    n.value = std::move(value);
    n.back = std::move(back);
    return &n;
  }

  std::deque<Node> nodes_;
  std::vector<std::pair<Node*, ParamT<S>*>> bindings_;
};

using Tape = TapeT<float>;

}  // namespace poixa
