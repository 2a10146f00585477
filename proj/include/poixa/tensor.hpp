#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "poixa/error.hpp"

namespace poixa {

// Dense row-major tensor of rank 1 or 2. The storage scalar is a template
// parameter: the models run on float, the gradient-check suites instantiate
// the same code on double. Reductions always accumulate in double.
template <typename S>
struct TensorT {
  std::vector<int> shape;
  std::vector<S> data;

  TensorT() = default;
  TensorT(std::vector<int> shp, std::vector<S> values) : shape(std::move(shp)), data(std::move(values)) {
    require(static_cast<std::int64_t>(data.size()) == numel_of(shape), errc::shape_error,
            "tensor data length does not match shape");
  }

  static std::int64_t numel_of(const std::vector<int>& shp) {
    std::int64_t n = 1;
    for (int d : shp) {
      require(d >= 0, errc::shape_error, "negative dimension");
      n *= d;
    }
    return n;
  }

  static TensorT zeros(std::vector<int> shp) {
    TensorT t;
    t.shape = std::move(shp);
    t.data.assign(static_cast<std::size_t>(numel_of(t.shape)), S(0));
    return t;
  }

  static TensorT full(std::vector<int> shp, S v) {
    TensorT t = zeros(std::move(shp));
    for (auto& x : t.data) x = v;
    return t;
  }

  static TensorT scalar(S v) { return TensorT({1}, {v}); }

  int rank() const { return static_cast<int>(shape.size()); }
  std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }

  int rows() const { return rank() == 2 ? shape[0] : 1; }
  int cols() const { return rank() == 2 ? shape[1] : (rank() == 1 ? shape[0] : 0); }

  S& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols() + j]; }
  S at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols() + j]; }

  S& operator[](std::int64_t i) { return data[static_cast<std::size_t>(i)]; }
  S operator[](std::int64_t i) const { return data[static_cast<std::size_t>(i)]; }

  bool same_shape(const TensorT& o) const { return shape == o.shape; }

  std::string shape_str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
    os << ")";
    return os.str();
  }
};

using Tensor = TensorT<float>;

template <typename S>
void ensure_finite(const TensorT<S>& t, const char* what) {
  for (S v : t.data) {
    if (!std::isfinite(static_cast<double>(v)))
      fail(errc::numeric_error, std::string("non-finite value in ") + what);
  }
}

// ---- value kernels ---------------------------------------------------------
// Shared by the autograd forward pass and by plain inference, so both paths
// produce identical bits.

template <typename S>
TensorT<S> matmul_val(const TensorT<S>& a, const TensorT<S>& b) {
  require(a.rank() == 2 && b.rank() == 2, errc::shape_error, "matmul expects rank-2 operands");
  require(a.shape[1] == b.shape[0], errc::shape_error,
          "matmul inner dims " + a.shape_str() + " x " + b.shape_str());
  const int m = a.shape[0], k = a.shape[1], n = b.shape[1];
  TensorT<S> out = TensorT<S>::zeros({m, n});
  std::vector<double> acc(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int p = 0; p < k; ++p) {
      const double av = static_cast<double>(a.at(i, p));
      const S* brow = &b.data[static_cast<std::size_t>(p) * n];
      for (int j = 0; j < n; ++j) acc[static_cast<std::size_t>(j)] += av * static_cast<double>(brow[j]);
    }
    for (int j = 0; j < n; ++j) out.at(i, j) = static_cast<S>(acc[static_cast<std::size_t>(j)]);
  }
  ensure_finite(out, "matmul");
  return out;
}

template <typename S>
TensorT<S> transpose_val(const TensorT<S>& a) {
  require(a.rank() == 2, errc::shape_error, "transpose expects rank-2");
  TensorT<S> out = TensorT<S>::zeros({a.shape[1], a.shape[0]});
  for (int i = 0; i < a.shape[0]; ++i)
    for (int j = 0; j < a.shape[1]; ++j) out.at(j, i) = a.at(i, j);
  return out;
}

// b must either match a's shape or be a row vector broadcast over a's rows.
template <typename S>
TensorT<S> add_val(const TensorT<S>& a, const TensorT<S>& b) {
  TensorT<S> out = a;
  if (a.same_shape(b)) {
    for (std::int64_t i = 0; i < a.numel(); ++i) out[i] = a[i] + b[i];
  } else {
    require(a.rank() == 2 && b.numel() == a.shape[1], errc::shape_error,
            "add broadcast: " + a.shape_str() + " + " + b.shape_str());
    for (int i = 0; i < a.shape[0]; ++i)
      for (int j = 0; j < a.shape[1]; ++j) out.at(i, j) = a.at(i, j) + b[j];
  }
  ensure_finite(out, "add");
  return out;
}

template <typename S>
TensorT<S> scale_val(const TensorT<S>& a, double c) {
  TensorT<S> out = a;
  for (auto& v : out.data) v = static_cast<S>(static_cast<double>(v) * c);
  ensure_finite(out, "scale");
  return out;
}

template <typename S>
TensorT<S> relu_val(const TensorT<S>& a) {
  TensorT<S> out = a;
  for (auto& v : out.data) v = v > S(0) ? v : S(0);
  return out;
}

// Numerically stable softmax along the last axis of a rank-2 tensor.
template <typename S>
TensorT<S> row_softmax_val(const TensorT<S>& a) {
  require(a.rank() == 2, errc::shape_error, "row_softmax expects rank-2");
  TensorT<S> out = TensorT<S>::zeros(a.shape);
  const int n = a.shape[1];
  require(n > 0, errc::shape_error, "row_softmax on empty rows");
  for (int i = 0; i < a.shape[0]; ++i) {
    double mx = static_cast<double>(a.at(i, 0));
    for (int j = 1; j < n; ++j) mx = std::max(mx, static_cast<double>(a.at(i, j)));
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      double e = std::exp(static_cast<double>(a.at(i, j)) - mx);
      out.at(i, j) = static_cast<S>(e);
      sum += e;
    }
    for (int j = 0; j < n; ++j) out.at(i, j) = static_cast<S>(static_cast<double>(out.at(i, j)) / sum);
  }
  ensure_finite(out, "row_softmax");
  return out;
}

template <typename S>
TensorT<S> lookup_val(const TensorT<S>& table, const std::vector<int>& idx) {
  require(table.rank() == 2, errc::shape_error, "embedding table must be rank-2");
  TensorT<S> out = TensorT<S>::zeros({static_cast<int>(idx.size()), table.shape[1]});
  for (std::size_t r = 0; r < idx.size(); ++r) {
    require(idx[r] >= 0 && idx[r] < table.shape[0], errc::shape_error, "embedding index out of range");
    for (int j = 0; j < table.shape[1]; ++j) out.at(static_cast<int>(r), j) = table.at(idx[r], j);
  }
  return out;
}

// Mean over (optionally masked) rows; returns a 1 x cols tensor.
template <typename S>
TensorT<S> mean_pool_rows_val(const TensorT<S>& a, const std::vector<bool>& mask = {}) {
  require(a.rank() == 2, errc::shape_error, "mean_pool_rows expects rank-2");
  require(mask.empty() || static_cast<int>(mask.size()) == a.shape[0], errc::shape_error,
          "mask length must equal row count");
  int kept = 0;
  std::vector<double> acc(static_cast<std::size_t>(a.shape[1]), 0.0);
  for (int i = 0; i < a.shape[0]; ++i) {
    if (!mask.empty() && !mask[static_cast<std::size_t>(i)]) continue;
    ++kept;
    for (int j = 0; j < a.shape[1]; ++j) acc[static_cast<std::size_t>(j)] += static_cast<double>(a.at(i, j));
  }
  require(kept > 0, errc::shape_error, "mean_pool_rows over zero rows");
  TensorT<S> out = TensorT<S>::zeros({1, a.shape[1]});
  for (int j = 0; j < a.shape[1]; ++j) out.at(0, j) = static_cast<S>(acc[static_cast<std::size_t>(j)] / kept);
  return out;
}

// Cross entropy of a single logit vector against a target index, evaluated
// via log-sum-exp. Accepts rank-1 (n), or rank-2 (1 x n) / (n x 1).
template <typename S>
double cross_entropy_val(const TensorT<S>& logits, int target) {
  const std::int64_t n = logits.numel();
  require(n > 0, errc::shape_error, "cross_entropy on empty logits");
  require(logits.rank() == 1 || logits.shape[0] == 1 || logits.shape[1] == 1, errc::shape_error,
          "cross_entropy expects a vector of logits");
  require(target >= 0 && target < n, errc::shape_error, "cross_entropy target out of range");
  double mx = static_cast<double>(logits[0]);
  for (std::int64_t i = 1; i < n; ++i) mx = std::max(mx, static_cast<double>(logits[i]));
  double sum = 0.0;
  for (std::int64_t i = 0; i < n; ++i) sum += std::exp(static_cast<double>(logits[i]) - mx);
  double loss = mx + std::log(sum) - static_cast<double>(logits[target]);
  if (!std::isfinite(loss)) fail(errc::numeric_error, "non-finite cross_entropy");
  return loss;
}

// Argmax with smallest-index tie break.
template <typename S>
int argmax(const TensorT<S>& v) {
  require(v.numel() > 0, errc::shape_error, "argmax on empty tensor");
  int best = 0;
  for (std::int64_t i = 1; i < v.numel(); ++i)
    if (v[i] > v[best]) best = static_cast<int>(i);
  return best;
}

}  // namespace poixa
