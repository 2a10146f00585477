#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "poixa/rng.hpp"
#include "poixa/tensor.hpp"

namespace poixa {

template <typename S>
struct ParamT {
  TensorT<S> value;
  TensorT<S> grad;
  TensorT<S> adam_m;
  TensorT<S> adam_v;
};

// Named parameters with matching gradient and Adam moment buffers. Iteration
// is in name order (std::map), which keeps optimizer updates deterministic.
template <typename S>
class ParamStoreT {
 public:
  ParamT<S>& add(const std::string& name, TensorT<S> value) {
    require(params_.find(name) == params_.end(), errc::shape_error, "duplicate parameter " + name);
    ParamT<S> p;
    p.grad = TensorT<S>::zeros(value.shape);
    p.adam_m = TensorT<S>::zeros(value.shape);
    p.adam_v = TensorT<S>::zeros(value.shape);
    p.value = std::move(value);
    return params_.emplace(name, std::move(p)).first->second;
  }

  ParamT<S>& get(const std::string& name) {
    auto it = params_.find(name);
    require(it != params_.end(), errc::shape_error, "unknown parameter " + name);
    return it->second;
  }

  const ParamT<S>& get(const std::string& name) const {
    auto it = params_.find(name);
    require(it != params_.end(), errc::shape_error, "unknown parameter " + name);
    return it->second;
  }

  bool contains(const std::string& name) const { return params_.count(name) != 0; }

  void zero_grads() {
    for (auto& [name, p] : params_)
      std::fill(p.grad.data.begin(), p.grad.data.end(), S(0));
  }

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }
  std::size_t size() const { return params_.size(); }

  std::int64_t step_count = 0;  // Adam bias-correction timestep

 private:
  std::map<std::string, ParamT<S>> params_;
};

using ParamStore = ParamStoreT<float>;

// One Adam update over every parameter; gradients are zeroed afterwards.
template <typename S>
void adam_step(ParamStoreT<S>& store, double lr, double beta1 = 0.9, double beta2 = 0.999,
               double eps = 1e-8) {
  store.step_count += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(store.step_count));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(store.step_count));
  for (auto& [name, p] : store) {
    for (std::int64_t i = 0; i < p.value.numel(); ++i) {
      const double g = static_cast<double>(p.grad[i]);
      const double m = beta1 * static_cast<double>(p.adam_m[i]) + (1.0 - beta1) * g;
      const double v = beta2 * static_cast<double>(p.adam_v[i]) + (1.0 - beta2) * g * g;
      p.adam_m[i] = static_cast<S>(m);
      p.adam_v[i] = static_cast<S>(v);
      const double update = lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
      p.value[i] = static_cast<S>(static_cast<double>(p.value[i]) - update);
    }
    std::fill(p.grad.data.begin(), p.grad.data.end(), S(0));
    ensure_finite(p.value, name.c_str());
  }
}

// Glorot-uniform for dense weights: U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
template <typename S>
TensorT<S> glorot_init(Rng& rng, int fan_in, int fan_out) {
  const double a = std::sqrt(6.0 / (fan_in + fan_out));
  TensorT<S> t = TensorT<S>::zeros({fan_in, fan_out});
  for (auto& v : t.data) v = static_cast<S>(rng.uniform(-a, a));
  return t;
}

template <typename S>
TensorT<S> normal_init(Rng& rng, std::vector<int> shape, double sd) {
  TensorT<S> t = TensorT<S>::zeros(std::move(shape));
  for (auto& v : t.data) v = static_cast<S>(rng.normal(0.0, sd));
  return t;
}

}  // namespace poixa
