#include "acfleet/mlp.hpp"

#include <cmath>

#include "acfleet/errors.hpp"
#include "acfleet/rng.hpp"

namespace acfleet {

Mlp Mlp::make(const std::vector<int>& layer_sizes,
              const std::vector<Activation>& activations, uint64_t seed) {
  if (layer_sizes.size() < 2) throw ShapeMismatch("mlp: need at least one layer");
  if (activations.size() != layer_sizes.size() - 1) {
    throw ShapeMismatch("mlp: one activation per layer required");
  }
  Mlp net;
  net.layer_sizes = layer_sizes;
  net.activations = activations;
  Rng rng(seed);
  for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int fan_in = layer_sizes[l];
    const int fan_out = layer_sizes[l + 1];
    const double limit =
        activations[l] == Activation::relu
            ? std::sqrt(6.0 / fan_in)
            : std::sqrt(6.0 / (fan_in + fan_out));
    Tensor2 w(fan_out, fan_in);
    for (size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-limit, limit);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(1, fan_out);
  }
  return net;
}

size_t Mlp::parameter_count() const {
  size_t n = 0;
  for (size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

double Mlp::parameter_checksum() const {
  double acc = 0.0;
  for (size_t l = 0; l < weights.size(); ++l) {
    acc += weights[l].checksum() + biases[l].checksum();
  }
  return acc;
}

void Mlp::require_finite(const char* what) const {
  for (size_t l = 0; l < weights.size(); ++l) {
    weights[l].require_finite(what);
    biases[l].require_finite(what);
  }
}

namespace {

void apply_activation(Tensor2& t, Activation act) {
  double* p = t.data();
  switch (act) {
    case Activation::linear:
      return;
    case Activation::relu:
      for (size_t i = 0; i < t.size(); ++i) p[i] = p[i] > 0.0 ? p[i] : 0.0;
      return;
    case Activation::tanh:
      for (size_t i = 0; i < t.size(); ++i) p[i] = std::tanh(p[i]);
      return;
  }
}

// dPre = dPost * act'(pre), using post where cheaper.
void activation_backward(const Tensor2& pre, const Tensor2& post, Tensor2& d,
                         Activation act) {
  double* dp = d.data();
  switch (act) {
    case Activation::linear:
      return;
    case Activation::relu: {
      const double* pp = pre.data();
      for (size_t i = 0; i < d.size(); ++i) {
        if (pp[i] <= 0.0) dp[i] = 0.0;
      }
      return;
    }
    case Activation::tanh: {
      const double* qp = post.data();
      for (size_t i = 0; i < d.size(); ++i) dp[i] *= 1.0 - qp[i] * qp[i];
      return;
    }
  }
}

}  // namespace

Tensor2 mlp_forward(const Mlp& net, const Tensor2& input, ForwardCache* cache) {
  if (input.cols() != net.input_size()) {
    throw ShapeMismatch("mlp_forward: input width does not match first layer");
  }
  if (cache) {
    cache->pre.clear();
    cache->post.clear();
    cache->post.push_back(input);
  }
  Tensor2 current = input;
  for (size_t l = 0; l < net.num_layers(); ++l) {
    Tensor2 z(current.rows(), net.layer_sizes[l + 1]);
    matmul_nt(current, net.weights[l], z);
    const double* b = net.biases[l].data();
    for (int r = 0; r < z.rows(); ++r) {
      double* row = z.row(r);
      for (int c = 0; c < z.cols(); ++c) row[c] += b[c];
    }
    if (cache) cache->pre.push_back(z);
    apply_activation(z, net.activations[l]);
    if (cache) cache->post.push_back(z);
    current = std::move(z);
  }
  return current;
}

MlpGrads MlpGrads::zeros_like(const Mlp& net) {
  MlpGrads g;
  for (size_t l = 0; l < net.num_layers(); ++l) {
    g.weights.emplace_back(net.weights[l].rows(), net.weights[l].cols());
    g.biases.emplace_back(1, net.biases[l].cols());
  }
  return g;
}

void MlpGrads::add(const MlpGrads& other) {
  for (size_t l = 0; l < weights.size(); ++l) {
    add_inplace(weights[l], other.weights[l]);
    add_inplace(biases[l], other.biases[l]);
  }
}

void MlpGrads::scale(double s) {
  for (size_t l = 0; l < weights.size(); ++l) {
    scale_inplace(weights[l], s);
    scale_inplace(biases[l], s);
  }
}

double MlpGrads::squared_norm() const {
  double acc = 0.0;
  for (size_t l = 0; l < weights.size(); ++l) {
    for (size_t i = 0; i < weights[l].size(); ++i) {
      acc += weights[l].data()[i] * weights[l].data()[i];
    }
    for (size_t i = 0; i < biases[l].size(); ++i) {
      acc += biases[l].data()[i] * biases[l].data()[i];
    }
  }
  return acc;
}

void MlpGrads::require_finite(const char* what) const {
  for (size_t l = 0; l < weights.size(); ++l) {
    weights[l].require_finite(what);
    biases[l].require_finite(what);
  }
}

Tensor2 mlp_backward(const Mlp& net, const ForwardCache& cache, const Tensor2& upstream,
                     MlpGrads& grads) {
  if (cache.pre.size() != net.num_layers() ||
      cache.post.size() != net.num_layers() + 1) {
    throw ShapeMismatch("mlp_backward: cache does not match network");
  }
  Tensor2 delta = upstream;
  for (size_t l = net.num_layers(); l-- > 0;) {
    if (!delta.same_shape(cache.pre[l])) {
      throw ShapeMismatch("mlp_backward: upstream shape mismatch");
    }
    activation_backward(cache.pre[l], cache.post[l + 1], delta, net.activations[l]);

    // dW = delta^T * input_of_layer; db = column sums of delta.
    Tensor2 dw(net.weights[l].rows(), net.weights[l].cols());
    matmul_tn(delta, cache.post[l], dw);
    add_inplace(grads.weights[l], dw);
    double* db = grads.biases[l].data();
    for (int r = 0; r < delta.rows(); ++r) {
      const double* row = delta.row(r);
      for (int c = 0; c < delta.cols(); ++c) db[c] += row[c];
    }

    if (l == 0) {
      Tensor2 dinput(delta.rows(), net.input_size());
      matmul(delta, net.weights[l], dinput);
      return dinput;
    }
    Tensor2 next(delta.rows(), net.layer_sizes[l]);
    matmul(delta, net.weights[l], next);
    delta = std::move(next);
  }
  return Tensor2();  // unreachable
}

double clip_global_norm(std::vector<MlpGrads*> grads, double max_norm) {
  double sq = 0.0;
  for (MlpGrads* g : grads) sq += g->squared_norm();
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double s = max_norm / norm;
    for (MlpGrads* g : grads) g->scale(s);
  }
  return norm;
}

}  // namespace acfleet
