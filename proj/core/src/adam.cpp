#include "acfleet/adam.hpp"

#include <cmath>

#include "acfleet/errors.hpp"

namespace acfleet {

AdamState::AdamState(const Mlp& net, AdamConfig config)
    : config_(config), m_(MlpGrads::zeros_like(net)), v_(MlpGrads::zeros_like(net)) {}

namespace {

void update_block(double* param, double* m, double* v, const double* g, size_t n,
                  const AdamConfig& c, double bias1, double bias2) {
  for (size_t i = 0; i < n; ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    const double mhat = m[i] / bias1;
    const double vhat = v[i] / bias2;
    param[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
  }
}

}  // namespace

void AdamState::step(Mlp& net, const MlpGrads& grads) {
  if (grads.weights.size() != net.num_layers()) {
    throw ShapeMismatch("adam: gradient set does not match network");
  }
  ++updates_;
  const double bias1 = 1.0 - std::pow(config_.beta1, static_cast<double>(updates_));
  const double bias2 = 1.0 - std::pow(config_.beta2, static_cast<double>(updates_));
  for (size_t l = 0; l < net.num_layers(); ++l) {
    if (!net.weights[l].same_shape(grads.weights[l])) {
      throw ShapeMismatch("adam: weight gradient shape mismatch");
    }
    update_block(net.weights[l].data(), m_.weights[l].data(), v_.weights[l].data(),
                 grads.weights[l].data(), net.weights[l].size(), config_, bias1, bias2);
    update_block(net.biases[l].data(), m_.biases[l].data(), v_.biases[l].data(),
                 grads.biases[l].data(), net.biases[l].size(), config_, bias1, bias2);
  }
}

}  // namespace acfleet
