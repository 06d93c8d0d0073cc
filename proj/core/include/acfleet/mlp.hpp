#pragma once

#include <cstdint>
#include <vector>

#include "acfleet/tensor.hpp"

namespace acfleet {

enum class Activation : uint8_t { linear = 0, relu = 1, tanh = 2 };

/// Fully connected network. weights[l] is (out_l, in_l); biases[l] is
/// (1, out_l); activations[l] applies after layer l.
struct Mlp {
  std::vector<int> layer_sizes;        // e.g. {34, 100, 100, 2}
  std::vector<Tensor2> weights;
  std::vector<Tensor2> biases;
  std::vector<Activation> activations;

  /// Kaiming-uniform init for ReLU layers, Xavier-uniform for tanh/linear,
  /// zero biases. Deterministic in `seed`.
  static Mlp make(const std::vector<int>& layer_sizes,
                  const std::vector<Activation>& activations, uint64_t seed);

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  size_t num_layers() const { return weights.size(); }
  size_t parameter_count() const;
  double parameter_checksum() const;
  void require_finite(const char* what) const;
};

/// Per-layer activations kept for the backward pass; post[0] is the input.
struct ForwardCache {
  std::vector<Tensor2> pre;   // pre-activation per layer
  std::vector<Tensor2> post;  // post-activation; post[0] = input
};

/// Batched forward: input is (batch, in). Throws ShapeMismatch on bad input.
Tensor2 mlp_forward(const Mlp& net, const Tensor2& input, ForwardCache* cache = nullptr);

struct MlpGrads {
  std::vector<Tensor2> weights;
  std::vector<Tensor2> biases;

  static MlpGrads zeros_like(const Mlp& net);
  void add(const MlpGrads& other);
  void scale(double s);
  double squared_norm() const;
  void require_finite(const char* what) const;
};

/// Exact reverse-mode gradients of mlp_forward. `upstream` is dLoss/dOutput
/// for the cached batch; parameter gradients accumulate into `grads` and the
/// input gradient is returned.
Tensor2 mlp_backward(const Mlp& net, const ForwardCache& cache, const Tensor2& upstream,
                     MlpGrads& grads);

/// Scales the gradient set so its global L2 norm is at most max_norm.
/// Returns the pre-clip norm.
double clip_global_norm(std::vector<MlpGrads*> grads, double max_norm);

}  // namespace acfleet
