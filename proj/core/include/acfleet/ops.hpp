#pragma once

#include <cstdint>
#include <span>

#include "acfleet/tensor.hpp"

namespace acfleet {

/// Row-wise softmax, numerically stabilized by max subtraction.
Tensor2 softmax_rows(const Tensor2& logits);

/// Row-wise masked softmax: entries with mask == 0 get probability 0 and the
/// rest renormalize. Throws AllMasked if a row has no admissible entry.
/// `mask` must have the same shape, nonzero meaning admissible.
Tensor2 softmax_masked(const Tensor2& logits, const Tensor2& mask);

/// dLoss/dLogits for y = softmax(row) given dLoss/dy. Works for the masked
/// variant too (masked entries carry y = 0 and demand no special casing).
Tensor2 softmax_backward_rows(const Tensor2& probs, const Tensor2& dprobs);

/// Huber (smooth-L1) with kink at delta: 0.5 x^2 for |x| <= delta, else
/// delta (|x| - 0.5 delta). Returns the value and writes d/dx.
double huber(double x, double delta, double* dx);

/// Mean squared error over all entries of (pred - target); gradient w.r.t.
/// pred is written into dpred (allocated by caller, same shape).
double mse_loss(const Tensor2& pred, const Tensor2& target, Tensor2* dpred);

/// One clipped-surrogate policy-gradient term (to MINIMIZE):
///   loss = -min(r * adv, clip(r, 1-eps, 1+eps) * adv),  r = p_new / p_old.
/// Writes dLoss/dp_new.
double clipped_surrogate(double p_new, double p_old, double advantage, double eps,
                         double* dp_new);

}  // namespace acfleet
