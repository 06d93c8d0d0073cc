#include "acfleet/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acfleet/errors.hpp"

namespace acfleet {

Tensor2 softmax_rows(const Tensor2& logits) {
  Tensor2 out(logits.rows(), logits.cols());
  for (int r = 0; r < logits.rows(); ++r) {
    const double* in = logits.row(r);
    double* o = out.row(r);
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < logits.cols(); ++c) mx = std::max(mx, in[c]);
    double sum = 0.0;
    for (int c = 0; c < logits.cols(); ++c) {
      o[c] = std::exp(in[c] - mx);
      sum += o[c];
    }
    for (int c = 0; c < logits.cols(); ++c) o[c] /= sum;
  }
  return out;
}

Tensor2 softmax_masked(const Tensor2& logits, const Tensor2& mask) {
  if (!logits.same_shape(mask)) throw ShapeMismatch("softmax_masked: mask shape");
  Tensor2 out(logits.rows(), logits.cols());
  for (int r = 0; r < logits.rows(); ++r) {
    const double* in = logits.row(r);
    const double* m = mask.row(r);
    double* o = out.row(r);
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < logits.cols(); ++c) {
      if (m[c] != 0.0) mx = std::max(mx, in[c]);
    }
    if (mx == -std::numeric_limits<double>::infinity()) {
      throw AllMasked("softmax_masked: empty row");
    }
    double sum = 0.0;
    for (int c = 0; c < logits.cols(); ++c) {
      o[c] = m[c] != 0.0 ? std::exp(in[c] - mx) : 0.0;
      sum += o[c];
    }
    for (int c = 0; c < logits.cols(); ++c) o[c] /= sum;
  }
  return out;
}

Tensor2 softmax_backward_rows(const Tensor2& probs, const Tensor2& dprobs) {
  if (!probs.same_shape(dprobs)) throw ShapeMismatch("softmax_backward: shapes");
  Tensor2 out(probs.rows(), probs.cols());
  for (int r = 0; r < probs.rows(); ++r) {
    const double* y = probs.row(r);
    const double* dy = dprobs.row(r);
    double* o = out.row(r);
    double dot = 0.0;
    for (int c = 0; c < probs.cols(); ++c) dot += y[c] * dy[c];
    for (int c = 0; c < probs.cols(); ++c) o[c] = y[c] * (dy[c] - dot);
  }
  return out;
}

double huber(double x, double delta, double* dx) {
  const double ax = std::abs(x);
  if (ax <= delta) {
    if (dx) *dx = x;
    return 0.5 * x * x;
  }
  if (dx) *dx = x > 0.0 ? delta : -delta;
  return delta * (ax - 0.5 * delta);
}

double mse_loss(const Tensor2& pred, const Tensor2& target, Tensor2* dpred) {
  if (!pred.same_shape(target)) throw ShapeMismatch("mse: shapes differ");
  const double n = static_cast<double>(pred.size());
  double acc = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double e = pred.data()[i] - target.data()[i];
    acc += e * e;
    if (dpred) dpred->data()[i] = 2.0 * e / n;
  }
  return acc / n;
}

double clipped_surrogate(double p_new, double p_old, double advantage, double eps,
                         double* dp_new) {
  const double ratio = p_new / p_old;
  const double unclipped = ratio * advantage;
  const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps) * advantage;
  if (unclipped <= clipped) {
    if (dp_new) *dp_new = -advantage / p_old;
    return -unclipped;
  }
  // The min lands on the clipped candidate, which only happens with the
  // ratio outside the trust band; the objective is flat there.
  if (dp_new) *dp_new = 0.0;
  return -clipped;
}

}  // namespace acfleet
