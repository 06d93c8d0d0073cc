#include "acfleet/tarmac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acfleet/errors.hpp"

namespace acfleet {

TarmacActor TarmacActor::make(const TarmacDims& d, uint64_t seed) {
  TarmacActor net;
  net.dims = d;
  const auto relu = Activation::relu;
  const auto tanh_ = Activation::tanh;
  const auto lin = Activation::linear;
  net.obs2hidden = Mlp::make({d.obs, d.hidden, d.hidden}, {relu, lin}, mix_seed(seed, 1));
  net.hidden2key = Mlp::make({d.hidden, d.hidden, d.key}, {tanh_, lin}, mix_seed(seed, 2));
  net.hidden2value = Mlp::make({d.hidden, d.hidden, d.comm}, {tanh_, lin}, mix_seed(seed, 3));
  net.hidden2query = Mlp::make({d.hidden, d.hidden, d.key}, {tanh_, lin}, mix_seed(seed, 4));
  net.post_comm = Mlp::make({d.hidden + d.comm, d.hidden, d.hidden}, {relu, lin},
                            mix_seed(seed, 5));
  net.actor = Mlp::make({d.hidden + d.comm, d.hidden, d.actions}, {relu, lin},
                        mix_seed(seed, 6));
  return net;
}

double TarmacActor::parameter_checksum() const {
  return obs2hidden.parameter_checksum() + hidden2key.parameter_checksum() +
         hidden2value.parameter_checksum() + hidden2query.parameter_checksum() +
         post_comm.parameter_checksum() + actor.parameter_checksum();
}

void TarmacActor::require_finite(const char* what) const {
  obs2hidden.require_finite(what);
  hidden2key.require_finite(what);
  hidden2value.require_finite(what);
  hidden2query.require_finite(what);
  post_comm.require_finite(what);
  actor.require_finite(what);
}

TarmacGrads TarmacGrads::zeros_like(const TarmacActor& net) {
  TarmacGrads g;
  g.obs2hidden = MlpGrads::zeros_like(net.obs2hidden);
  g.hidden2key = MlpGrads::zeros_like(net.hidden2key);
  g.hidden2value = MlpGrads::zeros_like(net.hidden2value);
  g.hidden2query = MlpGrads::zeros_like(net.hidden2query);
  g.post_comm = MlpGrads::zeros_like(net.post_comm);
  g.actor = MlpGrads::zeros_like(net.actor);
  return g;
}

void TarmacGrads::add(const TarmacGrads& o) {
  obs2hidden.add(o.obs2hidden);
  hidden2key.add(o.hidden2key);
  hidden2value.add(o.hidden2value);
  hidden2query.add(o.hidden2query);
  post_comm.add(o.post_comm);
  actor.add(o.actor);
}

void TarmacGrads::scale(double s) {
  obs2hidden.scale(s);
  hidden2key.scale(s);
  hidden2value.scale(s);
  hidden2query.scale(s);
  post_comm.scale(s);
  actor.scale(s);
}

std::vector<MlpGrads*> TarmacGrads::all() {
  return {&obs2hidden, &hidden2key, &hidden2value, &hidden2query, &post_comm, &actor};
}

namespace {

// Row-wise masked softmax where an empty row stays all-zero instead of
// throwing: agents with no admissible sender fall back to a zero comm vector.
Tensor2 attention_softmax(const Tensor2& logits, const Tensor2& mask) {
  Tensor2 out(logits.rows(), logits.cols());
  for (int r = 0; r < logits.rows(); ++r) {
    const double* in = logits.row(r);
    const double* m = mask.row(r);
    double* o = out.row(r);
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < logits.cols(); ++c) {
      if (m[c] != 0.0) mx = std::max(mx, in[c]);
    }
    if (mx == -std::numeric_limits<double>::infinity()) continue;  // zero row
    double sum = 0.0;
    for (int c = 0; c < logits.cols(); ++c) {
      o[c] = m[c] != 0.0 ? std::exp(in[c] - mx) : 0.0;
      sum += o[c];
    }
    for (int c = 0; c < logits.cols(); ++c) o[c] /= sum;
  }
  return out;
}

Tensor2 concat_cols(const Tensor2& a, const Tensor2& b) {
  Tensor2 out(a.rows(), a.cols() + b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    std::copy(a.row(r), a.row(r) + a.cols(), out.row(r));
    std::copy(b.row(r), b.row(r) + b.cols(), out.row(r) + a.cols());
  }
  return out;
}

void split_cols(const Tensor2& joint, Tensor2& left, Tensor2& right) {
  for (int r = 0; r < joint.rows(); ++r) {
    std::copy(joint.row(r), joint.row(r) + left.cols(), left.row(r));
    std::copy(joint.row(r) + left.cols(), joint.row(r) + joint.cols(), right.row(r));
  }
}

}  // namespace

Tensor2 tarmac_forward(const TarmacActor& net, const Tensor2& obs, const Tensor2& mask,
                       TarmacCache* cache) {
  const int n = obs.rows();
  if (obs.cols() != net.dims.obs) throw ShapeMismatch("tarmac: observation width");
  if (mask.rows() != n || mask.cols() != n) throw ShapeMismatch("tarmac: mask shape");

  TarmacCache local;
  TarmacCache& c = cache ? *cache : local;
  c.rounds.assign(static_cast<size_t>(net.dims.rounds), {});

  Tensor2 x;
  for (int r = 0; r < net.dims.rounds; ++r) {
    auto& round = c.rounds[static_cast<size_t>(r)];
    if (r == 0) {
      round.x = mlp_forward(net.obs2hidden, obs, &round.hidden_fc);
    } else {
      round.x = mlp_forward(net.post_comm, c.rounds[static_cast<size_t>(r - 1)].concat,
                            &round.hidden_fc);
    }
    x = round.x;

    round.keys = mlp_forward(net.hidden2key, x, &round.key_fc);
    round.values = mlp_forward(net.hidden2value, x, &round.value_fc);
    round.queries = mlp_forward(net.hidden2query, x, &round.query_fc);

    Tensor2 logits(n, n);
    matmul_nt(round.queries, round.keys, logits);  // logits(i, j) = q_i . k_j
    round.attention = attention_softmax(logits, mask);

    round.comm = Tensor2(n, net.dims.comm);
    matmul(round.attention, round.values, round.comm);
    round.concat = concat_cols(x, round.comm);
  }

  const Tensor2 action_logits =
      mlp_forward(net.actor, c.rounds.back().concat, &c.actor_fc);
  c.probs = softmax_rows(action_logits);
  return c.probs;
}

Tensor2 tarmac_backward(const TarmacActor& net, const TarmacCache& cache,
                        const Tensor2& mask, const Tensor2& dprobs, TarmacGrads& grads) {
  const int n = dprobs.rows();
  const int nh = net.dims.hidden;
  const int nc = net.dims.comm;

  const Tensor2 dlogits = softmax_backward_rows(cache.probs, dprobs);
  const Tensor2 dconcat_last = mlp_backward(net.actor, cache.actor_fc, dlogits, grads.actor);

  Tensor2 dx(n, nh);
  Tensor2 dcomm(n, nc);
  split_cols(dconcat_last, dx, dcomm);

  for (int r = net.dims.rounds; r-- > 0;) {
    const auto& round = cache.rounds[static_cast<size_t>(r)];

    // comm = attention * values
    Tensor2 dvalues(n, nc);
    matmul_tn(round.attention, dcomm, dvalues);
    Tensor2 datt(n, n);
    matmul_nt(dcomm, round.values, datt);

    // Masked rows hold zero attention, so the softmax backward contributes
    // zero there as well; empty rows need no special case.
    const Tensor2 dattn_logits = softmax_backward_rows(round.attention, datt);

    Tensor2 dqueries(n, net.dims.key);
    matmul(dattn_logits, round.keys, dqueries);
    Tensor2 dkeys(n, net.dims.key);
    matmul_tn(dattn_logits, round.queries, dkeys);

    add_inplace(dx, mlp_backward(net.hidden2key, round.key_fc, dkeys, grads.hidden2key));
    add_inplace(dx, mlp_backward(net.hidden2value, round.value_fc, dvalues,
                                 grads.hidden2value));
    add_inplace(dx, mlp_backward(net.hidden2query, round.query_fc, dqueries,
                                 grads.hidden2query));

    if (r == 0) {
      return mlp_backward(net.obs2hidden, round.hidden_fc, dx, grads.obs2hidden);
    }
    const Tensor2 dconcat =
        mlp_backward(net.post_comm, round.hidden_fc, dx, grads.post_comm);
    dx = Tensor2(n, nh);
    dcomm = Tensor2(n, nc);
    split_cols(dconcat, dx, dcomm);
  }
  (void)mask;
  return Tensor2();  // unreachable
}

Tensor2 tarmac_mask(const std::vector<std::vector<int>>& neighbours, double drop_prob,
                    Rng* rng) {
  const int n = static_cast<int>(neighbours.size());
  Tensor2 mask(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j : neighbours[static_cast<size_t>(i)]) {
      const bool dropped = drop_prob > 0.0 && rng != nullptr && rng->bernoulli(drop_prob);
      if (!dropped) mask(i, j) = 1.0;
    }
  }
  return mask;
}

void tarmac_act(const TarmacActor& net, const Tensor2& obs,
                const std::vector<std::vector<int>>& neighbours, double drop_prob,
                Rng* rng, std::vector<uint8_t>& actions_out) {
  const int n = obs.rows();
  actions_out.resize(static_cast<size_t>(n));

  // A defective link stays defective for the whole step, across comm rounds.
  static thread_local std::vector<std::vector<int>> kept;
  kept.assign(static_cast<size_t>(n), {});
  for (int i = 0; i < n; ++i) {
    for (int j : neighbours[static_cast<size_t>(i)]) {
      const bool dropped = drop_prob > 0.0 && rng != nullptr && rng->bernoulli(drop_prob);
      if (!dropped) kept[static_cast<size_t>(i)].push_back(j);
    }
  }

  Tensor2 x = mlp_forward(net.obs2hidden, obs);
  std::vector<double> logit_buf;
  for (int round = 0; round < net.dims.rounds; ++round) {
    const Tensor2 keys = mlp_forward(net.hidden2key, x);
    const Tensor2 values = mlp_forward(net.hidden2value, x);
    const Tensor2 queries = mlp_forward(net.hidden2query, x);

    Tensor2 concat(n, net.dims.hidden + net.dims.comm);
    for (int i = 0; i < n; ++i) {
      double* out = concat.row(i);
      std::copy(x.row(i), x.row(i) + net.dims.hidden, out);
      double* comm = out + net.dims.hidden;
      std::fill(comm, comm + net.dims.comm, 0.0);

      // Attention over the (possibly thinned) neighbour list only.
      const auto& nb = kept[static_cast<size_t>(i)];
      if (nb.empty()) continue;  // zero comm fallback
      logit_buf.clear();
      for (int j : nb) {
        const double* q = queries.row(i);
        const double* k = keys.row(j);
        double dot = 0.0;
        for (int d = 0; d < net.dims.key; ++d) dot += q[d] * k[d];
        logit_buf.push_back(dot);
      }
      double mx = *std::max_element(logit_buf.begin(), logit_buf.end());
      double sum = 0.0;
      for (double& l : logit_buf) {
        l = std::exp(l - mx);
        sum += l;
      }
      for (size_t s = 0; s < nb.size(); ++s) {
        const double w = logit_buf[s] / sum;
        const double* v = values.row(nb[s]);
        for (int d = 0; d < net.dims.comm; ++d) comm[d] += w * v[d];
      }
    }

    if (round + 1 < net.dims.rounds) {
      x = mlp_forward(net.post_comm, concat);
    } else {
      const Tensor2 logits = mlp_forward(net.actor, concat);
      for (int i = 0; i < n; ++i) {
        actions_out[static_cast<size_t>(i)] =
            logits(i, 1) > logits(i, 0) ? 1 : 0;  // greedy; OFF wins ties
      }
    }
  }
}

}  // namespace acfleet
