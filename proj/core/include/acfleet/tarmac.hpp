#pragma once

#include <cstdint>
#include <vector>

#include "acfleet/mlp.hpp"
#include "acfleet/ops.hpp"
#include "acfleet/rng.hpp"

namespace acfleet {

/// Attention-based communicating actor. Each agent embeds its observation,
/// derives a key/value/query triple, attends over its neighbours' keys, and
/// acts on its embedding concatenated with the attention-weighted value sum.
/// Extra communication rounds re-embed [x ++ comm] through post_comm.
struct TarmacDims {
  int obs = 7;
  int hidden = 32;
  int key = 8;
  int comm = 8;
  int rounds = 1;
  int actions = 2;
};

struct TarmacActor {
  TarmacDims dims;
  Mlp obs2hidden;    // obs -> hidden (ReLU) -> hidden
  Mlp hidden2key;    // hidden -> hidden (tanh) -> key
  Mlp hidden2value;  // hidden -> hidden (tanh) -> comm
  Mlp hidden2query;  // hidden -> hidden (tanh) -> key
  Mlp post_comm;     // hidden+comm -> hidden (ReLU) -> hidden
  Mlp actor;         // hidden+comm -> hidden (ReLU) -> actions

  static TarmacActor make(const TarmacDims& dims, uint64_t seed);
  double parameter_checksum() const;
  void require_finite(const char* what) const;
};

struct TarmacGrads {
  MlpGrads obs2hidden, hidden2key, hidden2value, hidden2query, post_comm, actor;

  static TarmacGrads zeros_like(const TarmacActor& net);
  void add(const TarmacGrads& other);
  void scale(double s);
  std::vector<MlpGrads*> all();
};

struct TarmacCache {
  struct Round {
    ForwardCache hidden_fc;  // obs2hidden (round 0) or post_comm (later)
    Tensor2 x;               // N x hidden
    ForwardCache key_fc, value_fc, query_fc;
    Tensor2 keys, values, queries;
    Tensor2 attention;       // N x N; rows with no admissible sender are zero
    Tensor2 comm;            // N x comm
    Tensor2 concat;          // N x (hidden + comm)
  };
  std::vector<Round> rounds;
  ForwardCache actor_fc;
  Tensor2 probs;
};

/// Dense joint forward over all agents (training path; communications stay
/// inside the computational graph). mask is N x N, nonzero where agent i
/// (row) listens to agent j (column); an all-zero row yields a zero comm
/// vector, which is the documented no-communication fallback.
Tensor2 tarmac_forward(const TarmacActor& net, const Tensor2& obs, const Tensor2& mask,
                       TarmacCache* cache = nullptr);

/// Exact reverse-mode gradients through the whole graph, attention included.
/// Returns dLoss/dObs.
Tensor2 tarmac_backward(const TarmacActor& net, const TarmacCache& cache,
                        const Tensor2& mask, const Tensor2& dprobs, TarmacGrads& grads);

/// Neighbour mask with each admissible message independently dropped with
/// probability drop_prob (a dropped sender simply leaves the receiver's
/// attention support).
Tensor2 tarmac_mask(const std::vector<std::vector<int>>& neighbours, double drop_prob,
                    Rng* rng);

/// Decentralized inference: per-agent attention restricted to its neighbour
/// list, no dense N x N intermediates. Matches tarmac_forward exactly.
void tarmac_act(const TarmacActor& net, const Tensor2& obs,
                const std::vector<std::vector<int>>& neighbours, double drop_prob,
                Rng* rng, std::vector<uint8_t>& actions_out);

}  // namespace acfleet
