#pragma once

#include <cstdint>
#include <vector>

#include "slucb/bandit.hpp"
#include "slucb/model.hpp"
#include "slucb/protocol.hpp"

namespace slucb {

enum class TieBreak { kLowestIndex };

struct EngineConfig {
  std::int64_t horizon = 0;  // T >= 1
  int batch = 1;             // B, 1 <= B <= T; a trailing partial batch is
                             // processed as its own batch
  RidgeConfig ridge;
  TieBreak tie_break = TieBreak::kLowestIndex;
  bool resample_contexts = true;
};

/// Running batch aggregates: u = sum of per-batch vector statistics,
/// v = lambda*I + sum of per-batch matrix statistics, accumulated in batch
/// index order.
struct BatchLedger {
  Vector u;
  Matrix v;
  std::vector<BatchStatistics> per_batch;
};

struct EpisodeResult {
  RegretTrace trace;
  std::vector<int> actions;                 // chosen arm per round
  std::vector<std::int64_t> update_rounds;  // rounds at which the model changed
  ModelState final_model;
};

/// Arm maximizing the UCB score; ties broken toward the lowest index.
int select_action(const ModelState& model, const ContextArmSet& context);

/// Regularizer choice max{1, sigma_total * (sqrt(d) + sqrt(log(T/(B*alpha))))}
/// where sigma_total is the per-entry std of the cumulative protocol noise at
/// the horizon.
double select_lambda(double sigma_total, int d, std::int64_t horizon, int batch,
                     double alpha);

/// Plays `config.horizon` rounds of batched LinUCB against `instance`,
/// feeding per-user statistics through `protocol` and updating the model only
/// at batch ends. Deterministic given (instance.seed, episode_seed).
EpisodeResult run_episode(const BanditInstance& instance,
                          ShuffleProtocol& protocol, const EngineConfig& config,
                          std::uint64_t episode_seed);

}  // namespace slucb
