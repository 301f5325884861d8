#include "slucb/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace slucb {

int select_action(const ModelState& model, const ContextArmSet& context) {
  const int k = context.num_arms();
  if (k < 1) throw std::invalid_argument("select_action: empty arm set");
  if (context.arms.cols() != model.theta_hat.size())
    throw ShapeError("select_action: feature dimension mismatch");
  const PosDefSolver solver(model.gram);
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a) {
    const Vector phi = context.arm(a);
    const double score =
        phi.dot(model.theta_hat) + model.beta * solver.mahalanobis(phi);
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

double select_lambda(double sigma_total, int d, std::int64_t horizon, int batch,
                     double alpha) {
  if (sigma_total < 0.0)
    throw std::invalid_argument("select_lambda: sigma_total must be >= 0");
  const double ratio =
      static_cast<double>(horizon) / (static_cast<double>(batch) * alpha);
  const double log_term = std::max(0.0, std::log(ratio));
  const double value =
      sigma_total * (std::sqrt(static_cast<double>(d)) + std::sqrt(log_term));
  return std::max(1.0, value);
}

namespace {

void validate(const EngineConfig& cfg) {
  if (cfg.horizon < 1) throw std::invalid_argument("engine: horizon must be >= 1");
  if (cfg.batch < 1 || cfg.batch > cfg.horizon)
    throw std::invalid_argument("engine: batch must satisfy 1 <= B <= T");
  if (cfg.ridge.lambda <= 0.0)
    throw std::invalid_argument("engine: lambda must be > 0");
  if (cfg.ridge.alpha <= 0.0 || cfg.ridge.alpha > 1.0)
    throw std::invalid_argument("engine: alpha outside (0,1]");
}

}  // namespace

EpisodeResult run_episode(const BanditInstance& instance,
                          ShuffleProtocol& protocol, const EngineConfig& config,
                          std::uint64_t episode_seed) {
  validate(config);
  const int d = instance.dim;
  const std::int64_t horizon = config.horizon;
  const double lambda = config.ridge.lambda;

  Rng context_rng = make_stream(instance.seed, episode_seed, StreamPurpose::kContext);
  Rng reward_rng = make_stream(instance.seed, episode_seed, StreamPurpose::kReward);
  Rng privacy_rng =
      make_stream(instance.seed, episode_seed, StreamPurpose::kPrivacyNoise);
  Rng shuffle_rng =
      make_stream(instance.seed, episode_seed, StreamPurpose::kShuffler);

  BatchLedger ledger;
  ledger.u = Vector::Zero(d);
  ledger.v = lambda * Matrix::Identity(d, d);

  ModelState model;
  model.theta_hat = Vector::Zero(d);
  model.gram = ledger.v;
  model.beta = confidence_radius(config.ridge.alpha, d, 0, lambda);
  model.batch_index = 0;
  model.batch_end_time = 0;

  ContextSampler contexts(instance, config.resample_contexts);

  EpisodeResult result;
  result.trace.cumulative.reserve(static_cast<std::size_t>(horizon));
  result.actions.reserve(static_cast<std::size_t>(horizon));
  double cumulative = 0.0;
  int batch_index = 0;

  for (std::int64_t t = 1; t <= horizon; ++t) {
    const ContextArmSet& context = contexts.next(context_rng);
    const int action = select_action(model, context);
    cumulative += instant_regret(instance, context, action);
    result.trace.cumulative.push_back(cumulative);
    result.actions.push_back(action);

    const Vector phi = context.arm(action);
    const int reward = sample_reward(instance, phi, reward_rng);
    protocol.submit(phi * static_cast<double>(reward), phi * phi.transpose(),
                    privacy_rng);

    if (t % config.batch == 0 || t == horizon) {
      ++batch_index;
      BatchStatistics stats;
      try {
        stats = protocol.flush(shuffle_rng);
      } catch (const std::exception& e) {
        throw std::runtime_error("protocol failure at batch " +
                                 std::to_string(batch_index) + ": " + e.what());
      }
      if (stats.u.size() != d || stats.v.rows() != d || stats.v.cols() != d)
        throw ShapeError("protocol returned statistics of wrong shape at batch " +
                         std::to_string(batch_index));
      if (!is_exactly_symmetric(stats.v))
        throw ShapeError("protocol returned asymmetric Gram statistics at batch " +
                         std::to_string(batch_index));
      ledger.u += stats.u;
      ledger.v += stats.v;
      ledger.per_batch.push_back(std::move(stats));

      model.theta_hat = ridge_solve(ledger.u, ledger.v);
      model.gram = ledger.v;
      model.beta = confidence_radius(config.ridge.alpha, d, t, lambda);
      model.batch_index = batch_index;
      model.batch_end_time = t;
      result.update_rounds.push_back(t);
    }
  }
  result.final_model = std::move(model);
  return result;
}

}  // namespace slucb
