#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace slucb {

/// Shuffle-amplification result. `applicable` is false when
/// epsilon0 > log(n / (16 log(2/delta_prime))), i.e. outside the range the
/// amplification bound is stated for; the closed form is still returned.
struct AmplifiedBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  bool applicable = true;
};

/// Closed-form amplification of an (epsilon0, delta0)-local randomizer
/// shuffled over n reports, at auxiliary parameter delta_prime:
///   eps~ = log(1 + (e^e0 - 1)/(e^e0 + 1) * (8 sqrt(e^e0 log(4/d')) / sqrt(n)
///                                           + 8 e^e0 / n))
///   del~ = d' + (e^eps~ + 1)(1 + e^-e0 / 2) n delta0.
AmplifiedBudget amplified_epsilon(double epsilon0, double delta0,
                                  std::int64_t n, double delta_prime);

/// Per-mechanism epsilon so that k adaptive mechanisms compose to
/// (epsilon_total, k*delta_each + delta_prime)-DP:
///   epsilon_total / (2 sqrt(2 k log(1/delta_prime))).
/// epsilon_total must lie in (0, 1).
double advanced_composition(double epsilon_total, double delta_prime,
                            std::int64_t k);

enum class TrustModel { kLDP, kSDP, kJDP };

std::string to_string(TrustModel model);

/// One privacy figure a configuration earns under one trust model, with the
/// assumptions it depends on spelled out.
struct BudgetReport {
  TrustModel model = TrustModel::kSDP;
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<std::string> assumptions;
};

enum class ProtocolKind { kNonPrivate, kLocal, kCentralTree, kShuffleAmp, kShuffleVec };

/// Everything the accountant needs to know about a configured protocol.
struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::kNonPrivate;
  double epsilon = 0.0;
  double delta = 0.0;
  int batch = 1;
  std::int64_t horizon = 0;
  bool returning_users = false;
  int m0 = 1;
  std::optional<double> vec_constant;  // set when the leading constant of the
                                       // vector-sum calibration was overridden
};

/// All privacy figures the configuration earns (LDP / SDP / JDP as
/// applicable). Figures derived through asymptotic statements carry an
/// "up to constants" assumption; an SDP figure always implies the JDP figure
/// by post-processing.
std::vector<BudgetReport> budget_report(const ProtocolConfig& config);

/// Key-value text block, one `key: value` line per field, entries separated
/// by blank lines. See README for the schema.
std::string to_text(std::span<const BudgetReport> reports);

}  // namespace slucb
