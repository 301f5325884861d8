#include "slucb/accounting.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace slucb {

AmplifiedBudget amplified_epsilon(double epsilon0, double delta0,
                                  std::int64_t n, double delta_prime) {
  if (n < 1) throw std::invalid_argument("amplified_epsilon: n must be >= 1");
  if (epsilon0 <= 0.0)
    throw std::invalid_argument("amplified_epsilon: epsilon0 must be > 0");
  if (delta0 < 0.0)
    throw std::invalid_argument("amplified_epsilon: delta0 must be >= 0");
  if (delta_prime <= 0.0 || delta_prime > 1.0)
    throw std::invalid_argument("amplified_epsilon: delta_prime outside (0,1]");

  const double e0 = std::exp(epsilon0);
  const double dn = static_cast<double>(n);
  const double eps_tilde = std::log1p(
      (e0 - 1.0) / (e0 + 1.0) *
      (8.0 * std::sqrt(e0 * std::log(4.0 / delta_prime)) / std::sqrt(dn) +
       8.0 * e0 / dn));
  const double delta_tilde =
      delta_prime +
      (std::exp(eps_tilde) + 1.0) * (1.0 + std::exp(-epsilon0) / 2.0) * dn * delta0;

  AmplifiedBudget out;
  out.epsilon = eps_tilde;
  out.delta = delta_tilde;
  out.applicable =
      epsilon0 <= std::log(dn / (16.0 * std::log(2.0 / delta_prime)));
  return out;
}

double advanced_composition(double epsilon_total, double delta_prime,
                            std::int64_t k) {
  if (epsilon_total <= 0.0 || epsilon_total > 1.0)
    throw std::domain_error("advanced_composition: epsilon_total outside (0,1]");
  if (delta_prime <= 0.0 || delta_prime >= 1.0)
    throw std::invalid_argument("advanced_composition: delta_prime outside (0,1)");
  if (k < 1) throw std::invalid_argument("advanced_composition: k must be >= 1");
  return epsilon_total /
         (2.0 * std::sqrt(2.0 * static_cast<double>(k) *
                          std::log(1.0 / delta_prime)));
}

std::string to_string(TrustModel model) {
  switch (model) {
    case TrustModel::kLDP: return "LDP";
    case TrustModel::kSDP: return "SDP";
    case TrustModel::kJDP: return "JDP";
  }
  return "?";
}

namespace {

BudgetReport make_report(TrustModel model, double epsilon, double delta,
                         std::vector<std::string> assumptions) {
  if (epsilon <= 0.0)
    throw std::invalid_argument("budget report: epsilon must be > 0");
  if (delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("budget report: delta outside [0,1)");
  return BudgetReport{model, epsilon, delta, std::move(assumptions)};
}

std::int64_t batch_count(const ProtocolConfig& c) {
  if (c.horizon < c.batch || c.batch < 1)
    throw std::invalid_argument("budget_report: need 1 <= B <= T");
  return (c.horizon + c.batch - 1) / c.batch;
}

void append_amp(std::vector<BudgetReport>& out, const ProtocolConfig& c) {
  const double b = static_cast<double>(c.batch);
  if (!c.returning_users) {
    std::vector<std::string> sdp{"unique users", "up to constants"};
    if (c.epsilon > std::sqrt(std::log(2.0 / c.delta) / b))
      sdp.push_back("epsilon outside the stated range of the amplification guarantee - asymptotic only");
    out.push_back(make_report(TrustModel::kSDP, c.epsilon, c.delta, sdp));
    out.push_back(make_report(
        TrustModel::kJDP, c.epsilon, c.delta,
        {"unique users", "post-processing of the shuffle output",
         "up to constants"}));
    out.push_back(make_report(
        TrustModel::kLDP, c.epsilon * std::sqrt(b / std::log(2.0 / c.delta)),
        c.delta / b, {"Gaussian mechanism", "up to constants"}));
    return;
  }
  const std::int64_t m = batch_count(c);
  const double eps_m =
      c.epsilon / (2.0 * std::sqrt(2.0 * static_cast<double>(m) *
                                   std::log(2.0 / c.delta)));
  const double delta_m = c.delta / (2.0 * static_cast<double>(m));
  std::vector<std::string> sdp{
      "returning users, " + std::to_string(m) + " batches", "up to constants"};
  if (c.epsilon >
      (2.0 / b) * std::log(2.0 / c.delta) * std::sqrt(2.0 * c.horizon))
    sdp.push_back("epsilon outside the stated range of the amplification guarantee - asymptotic only");
  out.push_back(make_report(TrustModel::kSDP, c.epsilon, c.delta, sdp));
  out.push_back(make_report(
      TrustModel::kSDP, eps_m, delta_m,
      {"per batch, advanced composition across " + std::to_string(m) +
       " batches"}));
  out.push_back(make_report(
      TrustModel::kJDP, c.epsilon, c.delta,
      {"returning users", "post-processing of the shuffle output",
       "up to constants"}));
}

void append_vec(std::vector<BudgetReport>& out, const ProtocolConfig& c) {
  std::vector<std::string> basis;
  if (c.vec_constant.has_value()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", *c.vec_constant);
    basis.push_back("demo-scale constant C=" + std::string(buf) +
                    " - stated calibration constant replaced, guarantee informal");
  } else {
    basis.push_back("non-asymptotic calibration");
  }
  if (!c.returning_users) {
    std::vector<std::string> sdp = basis;
    sdp.insert(sdp.begin(), "unique users");
    out.push_back(make_report(TrustModel::kSDP, c.epsilon, c.delta, sdp));
    std::vector<std::string> jdp = basis;
    jdp.insert(jdp.begin(), "unique users");
    jdp.push_back("post-processing of the shuffle output");
    out.push_back(make_report(TrustModel::kJDP, c.epsilon, c.delta, jdp));
    out.push_back(make_report(
        TrustModel::kLDP, c.epsilon * std::sqrt(static_cast<double>(c.batch)),
        c.delta,
        {"amplification of the binomial mechanism - loose bound",
         "up to constants"}));
    return;
  }
  const std::int64_t m = batch_count(c);
  const double eps_m =
      c.epsilon / (2.0 * std::sqrt(2.0 * static_cast<double>(m) *
                                   std::log(2.0 / c.delta)));
  const double delta_m = c.delta / (2.0 * static_cast<double>(m));
  std::vector<std::string> sdp = basis;
  sdp.insert(sdp.begin(),
             "returning users, " + std::to_string(m) + " batches");
  out.push_back(make_report(TrustModel::kSDP, c.epsilon, c.delta, sdp));
  out.push_back(make_report(
      TrustModel::kSDP, eps_m, delta_m,
      {"per batch, advanced composition across " + std::to_string(m) +
       " batches"}));
  std::vector<std::string> jdp = basis;
  jdp.insert(jdp.begin(), "returning users");
  jdp.push_back("post-processing of the shuffle output");
  out.push_back(make_report(TrustModel::kJDP, c.epsilon, c.delta, jdp));
}

}  // namespace

std::vector<BudgetReport> budget_report(const ProtocolConfig& config) {
  std::vector<BudgetReport> out;
  switch (config.kind) {
    case ProtocolKind::kNonPrivate:
      break;
    case ProtocolKind::kLocal:
      out.push_back(make_report(
          TrustModel::kLDP, config.epsilon, config.delta,
          {"Gaussian mechanism on unit-sensitivity statistics"}));
      break;
    case ProtocolKind::kCentralTree: {
      std::vector<std::string> a{
          "tree-based mechanism; per-node noise constants implementation-chosen"};
      if (config.m0 > 1)
        a.push_back("user-level, at most " + std::to_string(config.m0) +
                    " rounds per user");
      else
        a.push_back("event-level (unique users)");
      out.push_back(
          make_report(TrustModel::kJDP, config.epsilon, config.delta, a));
      break;
    }
    case ProtocolKind::kShuffleAmp:
      append_amp(out, config);
      break;
    case ProtocolKind::kShuffleVec:
      append_vec(out, config);
      break;
  }
  return out;
}

namespace {

// shortest decimal that round-trips
std::string fmt_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_text(std::span<const BudgetReport> reports) {
  std::string out;
  bool first = true;
  for (const BudgetReport& r : reports) {
    if (!first) out += "\n";
    first = false;
    out += "model: " + to_string(r.model) + "\n";
    out += "epsilon: " + fmt_shortest(r.epsilon) + "\n";
    out += "delta: " + fmt_shortest(r.delta) + "\n";
    out += "assumptions:";
    for (std::size_t i = 0; i < r.assumptions.size(); ++i) {
      out += (i == 0 ? " " : "; ") + r.assumptions[i];
    }
    out += "\n";
  }
  return out;
}

}  // namespace slucb
