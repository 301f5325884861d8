#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slucb/accounting.hpp"
#include "slucb/protocol.hpp"

namespace slucb {

/// Experiment matrix: one episode per (algo, epsilon, seed). Defaults follow
/// the reference simulation setup (T = 20000, d = 5, 100 arms, delta = 0.1,
/// B = 20, 50 seeds). `batch` applies to the shuffle protocols; the
/// non-private, local and central baselines run at `baseline_batch`
/// (sequential by default).
struct ExperimentConfig {
  std::vector<std::string> algos = {"linucb"};
  std::vector<double> epsilons = {0.2, 1.0, 10.0};
  std::vector<std::uint64_t> seeds;  // empty means 1..50
  std::int64_t horizon = 20000;
  int batch = 20;
  int baseline_batch = 1;
  int dim = 5;
  int num_arms = 100;
  double delta = 0.1;
  double alpha = 0.1;
  bool returning_users = false;
  int m0 = 1;
  std::optional<double> vec_constant_override;
  double tree_constant = 1.25;  // kStandardTreeConstant; see tree.hpp
  double lambda_scale = 2.0;    // engine lambda = lambda_scale * select_lambda(...);
                                // 2 keeps the noisy Gram matrix positive
                                // definite with margin (1 is borderline)
  bool fixed_arms = false;
  int grid_points = 400;
  bool full_trace = false;
  int jobs = 1;
  std::string out_csv = "results.csv";
  std::string out_svg = "regret.svg";
  std::string out_budget = "budget.txt";

  std::vector<std::uint64_t> effective_seeds() const;
};

/// Valid values for ExperimentConfig::algos.
bool is_known_algo(const std::string& algo);

/// Chart/legend display name of an algo id.
std::string display_label(const std::string& algo);

/// One episode's downsampled outcome.
struct RunRecord {
  std::string algo;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> grid;   // round indices, last one = horizon
  std::vector<double> regret;       // cumulative regret at grid rounds
  double wall_seconds = 0.0;        // not serialized
  std::vector<BudgetReport> budget;
};

/// Applies `key = value` to the config; throws on unknown keys or malformed
/// values. Keys are the ExperimentConfig field names (see README).
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

/// Flat key-value config file, UTF-8, `#` comments.
ExperimentConfig parse_config_file(const std::string& path);

/// Protocol instance plus engine batch size for one (algo, epsilon) cell.
struct ProtocolSetup {
  std::unique_ptr<ShuffleProtocol> protocol;
  int batch = 1;
  ProtocolConfig accounting;
};
ProtocolSetup make_protocol(const ExperimentConfig& config,
                            const std::string& algo, double epsilon);

/// Runs the full matrix, in `config.jobs` worker threads. Results are
/// deterministic and independent of the scheduling. An episode failure
/// aborts with the offending (algo, epsilon, seed) triple in the message.
std::vector<RunRecord> run_matrix(const ExperimentConfig& config);

/// CSV with header algo,epsilon,seed,t,cumulative_regret; rows sorted by
/// that tuple; floats printed with 17 significant digits; LF line endings.
void emit_csv(std::span<const RunRecord> records, std::ostream& os);
void emit_csv(std::span<const RunRecord> records, const std::string& path);

struct CurvePoint {
  std::int64_t t = 0;
  double mean = 0.0;
  double se = 0.0;
};

struct Curve {
  std::string label;
  std::vector<CurvePoint> points;
};

/// Mean and standard error over seeds per grid point for every algo in
/// `records` at the given epsilon. Rejects groups with no seeds.
std::vector<Curve> aggregate_curves(std::span<const RunRecord> records,
                                    double epsilon);

/// Static SVG line chart: one polyline per curve, a standard-error band per
/// curve, labeled axes. The y-axis maximum is the largest final mean regret.
std::string render_chart(std::span<const Curve> curves);
void emit_chart(std::span<const Curve> curves, const std::string& path);

/// Budget text blocks for every (algo, epsilon) cell of the config.
std::string budget_text(const ExperimentConfig& config);

/// Minimal reader for the CSV schema emitted above (used by `chart`).
struct CsvRow {
  std::string algo;
  double epsilon;
  std::uint64_t seed;
  std::int64_t t;
  double regret;
};
std::vector<CsvRow> read_csv(const std::string& path);
std::vector<RunRecord> records_from_rows(std::span<const CsvRow> rows);

}  // namespace slucb
