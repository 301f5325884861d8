#include "slucb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "slucb/baselines.hpp"
#include "slucb/engine.hpp"
#include "slucb/protocol_vec.hpp"

namespace slucb {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& v) {
  std::size_t pos = 0;
  const double d = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("malformed number: " + v);
  return d;
}

std::int64_t parse_int(const std::string& v) {
  std::size_t pos = 0;
  const std::int64_t i = std::stoll(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("malformed integer: " + v);
  return i;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("malformed boolean: " + v);
}

// "1..50" (inclusive range) or a comma list of integers.
std::vector<std::uint64_t> parse_seeds(const std::string& v) {
  std::vector<std::uint64_t> seeds;
  const auto dots = v.find("..");
  if (dots != std::string::npos) {
    const std::int64_t lo = parse_int(trim(v.substr(0, dots)));
    const std::int64_t hi = parse_int(trim(v.substr(dots + 2)));
    if (lo > hi) throw std::invalid_argument("empty seed range: " + v);
    for (std::int64_t s = lo; s <= hi; ++s)
      seeds.push_back(static_cast<std::uint64_t>(s));
    return seeds;
  }
  for (const std::string& item : split(v, ','))
    seeds.push_back(static_cast<std::uint64_t>(parse_int(item)));
  return seeds;
}

}  // namespace

std::vector<std::uint64_t> ExperimentConfig::effective_seeds() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out(50);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i + 1;
  return out;
}

bool is_known_algo(const std::string& algo) {
  return algo == "linucb" || algo == "ldp" || algo == "jdp" ||
         algo == "sdp-amp" || algo == "sdp-vec";
}

std::string display_label(const std::string& algo) {
  if (algo == "linucb") return "LinUCB";
  if (algo == "ldp") return "LinUCB-LDP";
  if (algo == "jdp") return "LinUCB-JDP";
  if (algo == "sdp-amp") return "LinUCB-SDP";
  if (algo == "sdp-vec") return "LinUCB-SDP-Vec";
  return algo;
}

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "algo") {
    config.algos = split(value, ',');
    for (const std::string& a : config.algos)
      if (!is_known_algo(a)) throw std::invalid_argument("unknown algo: " + a);
  } else if (key == "epsilon") {
    config.epsilons.clear();
    for (const std::string& e : split(value, ','))
      config.epsilons.push_back(parse_double(e));
  } else if (key == "seeds") {
    config.seeds = parse_seeds(value);
  } else if (key == "T") {
    config.horizon = parse_int(value);
  } else if (key == "B") {
    config.batch = static_cast<int>(parse_int(value));
  } else if (key == "baseline_B") {
    config.baseline_batch = static_cast<int>(parse_int(value));
  } else if (key == "d") {
    config.dim = static_cast<int>(parse_int(value));
  } else if (key == "num_arms") {
    config.num_arms = static_cast<int>(parse_int(value));
  } else if (key == "delta") {
    config.delta = parse_double(value);
  } else if (key == "alpha") {
    config.alpha = parse_double(value);
  } else if (key == "returning_users") {
    config.returning_users = parse_bool(value);
  } else if (key == "M0") {
    config.m0 = static_cast<int>(parse_int(value));
  } else if (key == "vec_constant_override") {
    if (value == "theory")
      config.vec_constant_override.reset();
    else
      config.vec_constant_override = parse_double(value);
  } else if (key == "tree_constant") {
    config.tree_constant = parse_double(value);
  } else if (key == "lambda_scale") {
    config.lambda_scale = parse_double(value);
  } else if (key == "fixed_arms") {
    config.fixed_arms = parse_bool(value);
  } else if (key == "grid_points") {
    config.grid_points = static_cast<int>(parse_int(value));
  } else if (key == "full_trace") {
    config.full_trace = parse_bool(value);
  } else if (key == "jobs") {
    config.jobs = static_cast<int>(parse_int(value));
  } else if (key == "out_csv") {
    config.out_csv = value;
  } else if (key == "out_svg") {
    config.out_svg = value;
  } else if (key == "out_budget") {
    config.out_budget = value;
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    try {
      apply_config_entry(config, trim(line.substr(0, eq)),
                         trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " +
                                  e.what());
    }
  }
  return config;
}

ProtocolSetup make_protocol(const ExperimentConfig& config,
                            const std::string& algo, double epsilon) {
  ProtocolSetup setup;
  setup.accounting.epsilon = epsilon;
  setup.accounting.delta = config.delta;
  setup.accounting.horizon = config.horizon;
  setup.accounting.returning_users = config.returning_users;
  setup.accounting.m0 = config.m0;

  if (algo == "linucb") {
    setup.protocol = std::make_unique<IdentityProtocol>();
    setup.batch = config.baseline_batch;
    setup.accounting.kind = ProtocolKind::kNonPrivate;
  } else if (algo == "ldp") {
    setup.batch = config.baseline_batch;
    setup.protocol = std::make_unique<amp::GaussianSumProtocol>(
        make_local_protocol(epsilon, config.delta, setup.batch));
    setup.accounting.kind = ProtocolKind::kLocal;
  } else if (algo == "jdp") {
    setup.batch = config.baseline_batch;
    const std::int64_t leaves =
        (config.horizon + setup.batch - 1) / setup.batch;
    // Returning users may contribute to every leaf unless M0 says otherwise.
    int m0 = config.m0;
    if (config.returning_users)
      m0 = std::max<std::int64_t>(m0, leaves);
    setup.protocol = std::make_unique<CentralTreeProtocol>(
        make_central_protocol(config.dim, epsilon, config.delta, config.horizon,
                              setup.batch, m0, config.tree_constant));
    setup.accounting.kind = ProtocolKind::kCentralTree;
    setup.accounting.m0 = m0;
  } else if (algo == "sdp-amp") {
    setup.batch = config.batch;
    setup.protocol = std::make_unique<amp::GaussianSumProtocol>(
        config.returning_users
            ? amp::make_amp_protocol_returning(epsilon, config.delta,
                                               setup.batch, config.horizon)
            : amp::make_amp_protocol(epsilon, config.delta, setup.batch));
    setup.accounting.kind = ProtocolKind::kShuffleAmp;
  } else if (algo == "sdp-vec") {
    setup.batch = config.batch;
    vec::VecParams params;
    if (config.returning_users) {
      params = vec::calibrate_vec_returning(
          epsilon, config.delta, setup.batch, config.horizon, config.dim,
          config.vec_constant_override.value_or(vec::kTheoryConstantReturning));
    } else {
      params = vec::calibrate_vec(
          epsilon, config.delta, setup.batch, config.dim,
          config.vec_constant_override.value_or(vec::kTheoryConstant));
    }
    setup.protocol = std::make_unique<vec::VecProtocol>(config.dim, params);
    setup.accounting.kind = ProtocolKind::kShuffleVec;
    setup.accounting.vec_constant = config.vec_constant_override;
  } else {
    throw std::invalid_argument("unknown algo: " + algo);
  }
  setup.accounting.batch = setup.batch;
  return setup;
}

namespace {

std::vector<std::int64_t> make_grid(std::int64_t horizon, int grid_points,
                                    bool full_trace) {
  std::vector<std::int64_t> grid;
  if (full_trace || horizon <= grid_points) {
    grid.resize(static_cast<std::size_t>(horizon));
    for (std::int64_t t = 1; t <= horizon; ++t)
      grid[static_cast<std::size_t>(t - 1)] = t;
    return grid;
  }
  grid.reserve(static_cast<std::size_t>(grid_points));
  for (int i = 1; i <= grid_points; ++i) {
    grid.push_back(static_cast<std::int64_t>(
        static_cast<double>(i) * static_cast<double>(horizon) / grid_points));
  }
  grid.back() = horizon;
  return grid;
}

struct EpisodeSpec {
  std::string algo;
  double epsilon;
  std::uint64_t seed;
};

RunRecord run_one(const ExperimentConfig& config, const EpisodeSpec& spec,
                  const std::vector<std::int64_t>& grid) {
  const auto start = std::chrono::steady_clock::now();
  ProtocolSetup setup = make_protocol(config, spec.algo, spec.epsilon);

  EngineConfig engine;
  engine.horizon = config.horizon;
  engine.batch = setup.batch;
  engine.ridge.alpha = config.alpha;
  engine.ridge.lambda =
      config.lambda_scale *
      select_lambda(setup.protocol->sigma_total(config.horizon), config.dim,
                    config.horizon, setup.batch, config.alpha);
  engine.resample_contexts = !config.fixed_arms;

  const BanditInstance instance =
      generate_instance(config.dim, config.num_arms, spec.seed);
  const EpisodeResult episode =
      run_episode(instance, *setup.protocol, engine, spec.seed);

  RunRecord record;
  record.algo = spec.algo;
  record.epsilon = spec.epsilon;
  record.seed = spec.seed;
  record.grid = grid;
  record.regret.reserve(grid.size());
  for (std::int64_t t : grid)
    record.regret.push_back(
        episode.trace.cumulative[static_cast<std::size_t>(t - 1)]);
  record.budget = budget_report(setup.accounting);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

}  // namespace

std::vector<RunRecord> run_matrix(const ExperimentConfig& config) {
  if (config.algos.empty()) throw std::invalid_argument("run_matrix: no algos");
  if (config.epsilons.empty())
    throw std::invalid_argument("run_matrix: no epsilons");
  for (const std::string& a : config.algos)
    if (!is_known_algo(a)) throw std::invalid_argument("unknown algo: " + a);

  const std::vector<std::uint64_t> seeds = config.effective_seeds();
  const std::vector<std::int64_t> grid =
      make_grid(config.horizon, config.grid_points, config.full_trace);

  std::vector<EpisodeSpec> specs;
  for (const std::string& algo : config.algos)
    for (double eps : config.epsilons)
      for (std::uint64_t seed : seeds) specs.push_back({algo, eps, seed});

  std::vector<RunRecord> records(specs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string error_message;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size() || failed.load()) break;
      try {
        records[i] = run_one(config, specs[i], grid);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) {
          error_message = "episode failed (algo=" + specs[i].algo +
                          ", epsilon=" + fmt17(specs[i].epsilon) +
                          ", seed=" + std::to_string(specs[i].seed) +
                          "): " + e.what();
        }
        break;
      }
    }
  };

  const int jobs = std::max(1, std::min<int>(config.jobs,
                                             static_cast<int>(specs.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(jobs));
    for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (failed.load()) throw std::runtime_error(error_message);

  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) {
              return std::tie(a.algo, a.epsilon, a.seed) <
                     std::tie(b.algo, b.epsilon, b.seed);
            });
  return records;
}

void emit_csv(std::span<const RunRecord> records, std::ostream& os) {
  os << "algo,epsilon,seed,t,cumulative_regret\n";
  std::vector<const RunRecord*> sorted;
  sorted.reserve(records.size());
  for (const RunRecord& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const RunRecord* a, const RunRecord* b) {
              return std::tie(a->algo, a->epsilon, a->seed) <
                     std::tie(b->algo, b->epsilon, b->seed);
            });
  for (const RunRecord* r : sorted) {
    for (std::size_t i = 0; i < r->grid.size(); ++i) {
      os << r->algo << ',' << fmt17(r->epsilon) << ',' << r->seed << ','
         << r->grid[i] << ',' << fmt17(r->regret[i]) << '\n';
    }
  }
}

void emit_csv(std::span<const RunRecord> records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  emit_csv(records, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Curve> aggregate_curves(std::span<const RunRecord> records,
                                    double epsilon) {
  std::map<std::string, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records)
    if (r.epsilon == epsilon) groups[r.algo].push_back(&r);
  if (groups.empty())
    throw std::invalid_argument("aggregate_curves: no records at epsilon " +
                                fmt17(epsilon));
  std::vector<Curve> curves;
  for (const auto& [algo, recs] : groups) {
    if (recs.empty())
      throw std::invalid_argument("aggregate_curves: no seeds for " + algo);
    const std::size_t n = recs.size();
    const std::vector<std::int64_t>& grid = recs.front()->grid;
    for (const RunRecord* r : recs)
      if (r->grid != grid)
        throw std::invalid_argument("aggregate_curves: mismatched grids");
    Curve curve;
    curve.label = display_label(algo);
    curve.points.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double mean = 0.0;
      for (const RunRecord* r : recs) mean += r->regret[i];
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (const RunRecord* r : recs) {
        const double dev = r->regret[i] - mean;
        var += dev * dev;
      }
      const double se =
          n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) /
                      std::sqrt(static_cast<double>(n))
                : 0.0;
      curve.points[i] = CurvePoint{grid[i], mean, se};
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::string budget_text(const ExperimentConfig& config) {
  std::string out;
  char buf[64];
  for (const std::string& algo : config.algos) {
    for (double eps : config.epsilons) {
      const ProtocolSetup setup = make_protocol(config, algo, eps);
      const auto res = std::to_chars(buf, buf + sizeof(buf), eps);
      out += "# algo: " + algo +
             "  epsilon: " + std::string(buf, res.ptr) + "\n";
      const std::string block = to_text(budget_report(setup.accounting));
      out += block.empty() ? "(non-private; no budget)\n" : block;
      out += "\n";
    }
  }
  return out;
}

std::vector<CsvRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty CSV: " + path);
  if (trim(line) != "algo,epsilon,seed,t,cumulative_regret")
    throw std::runtime_error("unexpected CSV header in " + path);
  std::vector<CsvRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != 5)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 5 columns");
    rows.push_back(CsvRow{cells[0], parse_double(cells[1]),
                          static_cast<std::uint64_t>(parse_int(cells[2])),
                          parse_int(cells[3]), parse_double(cells[4])});
  }
  return rows;
}

std::vector<RunRecord> records_from_rows(std::span<const CsvRow> rows) {
  std::map<std::tuple<std::string, double, std::uint64_t>, RunRecord> acc;
  for (const CsvRow& row : rows) {
    RunRecord& r = acc[{row.algo, row.epsilon, row.seed}];
    r.algo = row.algo;
    r.epsilon = row.epsilon;
    r.seed = row.seed;
    r.grid.push_back(row.t);
    r.regret.push_back(row.regret);
  }
  std::vector<RunRecord> out;
  out.reserve(acc.size());
  for (auto& [key, record] : acc) out.push_back(std::move(record));
  return out;
}

}  // namespace slucb
