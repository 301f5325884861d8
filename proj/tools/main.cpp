#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slucb/experiment.hpp"

namespace {

using slucb::ExperimentConfig;

std::string format_eps(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", eps);
  return buf;
}

std::string svg_path_for(const std::string& base, double eps, bool multi) {
  if (!multi) return base;
  const auto dot = base.rfind('.');
  const std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
  const std::string ext = dot == std::string::npos ? ".svg" : base.substr(dot);
  return stem + "_eps" + format_eps(eps) + ext;
}

struct ConfigCli {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> entries;
  bool paper_figure1 = false;
  bool desk_scale = false;
  bool theory_constants = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file");
    auto entry = [this](const std::string& key) {
      return [this, key](const std::string& value) {
        entries.emplace_back(key, value);
      };
    };
    cmd->add_option_function<std::string>("--algo", entry("algo"),
        "comma list of linucb,ldp,jdp,sdp-amp,sdp-vec");
    cmd->add_option_function<std::string>("--epsilon", entry("epsilon"),
        "comma list of privacy levels");
    cmd->add_option_function<std::string>("--T", entry("T"), "horizon");
    cmd->add_option_function<std::string>("--B", entry("B"),
        "batch size for the shuffle protocols");
    cmd->add_option_function<std::string>("--baseline-B", entry("baseline_B"),
        "batch size for linucb/jdp/ldp (default 1: sequential)");
    cmd->add_option_function<std::string>("--d", entry("d"), "feature dimension");
    cmd->add_option_function<std::string>("--arms", entry("num_arms"),
        "arms per round");
    cmd->add_option_function<std::string>("--delta", entry("delta"), "delta");
    cmd->add_option_function<std::string>("--alpha", entry("alpha"),
        "confidence level");
    cmd->add_option_function<std::string>("--seeds", entry("seeds"),
        "seed list: 1..50 or 3,5,9");
    cmd->add_option_function<std::string>("--returning", entry("returning_users"),
        "returning-user calibrations (true/false)");
    cmd->add_option_function<std::string>("--M0", entry("M0"),
        "max rounds per user (central model)");
    cmd->add_option_function<std::string>("--vec-constant",
        entry("vec_constant_override"),
        "override the vector-sum leading constant");
    cmd->add_flag("--theory-constants", theory_constants,
        "use the stated theory constant for sdp-vec");
    cmd->add_option_function<std::string>("--tree-constant",
        entry("tree_constant"),
        "leading constant of the tree-mechanism noise (default 1.25)");
    cmd->add_option_function<std::string>("--lambda-scale",
        entry("lambda_scale"),
        "multiplier on the selected regularizer (default 2)");
    cmd->add_option_function<std::string>("--fixed-arms", entry("fixed_arms"),
        "freeze the round-1 arm set (debugging)");
    cmd->add_option_function<std::string>("--grid-points", entry("grid_points"),
        "output grid points per curve (default 400)");
    cmd->add_option_function<std::string>("--full-trace", entry("full_trace"),
        "emit every round instead of the downsampled grid");
    cmd->add_option_function<std::string>("--jobs", entry("jobs"),
        "worker threads");
    cmd->add_option_function<std::string>("--out-csv", entry("out_csv"),
        "CSV output path");
    cmd->add_option_function<std::string>("--out-svg", entry("out_svg"),
        "SVG output path (per-epsilon suffix when several)");
    cmd->add_option_function<std::string>("--out-budget", entry("out_budget"),
        "budget report output path");
    cmd->add_flag("--paper-figure1", paper_figure1,
        "reference preset: 5 algos, eps 0.2/1/10, T=20000, 50 seeds");
    cmd->add_flag("--desk-scale", desk_scale,
        "shrink the preset to T=5000, 20 seeds");
  }

  ExperimentConfig build() const {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = slucb::parse_config_file(config_path);
    bool vec_constant_explicit = false;
    if (paper_figure1 || desk_scale) {
      slucb::apply_config_entry(cfg, "algo", "linucb,jdp,sdp-amp,sdp-vec,ldp");
      slucb::apply_config_entry(cfg, "epsilon", "0.2,1,10");
      slucb::apply_config_entry(cfg, "T", desk_scale ? "5000" : "20000");
      slucb::apply_config_entry(cfg, "B", "20");
      slucb::apply_config_entry(cfg, "baseline_B", "1");
      slucb::apply_config_entry(cfg, "d", "5");
      slucb::apply_config_entry(cfg, "num_arms", "100");
      slucb::apply_config_entry(cfg, "delta", "0.1");
      slucb::apply_config_entry(cfg, "seeds", desk_scale ? "1..20" : "1..50");
    }
    for (const auto& [key, value] : entries) {
      slucb::apply_config_entry(cfg, key, value);
      if (key == "vec_constant_override") vec_constant_explicit = true;
    }
    if (theory_constants) {
      cfg.vec_constant_override.reset();
    } else if (!cfg.vec_constant_override.has_value() && !vec_constant_explicit) {
      // Demo-scale default: the theory constant drowns the signal at desk
      // scale; the budget report flags the substitution.
      for (const std::string& algo : cfg.algos)
        if (algo == "sdp-vec") cfg.vec_constant_override = 10.0;
    }
    return cfg;
  }
};

int cmd_run(const ConfigCli& cli) {
  const ExperimentConfig cfg = cli.build();
  const std::vector<slucb::RunRecord> records = slucb::run_matrix(cfg);
  slucb::emit_csv(records, cfg.out_csv);
  std::cout << "wrote " << cfg.out_csv << "\n";

  const bool multi = cfg.epsilons.size() > 1;
  for (double eps : cfg.epsilons) {
    const std::vector<slucb::Curve> curves = slucb::aggregate_curves(records, eps);
    const std::string path = svg_path_for(cfg.out_svg, eps, multi);
    slucb::emit_chart(curves, path);
    std::cout << "wrote " << path << "\n";
  }

  std::ofstream budget(cfg.out_budget, std::ios::binary);
  if (!budget) throw std::runtime_error("cannot open " + cfg.out_budget);
  budget << slucb::budget_text(cfg);
  std::cout << "wrote " << cfg.out_budget << "\n";

  for (double eps : cfg.epsilons) {
    for (const slucb::Curve& curve : slucb::aggregate_curves(records, eps)) {
      std::printf("epsilon=%s  %-18s final regret %10.2f +- %.2f\n",
                  format_eps(eps).c_str(), curve.label.c_str(),
                  curve.points.back().mean, curve.points.back().se);
    }
  }
  double wall = 0.0;
  for (const slucb::RunRecord& r : records) wall += r.wall_seconds;
  std::fprintf(stderr, "total episode time: %.1fs over %zu episodes\n", wall,
               records.size());
  return 0;
}

int cmd_accounting(const ConfigCli& cli) {
  std::cout << slucb::budget_text(cli.build());
  return 0;
}

int cmd_chart(const std::string& csv_path, const std::string& out,
              const std::vector<double>& epsilons) {
  const std::vector<slucb::CsvRow> rows = slucb::read_csv(csv_path);
  const std::vector<slucb::RunRecord> records = slucb::records_from_rows(rows);
  std::vector<double> targets = epsilons;
  if (targets.empty()) {
    std::set<double> all;
    for (const slucb::RunRecord& r : records) all.insert(r.epsilon);
    targets.assign(all.begin(), all.end());
  }
  const bool multi = targets.size() > 1;
  for (double eps : targets) {
    const std::vector<slucb::Curve> curves = slucb::aggregate_curves(records, eps);
    const std::string path = svg_path_for(out, eps, multi);
    slucb::emit_chart(curves, path);
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shuffle-private batched LinUCB simulator"};
  app.require_subcommand(1);

  ConfigCli run_cli;
  CLI::App* run = app.add_subcommand("run", "run an experiment matrix");
  run_cli.attach(run);

  ConfigCli acct_cli;
  CLI::App* acct =
      app.add_subcommand("accounting", "print privacy budget reports");
  acct_cli.attach(acct);

  std::string chart_csv;
  std::string chart_out = "regret.svg";
  std::vector<double> chart_eps;
  CLI::App* chart = app.add_subcommand("chart", "render an SVG from a CSV");
  chart->add_option("--csv", chart_csv, "input CSV")->required();
  chart->add_option("--out", chart_out, "output SVG path");
  chart->add_option("--epsilon", chart_eps, "epsilon(s) to plot");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_cli);
    if (acct->parsed()) return cmd_accounting(acct_cli);
    if (chart->parsed()) return cmd_chart(chart_csv, chart_out, chart_eps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
