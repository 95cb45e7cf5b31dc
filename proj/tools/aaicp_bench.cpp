// Picard vs Anderson-accelerated ICP sweeps. Writes one CSV row per trial and
// prints per-axis-value aggregates.
//
// Exit codes: 0 success, 1 config error, 2 input-data error, 3 all trials failed.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aaicp/bench.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitInput = 2;
constexpr int kExitAllFailed = 3;

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad value '" + item + "'");
    values.push_back(v);
  }
  return values;
}

void print_summary(const aaicp::bench::SweepConfig& cfg, const aaicp::bench::SweepResult& result) {
  std::printf("%-12s %7s %7s %9s %9s %9s %9s %9s %8s\n", std::string(aaicp::bench::axis_name(cfg.axis)).c_str(),
              "paired", "failed", "it_picard", "it_aa", "med_spdup", "mean_spd", "frac_acc", "resets");
  for (const auto& s : result.summaries) {
    if (!s.stats) {
      std::printf("%-12g %7s\n", s.axis_value, "-");
      continue;
    }
    const auto& st = *s.stats;
    std::printf("%-12g %7zu %7zu %9.1f %9.1f %8.1f%% %8.1f%% %8.1f%% %7.2f%%\n", s.axis_value, st.paired, st.failed,
                st.median_iters_picard, st.median_iters_aa, 100.0 * st.median_speedup, 100.0 * st.mean_speedup,
                100.0 * st.fraction_accelerated, 100.0 * st.reset_fraction);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Picard vs AA-ICP registration benchmark"};

  aaicp::bench::SweepConfig cfg;
  std::string input, shape = "bunny-proxy", axis = "rotation", values, mode = "both", out;
  std::size_t subsample = 0;
  std::string metric = "mse";
  bool no_timing = false, quiet = false, absolute_epsilon = false;

  auto* input_opt = app.add_option("--input", input, "PLY (ascii) or XYZ cloud");
  app.add_option("--shape", shape, "built-in shape: bunny-proxy, sphere-ish, two-planes")->excludes(input_opt);
  app.add_option("--shape-points", cfg.shape_points, "points generated for a built-in shape")
      ->capture_default_str();
  app.add_option("--axis", axis, "swept parameter: rotation (deg), translation (m), epsilon")
      ->capture_default_str();
  app.add_option("--values", values, "comma-separated axis values")->required();
  app.add_option("--trials", cfg.trials, "trials per axis value")->capture_default_str();
  app.add_option("--epsilon", cfg.aa.convergence.epsilon, "convergence threshold on relative error change")
      ->capture_default_str();
  app.add_flag("--absolute-epsilon", absolute_epsilon, "compare raw error change to epsilon instead of relative change");
  app.add_option("--error-metric", metric, "per-step error: mse or mean (distance)")->capture_default_str();
  app.add_option("--max-distance", cfg.icp.max_correspondence_distance, "drop pairs farther apart than this (m)");
  app.add_option("--alpha-limit", cfg.aa.alpha_limit, "bound on |alpha_j|")->capture_default_str();
  app.add_option("--history", cfg.aa.history, "Anderson window limit m")->capture_default_str();
  app.add_option("--max-iters", cfg.aa.convergence.max_iterations, "iteration cap")->capture_default_str();
  app.add_option("--reset-slack", cfg.aa.reset_slack, "reset when error grows by more than this factor")
      ->capture_default_str();
  app.add_option("--noise-sigma", cfg.noise_sigma, "Gaussian noise added to the source (m)")->capture_default_str();
  app.add_option("--subsample", subsample, "independent per-cloud subsample size (0 = off)");
  app.add_option("--rotation", cfg.base_rotation_deg, "rotation (deg) when not sweeping rotation")
      ->capture_default_str();
  app.add_option("--translation", cfg.base_translation, "translation (m) when not sweeping translation")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  app.add_option("--out", out, "CSV output path (stdout if omitted)");
  app.add_option("--mode", mode, "both, picard or aa")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)")->capture_default_str();
  app.add_flag("--no-timing", no_timing, "write 0 for wall-time columns (byte-reproducible CSV)");
  app.add_flag("--quiet", quiet, "suppress the summary table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (!input.empty()) {
      cfg.input = input;
    } else if (auto kind = aaicp::shape_from_name(shape)) {
      cfg.shape = *kind;
    } else {
      throw aaicp::bench::ConfigError("unknown shape '" + shape + "'");
    }
    const auto parsed_axis = aaicp::bench::axis_from_name(axis);
    if (!parsed_axis) throw aaicp::bench::ConfigError("unknown axis '" + axis + "'");
    cfg.axis = *parsed_axis;
    const auto parsed_mode = aaicp::bench::mode_from_name(mode);
    if (!parsed_mode) throw aaicp::bench::ConfigError("unknown mode '" + mode + "'");
    cfg.mode = *parsed_mode;
    try {
      cfg.values = parse_values(values);
    } catch (const std::exception& e) {
      throw aaicp::bench::ConfigError(std::string("--values: ") + e.what());
    }
    if (metric == "mse") {
      cfg.icp.error_metric = aaicp::ErrorMetric::MeanSquaredDistance;
    } else if (metric == "mean") {
      cfg.icp.error_metric = aaicp::ErrorMetric::MeanDistance;
    } else {
      throw aaicp::bench::ConfigError("unknown error metric '" + metric + "'");
    }
    if (absolute_epsilon) cfg.aa.convergence.change = aaicp::ErrorChange::Absolute;
    if (subsample > 0) cfg.subsample = subsample;
    cfg.record_timing = !no_timing;
    cfg.validate();
  } catch (const aaicp::bench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  aaicp::bench::SweepResult result;
  try {
    result = aaicp::bench::run_sweep(cfg);
  } catch (const aaicp::bench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const aaicp::bench::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (out.empty()) {
      aaicp::bench::write_csv(result.rows, std::cout);
    } else {
      aaicp::bench::write_csv(result.rows, std::filesystem::path(out));
    }
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitInput;
  }

  for (const auto& f : result.failures) {
    std::cerr << "trial failed: " << f << '\n';
  }
  if (!quiet && !out.empty()) {
    print_summary(cfg, result);
  }

  const bool any_ok = std::any_of(result.rows.begin(), result.rows.end(), [](const auto& r) {
    return r.iters_picard.has_value() || r.iters_aa.has_value();
  });
  return any_ok ? 0 : kExitAllFailed;
}
