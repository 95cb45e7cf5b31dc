#include "aaicp/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "aaicp/cloud_io.hpp"

namespace aaicp::bench {
namespace {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return ec == std::errc() ? std::string(buf.data(), ptr) : std::string("nan");
}

template <typename T>
std::string format_optional(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return format_number(*v);
  } else {
    return std::to_string(*v);
  }
}

template <typename T>
T parse_field(std::string_view field, std::size_t line_no, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad value '" + std::string(field) +
                             "' in column " + std::string(column));
  }
  return value;
}

template <typename T>
std::optional<T> parse_optional(std::string_view field, std::size_t line_no, std::string_view column) {
  if (field.empty()) return std::nullopt;
  return parse_field<T>(field, line_no, column);
}

bool parse_flag(std::string_view field, std::size_t line_no, std::string_view column) {
  if (field == "1") return true;
  if (field == "0") return false;
  throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 0/1 in column " +
                           std::string(column));
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double fraction_of(const std::vector<double>& v, bool (*pred)(double)) {
  const auto hits = std::count_if(v.begin(), v.end(), pred);
  return static_cast<double>(hits) / static_cast<double>(v.size());
}

TrialRow make_row(double axis_value, std::size_t trial, std::uint64_t seed, const PairResult& pair, bool timing) {
  TrialRow row;
  row.axis_value = axis_value;
  row.trial = trial;
  row.seed = seed;
  if (pair.picard) {
    row.iters_picard = pair.picard->iterations;
    row.err_picard = pair.picard->final_error();
    row.converged_picard = pair.picard->converged;
    row.wall_ms_picard = timing ? pair.picard->wall_time_s * 1e3 : 0.0;
  }
  if (pair.aa) {
    row.iters_aa = pair.aa->iterations;
    row.err_aa = pair.aa->final_error();
    row.resets_aa = pair.aa->reset_count;
    row.converged_aa = pair.aa->converged;
    row.wall_ms_aa = timing ? pair.aa->wall_time_s * 1e3 : 0.0;
  }
  return row;
}

}  // namespace

std::optional<SweepAxis> axis_from_name(std::string_view name) {
  if (name == "rotation") return SweepAxis::Rotation;
  if (name == "translation") return SweepAxis::Translation;
  if (name == "epsilon") return SweepAxis::Epsilon;
  return std::nullopt;
}

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Rotation:
      return "rotation";
    case SweepAxis::Translation:
      return "translation";
    case SweepAxis::Epsilon:
      return "epsilon";
  }
  return "unknown";
}

std::optional<SolverMode> mode_from_name(std::string_view name) {
  if (name == "both") return SolverMode::Both;
  if (name == "picard") return SolverMode::Picard;
  if (name == "aa") return SolverMode::Aa;
  return std::nullopt;
}

void SweepConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (values.empty()) throw ConfigError("at least one axis value is required");
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("axis values must be finite");
    switch (axis) {
      case SweepAxis::Rotation:
        if (v < 0.0 || v > 180.0) throw ConfigError("rotation values must lie in [0, 180] degrees");
        break;
      case SweepAxis::Translation:
        if (v < 0.0) throw ConfigError("translation values must be >= 0");
        break;
      case SweepAxis::Epsilon:
        if (!(v > 0.0)) throw ConfigError("epsilon values must be > 0");
        break;
    }
  }
  if (!(base_rotation_deg >= 0.0 && base_rotation_deg <= 180.0)) {
    throw ConfigError("base rotation must lie in [0, 180] degrees");
  }
  if (!(base_translation >= 0.0)) throw ConfigError("base translation must be >= 0");
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise sigma must be >= 0");
  if (subsample && *subsample < 3) throw ConfigError("subsample must keep at least 3 points");
  if (!input && shape_points < 10) throw ConfigError("shape needs at least 10 points");
  try {
    aa.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::optional<double> TrialRow::speedup() const {
  if (!iters_picard || !iters_aa || *iters_picard == 0) return std::nullopt;
  const auto p = static_cast<double>(*iters_picard);
  return (p - static_cast<double>(*iters_aa)) / p;
}

std::optional<double> TrialRow::error_improvement() const {
  if (!err_picard || !err_aa) return std::nullopt;
  if (*err_picard == 0.0) {
    return *err_aa == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return (*err_picard - *err_aa) / *err_picard;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("lower_median: empty input");
  }
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

ComparisonStats summarize(const std::vector<TrialRow>& rows) {
  ComparisonStats stats;
  stats.trials = rows.size();
  std::vector<double> speedups, improvements, iters_p, iters_a;
  double resets = 0.0, aa_iterations = 0.0;
  std::size_t not_worse = 0;
  for (const auto& row : rows) {
    if (!row.paired() || !row.speedup()) {
      ++stats.failed;
      continue;
    }
    speedups.push_back(*row.speedup());
    improvements.push_back(*row.error_improvement());
    iters_p.push_back(static_cast<double>(*row.iters_picard));
    iters_a.push_back(static_cast<double>(*row.iters_aa));
    resets += static_cast<double>(row.resets_aa);
    aa_iterations += static_cast<double>(*row.iters_aa);
    if (*row.err_aa <= *row.err_picard) ++not_worse;
  }
  stats.paired = speedups.size();
  if (stats.paired == 0) {
    throw EmptyResultError("summarize: no trial produced records for both solvers");
  }
  stats.median_speedup = lower_median(speedups);
  stats.mean_speedup = mean_of(speedups);
  stats.fraction_accelerated = fraction_of(speedups, [](double s) { return s > 0.0; });
  stats.median_error_improvement = lower_median(improvements);
  stats.mean_error_improvement = mean_of(improvements);
  stats.fraction_error_improved = fraction_of(improvements, [](double e) { return e > 0.0; });
  stats.fraction_error_not_worse = static_cast<double>(not_worse) / static_cast<double>(stats.paired);
  stats.reset_fraction = aa_iterations > 0.0 ? resets / aa_iterations : 0.0;
  stats.median_iters_picard = lower_median(iters_p);
  stats.median_iters_aa = lower_median(iters_a);
  return stats;
}

PairResult run_pair(const IcpMapping& mapping, const Pose6& initial, const AAConfig& config, SolverMode mode) {
  PairResult out;
  if (mode != SolverMode::Aa) {
    try {
      out.picard = run_picard(mapping, initial, config.convergence);
    } catch (const std::exception& e) {
      out.picard_failure = e.what();
    }
  }
  if (mode != SolverMode::Picard) {
    try {
      out.aa = run_aa_icp(mapping, initial, config);
    } catch (const std::exception& e) {
      out.aa_failure = e.what();
    }
  }
  return out;
}

PairResult run_pair(const PointCloud& source, const PointCloud& reference, const Pose6& initial,
                    const AAConfig& config, SolverMode mode) {
  return run_pair(IcpMapping(source, reference), initial, config, mode);
}

TrialSetup prepare_trial(const PointCloud& base, const SweepConfig& config, double axis_value, std::size_t trial) {
  TrialSetup setup;
  setup.seed = mix_seed(config.seed, trial);
  setup.epsilon = config.aa.convergence.epsilon;

  MisalignSpec spec;
  spec.rotation_angle_deg = config.base_rotation_deg;
  spec.translation_distance = config.base_translation;
  switch (config.axis) {
    case SweepAxis::Rotation:
      spec.rotation_angle_deg = axis_value;
      spec.translation_distance = 0.0;
      break;
    case SweepAxis::Translation:
      spec.rotation_angle_deg = 0.0;
      spec.translation_distance = axis_value;
      break;
    case SweepAxis::Epsilon:
      setup.epsilon = axis_value;
      break;
  }
  spec.noise_sigma = config.noise_sigma;
  spec.seed = mix_seed(setup.seed, 3);

  // Independent subsamples stand in for two scans of the same surface.
  if (config.subsample) {
    setup.reference = subsample(base, *config.subsample, mix_seed(setup.seed, 1));
    Misalignment m = random_misalign(subsample(base, *config.subsample, mix_seed(setup.seed, 2)), spec);
    setup.source = std::move(m.source);
    setup.ground_truth = m.ground_truth;
  } else {
    setup.reference = base;
    Misalignment m = random_misalign(base, spec);
    setup.source = std::move(m.source);
    setup.ground_truth = m.ground_truth;
  }
  return setup;
}

PointCloud load_base_cloud(const SweepConfig& config) {
  if (!config.input) {
    return make_test_shape(config.shape, config.shape_points, mix_seed(config.seed, 0xB0));
  }
  const auto format = format_from_path(*config.input);
  if (!format) {
    throw InputError("unrecognized cloud extension: " + config.input->string());
  }
  try {
    PointCloud cloud = load_cloud(*config.input, *format);
    if (cloud.size() < 3) {
      throw InputError("input cloud has fewer than 3 points: " + config.input->string());
    }
    return cloud;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  return run_sweep(config, load_base_cloud(config));
}

SweepResult run_sweep(const SweepConfig& config, const PointCloud& base) {
  config.validate();
  if (config.subsample && *config.subsample > base.size()) {
    throw ConfigError("subsample " + std::to_string(*config.subsample) + " exceeds cloud size " +
                      std::to_string(base.size()));
  }

  const std::size_t jobs = config.values.size() * config.trials;
  std::vector<TrialRow> rows(jobs);
  std::vector<PairResult> pairs(jobs);
  std::vector<std::string> failures(jobs);

  auto run_job = [&](std::size_t job) {
    const double value = config.values[job / config.trials];
    const std::size_t trial = job % config.trials;
    const TrialSetup setup = prepare_trial(base, config, value, trial);
    AAConfig aa = config.aa;
    aa.convergence.epsilon = setup.epsilon;
    PairResult pair;
    try {
      pair = run_pair(IcpMapping(setup.source, setup.reference, config.icp), Pose6::identity(), aa, config.mode);
    } catch (const std::exception& e) {
      pair.picard_failure = pair.aa_failure = e.what();
    }
    rows[job] = make_row(value, trial, setup.seed, pair, config.record_timing);
    std::string msg;
    if (!pair.picard_failure.empty()) msg += "picard: " + pair.picard_failure;
    if (!pair.aa_failure.empty()) msg += (msg.empty() ? "" : "; ") + ("aa: " + pair.aa_failure);
    failures[job] = std::move(msg);
    if (config.keep_records) {
      pairs[job] = std::move(pair);
    }
  };

  std::size_t threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  threads = std::clamp<std::size_t>(threads, 1, jobs);
  if (threads == 1) {
    for (std::size_t job = 0; job < jobs; ++job) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> workers;
      for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
          try {
            for (std::size_t job = next++; job < jobs; job = next++) run_job(job);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  SweepResult result;
  result.rows = std::move(rows);
  if (config.keep_records) {
    result.records = std::move(pairs);
  }
  for (std::size_t job = 0; job < jobs; ++job) {
    if (!failures[job].empty()) {
      result.failures.push_back("value " + format_number(config.values[job / config.trials]) + " trial " +
                                std::to_string(job % config.trials) + ": " + failures[job]);
    }
  }
  for (std::size_t v = 0; v < config.values.size(); ++v) {
    const auto first = result.rows.begin() + static_cast<std::ptrdiff_t>(v * config.trials);
    const std::vector<TrialRow> slice(first, first + static_cast<std::ptrdiff_t>(config.trials));
    AxisSummary summary{config.values[v], std::nullopt};
    if (config.mode == SolverMode::Both) {
      try {
        summary.stats = summarize(slice);
      } catch (const EmptyResultError&) {
      }
    }
    result.summaries.push_back(summary);
  }
  return result;
}

void write_csv(const std::vector<TrialRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.axis_value) << ',' << r.trial << ',' << r.seed << ',' << format_optional(r.iters_picard)
        << ',' << format_optional(r.iters_aa) << ',' << format_optional(r.err_picard) << ','
        << format_optional(r.err_aa) << ',' << format_optional(r.speedup()) << ','
        << format_optional(r.error_improvement()) << ',' << r.resets_aa << ',' << (r.converged_picard ? 1 : 0)
        << ',' << (r.converged_aa ? 1 : 0) << ',' << format_number(r.wall_ms_picard) << ','
        << format_number(r.wall_ms_aa) << '\n';
  }
}

void write_csv(const std::vector<TrialRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  write_csv(rows, out);
  out.flush();
  if (!out) {
    throw std::runtime_error("write to '" + path.string() + "' failed");
  }
}

std::vector<TrialRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("csv: missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw std::runtime_error("csv: unexpected header");
  }
  std::vector<TrialRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != 14) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 14 fields, found " +
                               std::to_string(f.size()));
    }
    TrialRow r;
    r.axis_value = parse_field<double>(f[0], line_no, "axis_value");
    r.trial = parse_field<std::size_t>(f[1], line_no, "trial");
    r.seed = parse_field<std::uint64_t>(f[2], line_no, "seed");
    r.iters_picard = parse_optional<std::size_t>(f[3], line_no, "iters_picard");
    r.iters_aa = parse_optional<std::size_t>(f[4], line_no, "iters_aa");
    r.err_picard = parse_optional<double>(f[5], line_no, "err_picard");
    r.err_aa = parse_optional<double>(f[6], line_no, "err_aa");
    // speedup and err_improvement (f[7], f[8]) are derived from the columns above.
    r.resets_aa = parse_field<std::size_t>(f[9], line_no, "resets_aa");
    r.converged_picard = parse_flag(f[10], line_no, "converged_picard");
    r.converged_aa = parse_flag(f[11], line_no, "converged_aa");
    r.wall_ms_picard = parse_field<double>(f[12], line_no, "wall_ms_picard");
    r.wall_ms_aa = parse_field<double>(f[13], line_no, "wall_ms_aa");
    rows.push_back(r);
  }
  return rows;
}

std::vector<TrialRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  return read_csv(in);
}

}  // namespace aaicp::bench
