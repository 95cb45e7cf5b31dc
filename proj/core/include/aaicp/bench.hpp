#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aaicp/aa_icp.hpp"
#include "aaicp/point_cloud.hpp"
#include "aaicp/synth.hpp"

namespace aaicp::bench {

enum class SweepAxis { Rotation, Translation, Epsilon };
enum class SolverMode { Both, Picard, Aa };

std::optional<SweepAxis> axis_from_name(std::string_view name);
std::string_view axis_name(SweepAxis axis);
std::optional<SolverMode> mode_from_name(std::string_view name);

/// Thrown for an invalid sweep configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when the input cloud cannot be read (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by summarize() when no trial produced a pair of records.
class EmptyResultError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepConfig {
  std::optional<std::filesystem::path> input;  // PLY or XYZ; overrides `shape`
  ShapeKind shape = ShapeKind::BunnyProxy;
  std::size_t shape_points = 20000;

  SweepAxis axis = SweepAxis::Rotation;
  std::vector<double> values;
  std::size_t trials = 50;

  AAConfig aa;  // epsilon and max_iterations apply to both solvers
  IcpOptions icp;

  // Misalignment for the axes that are not being swept.
  double base_rotation_deg = 10.0;
  double base_translation = 0.0;

  double noise_sigma = 0.0;
  std::optional<std::size_t> subsample;
  std::uint64_t seed = 1;

  SolverMode mode = SolverMode::Both;
  std::size_t threads = 0;  // 0: hardware concurrency
  bool record_timing = true;
  bool keep_records = false;  // retain full RunRecords in SweepResult

  /// Throws ConfigError.
  void validate() const;
};

/// One CSV row. A missing solver side (not run, or failed) has no iterations.
struct TrialRow {
  double axis_value = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> iters_picard;
  std::optional<std::size_t> iters_aa;
  std::optional<double> err_picard;
  std::optional<double> err_aa;
  std::size_t resets_aa = 0;
  bool converged_picard = false;
  bool converged_aa = false;
  double wall_ms_picard = 0.0;
  double wall_ms_aa = 0.0;

  bool paired() const { return iters_picard && iters_aa && err_picard && err_aa; }
  std::optional<double> speedup() const;
  std::optional<double> error_improvement() const;

  friend bool operator==(const TrialRow&, const TrialRow&) = default;
};

struct ComparisonStats {
  std::size_t trials = 0;  // rows considered
  std::size_t paired = 0;  // rows entering the aggregates
  std::size_t failed = 0;  // rows with a missing side

  double median_speedup = 0.0;
  double mean_speedup = 0.0;
  double fraction_accelerated = 0.0;  // speedup > 0
  double median_error_improvement = 0.0;
  double mean_error_improvement = 0.0;
  double fraction_error_improved = 0.0;  // err_aa < err_picard
  double fraction_error_not_worse = 0.0;  // err_aa <= err_picard
  double reset_fraction = 0.0;            // sum(resets_aa) / sum(iters_aa)
  double median_iters_picard = 0.0;
  double median_iters_aa = 0.0;

  friend bool operator==(const ComparisonStats&, const ComparisonStats&) = default;
};

/// sorted[(n - 1) / 2], i.e. the lower median. Throws on empty input.
double lower_median(std::vector<double> values);

/// Aggregates over rows where both solvers produced a record; the rest are
/// counted as failed. Throws EmptyResultError when nothing is paired.
ComparisonStats summarize(const std::vector<TrialRow>& rows);

struct PairResult {
  std::optional<RunRecord> picard;
  std::optional<RunRecord> aa;
  std::string picard_failure;
  std::string aa_failure;
};

/// Runs both solvers from the same initial pose with the same stopping rule.
/// A solver that throws leaves its side empty with the message recorded; the
/// other side still runs.
PairResult run_pair(const IcpMapping& mapping, const Pose6& initial, const AAConfig& config,
                    SolverMode mode = SolverMode::Both);
PairResult run_pair(const PointCloud& source, const PointCloud& reference, const Pose6& initial,
                    const AAConfig& config, SolverMode mode = SolverMode::Both);

/// The source/reference pair for one trial. Random choices depend only on
/// (master seed, trial index), so every axis value reuses the same axes,
/// directions and samples and only the magnitude changes.
struct TrialSetup {
  PointCloud source;
  PointCloud reference;
  RigidTransform ground_truth;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
};

TrialSetup prepare_trial(const PointCloud& base, const SweepConfig& config, double axis_value, std::size_t trial);

struct AxisSummary {
  double axis_value = 0.0;
  std::optional<ComparisonStats> stats;  // unset when nothing paired
};

struct SweepResult {
  std::vector<TrialRow> rows;  // axis-value major, trial minor
  std::vector<AxisSummary> summaries;
  std::vector<PairResult> records;  // parallel to rows when keep_records is set
  std::vector<std::string> failures;
};

/// Loads the configured input (or builds the shape). Throws InputError.
PointCloud load_base_cloud(const SweepConfig& config);

SweepResult run_sweep(const SweepConfig& config);
SweepResult run_sweep(const SweepConfig& config, const PointCloud& base);

inline constexpr std::string_view kCsvHeader =
    "axis_value,trial,seed,iters_picard,iters_aa,err_picard,err_aa,speedup,err_improvement,"
    "resets_aa,converged_picard,converged_aa,wall_ms_picard,wall_ms_aa";

void write_csv(const std::vector<TrialRow>& rows, std::ostream& out);
void write_csv(const std::vector<TrialRow>& rows, const std::filesystem::path& path);

/// Parses what write_csv produced. Throws std::runtime_error on a bad header or
/// malformed row.
std::vector<TrialRow> read_csv(std::istream& in);
std::vector<TrialRow> read_csv(const std::filesystem::path& path);

}  // namespace aaicp::bench
