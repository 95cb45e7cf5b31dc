#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace aaicp {

using VectorX = Eigen::VectorXd;

/// Affine weights over the last i+1 mapping images, most recent first:
/// alphas[0] weights g^n, alphas[j] weights g^{n-j}. They sum to one.
struct AlphaSolution {
  std::vector<double> alphas;
  double residual_norm = 0.0;  // || sum_j alphas[j] f^{n-j} ||
};

/// Minimizes || f_0 + sum_{j>=1} a_j (f_j - f_0) || over a, with f_0 the most
/// recent residual, and returns alpha = (1 - sum a, a_1, ..., a_i).
///
/// `residuals` holds one residual per column, most recent first. The
/// difference system is solved with a complete orthogonal decomposition, so a
/// rank-deficient system yields the minimum-norm a. Throws
/// std::invalid_argument for fewer than two columns or non-finite entries.
AlphaSolution solve_alpha(const Eigen::MatrixXd& residuals);
AlphaSolution solve_alpha(std::span<const VectorX> residuals);

/// Sliding window of (u, g = G(u), f = g - u, error) entries for one run.
///
/// Entries are numbered by iteration, starting at 0. The buffer keeps the
/// newest capacity+1 entries (enough for a window of `capacity` differences)
/// and evicts oldest first. The cut-off cursor h only moves forward;
/// usable_window() is min(capacity, n - h) for the newest iteration n.
class AAHistory {
 public:
  struct Entry {
    VectorX u;
    VectorX g;
    VectorX f;
    double error = 0.0;
  };

  explicit AAHistory(std::size_t capacity);

  void push(const VectorX& u, const VectorX& g, double error);

  bool empty() const noexcept { return count_ == 0; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t stored() const noexcept { return count_; }

  /// Iteration index n of the newest entry.
  std::size_t latest_iteration() const;

  std::size_t cursor() const noexcept { return cursor_; }

  /// Moves the cut-off to `iteration`; throws std::logic_error if that would
  /// move it backwards or past the newest entry.
  void reset_cursor(std::size_t iteration);

  std::size_t usable_window() const;

  /// Entry `steps_back` iterations before the newest (0 = newest).
  const Entry& recent(std::size_t steps_back) const;

  /// Residuals f^n, ..., f^{n-window} as columns.
  Eigen::MatrixXd residual_matrix(std::size_t window) const;

 private:
  std::size_t capacity_;
  std::vector<Entry> ring_;
  std::size_t head_ = 0;  // slot the next push writes
  std::size_t count_ = 0;
  std::size_t next_iteration_ = 0;
  std::size_t cursor_ = 0;
};

/// sum_j alphas[j] * g^{n-j}.
VectorX combine_images(const AAHistory& history, const AlphaSolution& solution);

/// One Anderson update over the newest window+1 entries. Window 0 returns g^n
/// unchanged. Throws std::invalid_argument when the history holds fewer than
/// window+1 entries. `solution`, when given, receives the weights used.
VectorX anderson_step(const AAHistory& history, std::size_t window, AlphaSolution* solution = nullptr);

using FixedPointMap = std::function<VectorX(const VectorX&)>;

struct PlainAndersonOptions {
  /// Window cap m. Unset grows the window with every iteration; 0 is Picard.
  std::optional<std::size_t> history_limit;
  std::size_t max_iterations = 100;  // G evaluations
  double tolerance = 1e-10;          // on ||G(u) - u||
};

struct FixedPointTrace {
  std::vector<VectorX> iterates;        // u^0, u^1, ... in evaluation order
  std::vector<double> residual_norms;   // ||G(u^k) - u^k||
  VectorX solution;
  bool converged = false;

  std::size_t evaluations() const noexcept { return iterates.size(); }
};

/// Unsafeguarded Anderson acceleration. Stops once ||f^n|| < tolerance (the
/// solution is then u^n) or after max_iterations evaluations. Throws
/// DivergenceError if an iterate or image becomes non-finite.
FixedPointTrace run_anderson_plain(const FixedPointMap& mapping, const VectorX& initial,
                                   const PlainAndersonOptions& options = {});

}  // namespace aaicp
