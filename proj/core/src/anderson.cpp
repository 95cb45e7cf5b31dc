#include "aaicp/anderson.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <stdexcept>
#include <string>

#include "aaicp/errors.hpp"

namespace aaicp {

AlphaSolution solve_alpha(const Eigen::MatrixXd& residuals) {
  const Eigen::Index cols = residuals.cols();
  if (cols < 2) {
    throw std::invalid_argument("solve_alpha: need at least two residuals");
  }
  if (!residuals.allFinite()) {
    throw std::invalid_argument("solve_alpha: non-finite residual");
  }

  const Eigen::VectorXd f0 = residuals.col(0);
  const Eigen::MatrixXd diffs = residuals.rightCols(cols - 1).colwise() - f0;

  Eigen::VectorXd tail = Eigen::VectorXd::Zero(cols - 1);
  if (!diffs.isZero(0.0)) {
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(diffs);
    tail = cod.solve(-f0);
  }

  AlphaSolution out;
  out.alphas.resize(static_cast<std::size_t>(cols));
  out.alphas[0] = 1.0 - tail.sum();
  for (Eigen::Index j = 1; j < cols; ++j) {
    out.alphas[static_cast<std::size_t>(j)] = tail[j - 1];
  }
  out.residual_norm = (f0 + diffs * tail).norm();
  return out;
}

AlphaSolution solve_alpha(std::span<const VectorX> residuals) {
  if (residuals.size() < 2) {
    throw std::invalid_argument("solve_alpha: need at least two residuals");
  }
  Eigen::MatrixXd m(residuals.front().size(), static_cast<Eigen::Index>(residuals.size()));
  for (std::size_t j = 0; j < residuals.size(); ++j) {
    if (residuals[j].size() != m.rows()) {
      throw std::invalid_argument("solve_alpha: residual dimensions differ");
    }
    m.col(static_cast<Eigen::Index>(j)) = residuals[j];
  }
  return solve_alpha(m);
}

AAHistory::AAHistory(std::size_t capacity) : capacity_(capacity), ring_(capacity + 1) {}

void AAHistory::push(const VectorX& u, const VectorX& g, double error) {
  if (u.size() != g.size()) {
    throw std::invalid_argument("AAHistory::push: u and g differ in dimension");
  }
  if (count_ > 0 && u.size() != recent(0).u.size()) {
    throw std::invalid_argument("AAHistory::push: dimension changed mid-run");
  }
  Entry& slot = ring_[head_];
  slot.u = u;
  slot.g = g;
  slot.f = g - u;
  slot.error = error;
  head_ = (head_ + 1) % ring_.size();
  count_ = std::min(count_ + 1, ring_.size());
  ++next_iteration_;
}

std::size_t AAHistory::latest_iteration() const {
  if (count_ == 0) {
    throw std::logic_error("AAHistory: no entries");
  }
  return next_iteration_ - 1;
}

void AAHistory::reset_cursor(std::size_t iteration) {
  if (iteration < cursor_) {
    throw std::logic_error("AAHistory::reset_cursor: cursor may not move backwards");
  }
  if (iteration > latest_iteration()) {
    throw std::logic_error("AAHistory::reset_cursor: cursor beyond newest entry");
  }
  cursor_ = iteration;
}

std::size_t AAHistory::usable_window() const {
  if (count_ == 0) {
    return 0;
  }
  return std::min(capacity_, latest_iteration() - cursor_);
}

const AAHistory::Entry& AAHistory::recent(std::size_t steps_back) const {
  if (steps_back >= count_) {
    throw std::out_of_range("AAHistory::recent: entry " + std::to_string(steps_back) + " not retained");
  }
  const std::size_t slot = (head_ + ring_.size() - 1 - steps_back) % ring_.size();
  return ring_[slot];
}

Eigen::MatrixXd AAHistory::residual_matrix(std::size_t window) const {
  if (window + 1 > count_) {
    throw std::invalid_argument("AAHistory::residual_matrix: window exceeds stored history");
  }
  const VectorX& newest = recent(0).f;
  Eigen::MatrixXd m(newest.size(), static_cast<Eigen::Index>(window + 1));
  for (std::size_t j = 0; j <= window; ++j) {
    m.col(static_cast<Eigen::Index>(j)) = recent(j).f;
  }
  return m;
}

VectorX combine_images(const AAHistory& history, const AlphaSolution& solution) {
  if (solution.alphas.empty() || solution.alphas.size() > history.stored()) {
    throw std::invalid_argument("combine_images: weights do not match stored history");
  }
  VectorX out = solution.alphas[0] * history.recent(0).g;
  for (std::size_t j = 1; j < solution.alphas.size(); ++j) {
    out += solution.alphas[j] * history.recent(j).g;
  }
  return out;
}

VectorX anderson_step(const AAHistory& history, std::size_t window, AlphaSolution* solution) {
  if (window + 1 > history.stored()) {
    throw std::invalid_argument("anderson_step: window " + std::to_string(window) + " needs " +
                                std::to_string(window + 1) + " entries, history holds " +
                                std::to_string(history.stored()));
  }
  if (window == 0) {
    if (solution != nullptr) {
      *solution = AlphaSolution{{1.0}, history.recent(0).f.norm()};
    }
    return history.recent(0).g;
  }
  AlphaSolution alpha = solve_alpha(history.residual_matrix(window));
  VectorX next = combine_images(history, alpha);
  if (solution != nullptr) {
    *solution = std::move(alpha);
  }
  return next;
}

FixedPointTrace run_anderson_plain(const FixedPointMap& mapping, const VectorX& initial,
                                   const PlainAndersonOptions& options) {
  FixedPointTrace trace;
  // Without a cap the window grows with n, so the buffer must hold every
  // iteration.
  const std::size_t capacity = options.history_limit.value_or(options.max_iterations);
  AAHistory history(capacity);

  VectorX u = initial;
  for (std::size_t n = 0; n < options.max_iterations; ++n) {
    if (!u.allFinite()) {
      throw DivergenceError("run_anderson_plain: non-finite iterate at n=" + std::to_string(n));
    }
    const VectorX g = mapping(u);
    if (!g.allFinite()) {
      throw DivergenceError("run_anderson_plain: non-finite image at n=" + std::to_string(n));
    }
    history.push(u, g, 0.0);
    const double residual = history.recent(0).f.norm();
    trace.iterates.push_back(u);
    trace.residual_norms.push_back(residual);
    if (residual < options.tolerance) {
      trace.solution = u;
      trace.converged = true;
      return trace;
    }
    u = anderson_step(history, std::min(capacity, n));
  }
  trace.solution = u;
  return trace;
}

}  // namespace aaicp
