#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cone/graph.hpp"

namespace cone {

/// Row-stochastic random-walk matrix T (or a power T^k).
///
/// Stored as CSR; switches to a dense row-major buffer once more than a quarter
/// of the entries are non-zero, which powers of T on small ego-nets reach fast.
class TransitionMatrix {
 public:
  static constexpr double kDenseThreshold = 0.25;

  TransitionMatrix() = default;

  static TransitionMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  int steps() const { return steps_; }
  bool is_dense() const { return dense_; }
  std::size_t nonzeros() const;

  double at(std::size_t i, std::size_t j) const;
  double row_sum(std::size_t i) const;

  /// Calls f(j, t_ij) for every stored non-zero of row i, ascending j.
  template <typename F>
  void for_each_in_row(std::size_t i, F&& f) const {
    if (dense_) {
      const double* row = values_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (row[j] != 0.0) f(j, row[j]);
    } else {
      for (std::size_t p = offsets_[i]; p < offsets_[i + 1]; ++p) f(cols_[p], values_[p]);
    }
  }

  std::vector<double> to_dense() const;

 private:
  friend TransitionMatrix transition_matrix(const Graph& g);
  friend TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b);

  void set_rows(std::size_t n, const std::vector<std::vector<std::pair<std::size_t, double>>>& rows);

  std::size_t n_ = 0;
  int steps_ = 1;
  bool dense_ = false;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

/// t_ij = w_ij / d_i over out-neighbours; a node without out-edges gets t_ii = 1.
TransitionMatrix transition_matrix(const Graph& g);

/// Matrix product; the result's step count is a.steps() + b.steps().
TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b);

/// T^k for a one-step matrix, k >= 1.
TransitionMatrix k_step(const TransitionMatrix& t, int k);

}  // namespace cone
