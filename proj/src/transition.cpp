#include "cone/transition.hpp"

#include <algorithm>
#include <utility>

#include "cone/error.hpp"

namespace cone {

using SparseRows = std::vector<std::vector<std::pair<std::size_t, double>>>;

TransitionMatrix TransitionMatrix::identity(std::size_t n) {
  SparseRows rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i].push_back({i, 1.0});
  TransitionMatrix t;
  t.set_rows(n, rows);
  t.steps_ = 0;
  return t;
}

void TransitionMatrix::set_rows(std::size_t n, const SparseRows& rows) {
  n_ = n;
  std::size_t nnz = 0;
  for (const auto& r : rows) nnz += r.size();
  dense_ = n > 0 && static_cast<double>(nnz) > kDenseThreshold * static_cast<double>(n) * static_cast<double>(n);
  offsets_.assign(1, 0);
  cols_.clear();
  values_.clear();
  if (dense_) {
    values_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [j, v] : rows[i]) values_[i * n + j] = v;
  } else {
    cols_.reserve(nnz);
    values_.reserve(nnz);
    for (const auto& r : rows) {
      for (const auto& [j, v] : r) {
        cols_.push_back(j);
        values_.push_back(v);
      }
      offsets_.push_back(cols_.size());
    }
  }
}

std::size_t TransitionMatrix::nonzeros() const {
  if (!dense_) return values_.size();
  std::size_t count = 0;
  for (double v : values_) count += v != 0.0;
  return count;
}

double TransitionMatrix::at(std::size_t i, std::size_t j) const {
  if (dense_) return values_[i * n_ + j];
  for (std::size_t p = offsets_[i]; p < offsets_[i + 1]; ++p)
    if (cols_[p] == j) return values_[p];
  return 0.0;
}

double TransitionMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for_each_in_row(i, [&](std::size_t, double v) { s += v; });
  return s;
}

std::vector<double> TransitionMatrix::to_dense() const {
  std::vector<double> out(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for_each_in_row(i, [&](std::size_t j, double v) { out[i * n_ + j] = v; });
  return out;
}

TransitionMatrix transition_matrix(const Graph& g) {
  const std::size_t n = g.num_nodes();
  SparseRows rows(n);
  for (NodeIndex i = 0; i < n; ++i) {
    const double d = g.degree(i);
    if (d <= 0.0) {
      rows[i].push_back({i, 1.0});
      continue;
    }
    for (const auto& nb : g.out_neighbors(i)) rows[i].push_back({nb.node, nb.weight / d});
  }
  TransitionMatrix t;
  t.set_rows(n, rows);
  t.steps_ = 1;
  return t;
}

TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b) {
  if (a.size() != b.size()) throw Error("transition matrix dimension mismatch");
  const std::size_t n = a.size();
  SparseRows rows(n);
  std::vector<double> acc(n, 0.0);
  std::vector<char> touched(n, 0);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < n; ++i) {
    cols.clear();
    a.for_each_in_row(i, [&](std::size_t j, double aij) {
      b.for_each_in_row(j, [&](std::size_t l, double bjl) {
        if (!touched[l]) {
          touched[l] = 1;
          cols.push_back(l);
        }
        acc[l] += aij * bjl;
      });
    });
    std::sort(cols.begin(), cols.end());
    rows[i].reserve(cols.size());
    for (std::size_t l : cols) {
      if (acc[l] != 0.0) rows[i].push_back({l, acc[l]});
      acc[l] = 0.0;
      touched[l] = 0;
    }
  }
  TransitionMatrix t;
  t.set_rows(n, rows);
  t.steps_ = a.steps() + b.steps();
  return t;
}

TransitionMatrix k_step(const TransitionMatrix& t, int k) {
  if (t.steps() != 1) throw Error("k_step expects a one-step transition matrix");
  if (k < 1) throw Error("k_step requires k >= 1");
  TransitionMatrix result = t;
  for (int s = 1; s < k; ++s) result = multiply(result, t);
  return result;
}

}  // namespace cone
