#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cone/tape.hpp"
#include "cone/tensor.hpp"
#include "cone/transition.hpp"

namespace cone::nn {

// Differentiable primitives. Each records its result on the tape together with
// the closure that pushes the result's gradient back to its inputs.

/// Row `index` of a (rows x cols) table as a vector.
Var lookup(Tape& t, Var table, std::size_t index);

/// Sum of the given table rows (a multi-hot vector times the table).
Var gather_sum(Tape& t, Var table, std::span<const std::uint32_t> indices);

/// W x for W (r x c) and x (c).
Var matvec(Tape& t, Var w, Var x);

/// W x + b.
Var affine(Tape& t, Var w, Var x, Var b);

Var add(Tape& t, Var a, Var b);
Var hadamard(Tape& t, Var a, Var b);
Var sigmoid(Tape& t, Var a);
Var tanh(Tape& t, Var a);
Var relu(Tape& t, Var a);

/// Elements [offset, offset + length) of a vector.
Var slice(Tape& t, Var a, std::size_t offset, std::size_t length);

/// Coordinate-wise mean of equally sized vectors. Throws on an empty list.
Var mean(Tape& t, std::span<const Var> inputs);

/// Sum of all entries, as a scalar.
Var sum(Tape& t, Var a);

/// Stacks n vectors of length p into an (n x p) matrix.
Var stack_rows(Tape& t, std::span<const Var> rows);

/// Random-walk mixing on row-stacked embeddings: out_i = sum_j t_ji h_j.
Var propagate(Tape& t, Var h, const TransitionMatrix& transition);

/// A B^T for A (n x p) and B (K x p).
Var matmul_nt(Tape& t, Var a, Var b);

/// Mean softmax cross-entropy over the selected rows of an (n x K) logit matrix.
Var softmax_xent_rows(Tape& t, Var logits, const Tensor& targets, std::span<const std::size_t> rows);

// Plain (non-recording) kernels shared by the tape ops and inference code.

/// out[i] += sum_j t_ji h[j] over row-stacked h (n x p).
void propagate_into(const Tensor& h, const TransitionMatrix& transition, Tensor& out);

std::vector<double> softmax(std::span<const double> logits);

struct SoftmaxXent {
  double loss;
  std::vector<double> probabilities;
};

/// Max-subtracted softmax followed by -sum_k target_k log p_k.
SoftmaxXent softmax_xent(std::span<const double> logits, std::span<const double> target);

}  // namespace cone::nn
