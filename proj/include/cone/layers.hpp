#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cone/content.hpp"
#include "cone/ops.hpp"
#include "cone/rng.hpp"
#include "cone/tape.hpp"

namespace cone::nn {

inline constexpr double kInitScale = 0.08;

/// Fills a parameter uniformly in [-scale, scale].
void init_uniform(Parameter& p, Rng& rng, double scale = kInitScale);

/// One LSTM cell with its own token table.
///
/// Gate rows are stacked as [input, forget, output, candidate], each `hidden` wide:
///   z = Wx x_t + Wh h_{t-1} + b
///   c_t = f * c_{t-1} + i * g,  h_t = o * tanh(c_t)
struct LstmCell {
  Parameter token_table;  // (vocab + 1) x input_dim, row 0 is padding
  Parameter wx;           // 4h x input_dim
  Parameter wh;           // 4h x h
  Parameter bias;         // 4h

  LstmCell() = default;
  LstmCell(const std::string& prefix, std::size_t vocab_size, std::size_t input_dim, std::size_t hidden);

  std::size_t hidden() const { return wh.value.cols(); }
  std::size_t vocab_size() const { return token_table.value.rows() - 1; }

  /// Small-uniform weights, zero biases except the forget gate at 1.0.
  void initialize(Rng& rng);

  std::vector<Parameter*> parameters();
};

/// Final hidden state after reading the sequence; the zero vector for an empty one.
Var lstm_forward(Tape& t, const LstmCell& cell, const ContentSequence& seq);
Tensor lstm_forward(const LstmCell& cell, const ContentSequence& seq);

/// Coordinate-wise mean of d vectors.
Tensor mean_pool(std::span<const Tensor> vectors);

struct DenseLayer {
  Parameter weight;  // out x in
  Parameter bias;    // out
};

DenseLayer make_dense(const std::string& name, std::size_t in, std::size_t out);

/// Affine + ReLU on every layer except the last, which stays linear.
Var dense_relu_stack(Tape& t, Var input, std::span<const DenseLayer> layers);
Tensor dense_relu_stack(const Tensor& input, std::span<const DenseLayer> layers);

/// Bag-of-tokens feedforward encoder: a summed token table acts as the first
/// (ReLU) layer over the multi-hot content vector, followed by a dense stack.
struct FeedforwardEncoder {
  Parameter token_table;  // (vocab + 1) x widths[0]
  Parameter input_bias;   // widths[0]
  std::vector<DenseLayer> layers;

  FeedforwardEncoder() = default;
  FeedforwardEncoder(std::size_t vocab_size, const std::vector<std::size_t>& widths);

  std::size_t output_dim() const;
  std::size_t vocab_size() const { return token_table.value.rows() - 1; }
  void initialize(Rng& rng);
  std::vector<Parameter*> parameters();
};

Var feedforward_forward(Tape& t, const FeedforwardEncoder& enc, const ContentSequence& seq);

}  // namespace cone::nn
