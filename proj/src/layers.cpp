#include "cone/layers.hpp"

#include "cone/error.hpp"

namespace cone::nn {

void init_uniform(Parameter& p, Rng& rng, double scale) {
  for (double& v : p.value.data()) v = uniform(rng, -scale, scale);
}

LstmCell::LstmCell(const std::string& prefix, std::size_t vocab_size, std::size_t input_dim, std::size_t hidden)
    : token_table(prefix + ".tokens", Tensor({vocab_size + 1, input_dim})),
      wx(prefix + ".wx", Tensor({4 * hidden, input_dim})),
      wh(prefix + ".wh", Tensor({4 * hidden, hidden})),
      bias(prefix + ".bias", Tensor({4 * hidden})) {
  if (hidden == 0 || input_dim == 0) throw Error("LSTM sizes must be positive");
}

void LstmCell::initialize(Rng& rng) {
  init_uniform(token_table, rng);
  init_uniform(wx, rng);
  init_uniform(wh, rng);
  bias.value.fill(0.0);
  const std::size_t h = hidden();
  for (std::size_t k = h; k < 2 * h; ++k) bias.value[k] = 1.0;
}

std::vector<Parameter*> LstmCell::parameters() { return {&token_table, &wx, &wh, &bias}; }

Var lstm_forward(Tape& t, const LstmCell& cell, const ContentSequence& seq) {
  const std::size_t h = cell.hidden();
  if (seq.tokens.empty()) return t.constant(Tensor({h}));
  Var table = t.parameter(cell.token_table);
  Var wx = t.parameter(cell.wx);
  Var wh = t.parameter(cell.wh);
  Var b = t.parameter(cell.bias);
  Var hidden, state;
  for (std::size_t step = 0; step < seq.tokens.size(); ++step) {
    const auto token = seq.tokens[step];
    if (token == 0 || token > cell.vocab_size())
      throw Error("token " + std::to_string(token) + " outside vocabulary of size " + std::to_string(cell.vocab_size()));
    Var x = lookup(t, table, token);
    Var z = affine(t, wx, x, b);
    if (step > 0) z = add(t, z, matvec(t, wh, hidden));
    Var in = sigmoid(t, slice(t, z, 0, h));
    Var forget = sigmoid(t, slice(t, z, h, h));
    Var out = sigmoid(t, slice(t, z, 2 * h, h));
    Var cand = tanh(t, slice(t, z, 3 * h, h));
    Var ig = hadamard(t, in, cand);
    state = step > 0 ? add(t, hadamard(t, forget, state), ig) : ig;
    hidden = hadamard(t, out, tanh(t, state));
  }
  return hidden;
}

Tensor lstm_forward(const LstmCell& cell, const ContentSequence& seq) {
  Tape t;
  return t.value(lstm_forward(t, cell, seq));
}

Tensor mean_pool(std::span<const Tensor> vectors) {
  Tape t;
  std::vector<Var> vars;
  vars.reserve(vectors.size());
  for (const auto& v : vectors) vars.push_back(t.constant(v));
  return t.value(mean(t, vars));
}

DenseLayer make_dense(const std::string& name, std::size_t in, std::size_t out) {
  return {Parameter(name + ".weight", Tensor({out, in})), Parameter(name + ".bias", Tensor({out}))};
}

Var dense_relu_stack(Tape& t, Var input, std::span<const DenseLayer> layers) {
  Var x = input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].weight.value.cols() != t.value(x).size())
      throw Error("dense layer " + layers[l].weight.name + " expects input of " +
                  std::to_string(layers[l].weight.value.cols()) + ", got " + std::to_string(t.value(x).size()));
    x = affine(t, t.parameter(layers[l].weight), x, t.parameter(layers[l].bias));
    if (l + 1 < layers.size()) x = relu(t, x);
  }
  return x;
}

Tensor dense_relu_stack(const Tensor& input, std::span<const DenseLayer> layers) {
  Tape t;
  return t.value(dense_relu_stack(t, t.constant(input), layers));
}

FeedforwardEncoder::FeedforwardEncoder(std::size_t vocab_size, const std::vector<std::size_t>& widths) {
  if (widths.empty()) throw Error("feedforward encoder needs at least one layer width");
  for (auto w : widths)
    if (w == 0) throw Error("feedforward widths must be positive");
  token_table = Parameter("ff.tokens", Tensor({vocab_size + 1, widths[0]}));
  input_bias = Parameter("ff.bias0", Tensor({widths[0]}));
  for (std::size_t l = 1; l < widths.size(); ++l)
    layers.push_back(make_dense("ff.layer" + std::to_string(l), widths[l - 1], widths[l]));
}

std::size_t FeedforwardEncoder::output_dim() const {
  return layers.empty() ? input_bias.value.size() : layers.back().bias.value.size();
}

void FeedforwardEncoder::initialize(Rng& rng) {
  init_uniform(token_table, rng);
  input_bias.value.fill(0.0);
  for (auto& l : layers) {
    init_uniform(l.weight, rng);
    l.bias.value.fill(0.0);
  }
}

std::vector<Parameter*> FeedforwardEncoder::parameters() {
  std::vector<Parameter*> out{&token_table, &input_bias};
  for (auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

Var feedforward_forward(Tape& t, const FeedforwardEncoder& enc, const ContentSequence& seq) {
  if (seq.tokens.empty()) return t.constant(Tensor({enc.output_dim()}));
  for (auto token : seq.tokens)
    if (token == 0 || token > enc.vocab_size())
      throw Error("token " + std::to_string(token) + " outside vocabulary of size " + std::to_string(enc.vocab_size()));
  Var first = add(t, gather_sum(t, t.parameter(enc.token_table), seq.tokens), t.parameter(enc.input_bias));
  // a single configured width means the input layer is also the (linear) output layer
  if (enc.layers.empty()) return first;
  return dense_relu_stack(t, relu(t, first), enc.layers);
}

}  // namespace cone::nn
