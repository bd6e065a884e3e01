#include "cone/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "cone/error.hpp"
#include "cone/ops.hpp"
#include "cone/optim.hpp"
#include "cone/rng.hpp"

namespace cone {

std::string to_string(EncoderKind kind) { return kind == EncoderKind::kLstm ? "lstm" : "feedforward"; }

EncoderKind parse_encoder(const std::string& name) {
  if (name == "lstm") return EncoderKind::kLstm;
  if (name == "feedforward") return EncoderKind::kFeedforward;
  throw Error("unknown encoder '" + name + "' (expected lstm or feedforward)");
}

void ModelConfig::validate() const {
  if (k_transitions < 0) throw Error("k_transitions must be >= 0");
  if (encoder == EncoderKind::kLstm) {
    if (hidden < 1) throw Error("hidden size p must be >= 1");
    if (cells < 1) throw Error("cell count d must be >= 1");
    if (input_dim < 1) throw Error("input_dim must be >= 1");
  } else {
    if (ff_widths.empty()) throw Error("feedforward encoder needs layer widths");
    for (auto w : ff_widths)
      if (w < 1) throw Error("feedforward widths must be >= 1");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Error("rho must be positive");
  if (max_length < 1) throw Error("max_length must be >= 1");
  if (num_communities < 1) throw Error("model needs at least one community (K >= 1)");
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t dim, std::size_t nodes, EmbeddingRole role)
    : dim_(dim), nodes_(nodes), role_(role), data_(dim * nodes, 0.0) {}

EmbeddingMatrix EmbeddingMatrix::from_node_rows(const nn::Tensor& rows, EmbeddingRole role) {
  EmbeddingMatrix m(rows.cols(), rows.rows(), role);
  for (std::size_t i = 0; i < rows.rows(); ++i)
    for (std::size_t k = 0; k < rows.cols(); ++k) m.at(k, i) = rows.at(i, k);
  return m;
}

std::vector<double> EmbeddingMatrix::column(std::size_t c) const {
  std::vector<double> out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) out[r] = at(r, c);
  return out;
}

nn::Tensor EmbeddingMatrix::node_rows() const {
  nn::Tensor t({nodes_, dim_});
  for (std::size_t i = 0; i < nodes_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) t.at(i, k) = at(k, i);
  return t;
}

LabelMatrix build_labels(std::size_t num_nodes, const CommunitySet& train) {
  const std::size_t K = train.size();
  if (K == 0) throw Error("no training communities");
  std::vector<std::vector<std::size_t>> memberships(num_nodes);
  for (std::size_t k = 0; k < K; ++k)
    for (NodeIndex v : train.communities[k].members) {
      if (v >= num_nodes) throw Error("training community member outside the graph");
      memberships[v].push_back(k);
    }
  LabelMatrix labels{nn::Tensor({num_nodes, K}), {}};
  for (std::size_t i = 0; i < num_nodes; ++i) {
    if (memberships[i].empty()) continue;
    const double w = 1.0 / static_cast<double>(memberships[i].size());
    for (std::size_t k : memberships[i]) labels.targets.at(i, k) = w;
    labels.mask.push_back(i);
  }
  return labels;
}

ConeModel::ConeModel(ModelConfig config) : config_(std::move(config)) {
  config_.validate();
  Rng rng(sub_seed(config_.seed, "init"));
  if (config_.encoder == EncoderKind::kLstm) {
    cells_.reserve(config_.cells);
    for (std::size_t c = 0; c < config_.cells; ++c) {
      cells_.emplace_back("cell" + std::to_string(c), config_.vocab_size, config_.input_dim, config_.hidden);
      cells_.back().initialize(rng);
    }
  } else {
    feedforward_ = nn::FeedforwardEncoder(config_.vocab_size, config_.ff_widths);
    feedforward_.initialize(rng);
  }
  softmax_ = nn::Parameter("softmax.weight", nn::Tensor({config_.num_communities, embedding_dim()}));
}

std::size_t ConeModel::embedding_dim() const {
  return config_.encoder == EncoderKind::kLstm ? config_.hidden : config_.ff_widths.back();
}

std::vector<nn::Parameter*> ConeModel::parameters() {
  std::vector<nn::Parameter*> out;
  for (auto& cell : cells_)
    for (auto* p : cell.parameters()) out.push_back(p);
  if (config_.encoder == EncoderKind::kFeedforward)
    for (auto* p : feedforward_.parameters()) out.push_back(p);
  out.push_back(&softmax_);
  return out;
}

std::vector<const nn::Parameter*> ConeModel::parameters() const {
  auto params = const_cast<ConeModel*>(this)->parameters();
  return {params.begin(), params.end()};
}

nn::Parameter* ConeModel::find(const std::string& name) {
  for (auto* p : parameters())
    if (p->name == name) return p;
  return nullptr;
}

nn::Var ConeModel::encode(nn::Tape& t, const ContentSequence& seq) const {
  if (config_.encoder == EncoderKind::kFeedforward) return nn::feedforward_forward(t, feedforward_, seq);
  std::vector<nn::Var> outputs;
  outputs.reserve(cells_.size());
  for (const auto& cell : cells_) outputs.push_back(nn::lstm_forward(t, cell, seq));
  return nn::mean(t, outputs);
}

nn::Var ConeModel::loss(nn::Tape& t, std::span<const ContentSequence> sequences, const TransitionMatrix& transition,
                        const LabelMatrix& labels) const {
  if (sequences.size() != transition.size()) throw Error("sequence count does not match graph size");
  if (labels.mask.empty()) throw Error("no supervised nodes: label mask is empty");
  std::vector<nn::Var> rows;
  rows.reserve(sequences.size());
  for (const auto& seq : sequences) rows.push_back(encode(t, seq));
  nn::Var h = nn::stack_rows(t, rows);
  nn::Var s = nn::propagate(t, h, transition);
  nn::Var logits = nn::matmul_nt(t, s, t.parameter(softmax_));
  return nn::softmax_xent_rows(t, logits, labels.targets, labels.mask);
}

std::size_t worker_threads() {
  const char* env = std::getenv("CONE_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) {
    warn("ignoring invalid CONE_THREADS value '" + std::string(env) + "'");
    return 1;
  }
  return static_cast<std::size_t>(v);
}

EmbeddingMatrix encode_contents(const ConeModel& model, std::span<const ContentSequence> sequences) {
  const std::size_t n = sequences.size();
  const std::size_t p = model.embedding_dim();
  nn::Tensor rows({n, p});
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      nn::Tape t;
      const nn::Tensor& h = t.value(model.encode(t, sequences[i]));
      std::copy(h.data().begin(), h.data().end(), rows.row(i).begin());
    }
  };
  const std::size_t threads = std::min(worker_threads(), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(std::min(n, w * chunk), std::min(n, (w + 1) * chunk));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return EmbeddingMatrix::from_node_rows(rows, EmbeddingRole::kContent);
}

EmbeddingMatrix regularize(const EmbeddingMatrix& h, const TransitionMatrix& transition) {
  if (h.nodes() != transition.size())
    throw Error("embedding has " + std::to_string(h.nodes()) + " columns but the transition matrix is " +
                std::to_string(transition.size()) + " wide");
  if (transition.steps() == 0) {
    EmbeddingMatrix s = h;
    s.set_role(EmbeddingRole::kRegularized);
    return s;
  }
  nn::Tensor in = h.node_rows();
  nn::Tensor out(in.shape());
  nn::propagate_into(in, transition, out);
  return EmbeddingMatrix::from_node_rows(out, EmbeddingRole::kRegularized);
}

EmbeddingMatrix regularize(const EmbeddingMatrix& h, const TransitionMatrix& one_step, int k) {
  if (k < 0) throw Error("k must be >= 0");
  if (k == 0) return regularize(h, TransitionMatrix::identity(one_step.size()));
  return regularize(h, k_step(one_step, k));
}

TransitionMatrix regularization_matrix(const Graph& g, int k) {
  if (k < 0) throw Error("k must be >= 0");
  if (k == 0) return TransitionMatrix::identity(g.num_nodes());
  return k_step(transition_matrix(g), k);
}

double forward_loss(const ConeModel& model, const EmbeddingMatrix& s, const LabelMatrix& labels) {
  if (labels.mask.empty()) throw Error("no supervised nodes: label mask is empty");
  const auto& W = model.softmax_weights().value;
  if (s.dim() != W.cols()) throw Error("embedding width does not match softmax weights");
  if (labels.targets.rows() != s.nodes() || labels.targets.cols() != W.rows())
    throw Error("label matrix shape does not match embeddings and model");
  double total = 0.0;
  std::vector<double> logits(W.rows());
  for (std::size_t i : labels.mask) {
    for (std::size_t k = 0; k < W.rows(); ++k) {
      double z = 0.0;
      for (std::size_t c = 0; c < W.cols(); ++c) z += W.at(k, c) * s.at(c, i);
      logits[k] = z;
    }
    total += nn::softmax_xent(logits, labels.targets.row(i)).loss;
  }
  return total / static_cast<double>(labels.mask.size());
}

TrainResult train(const Graph& graph, std::span<const ContentSequence> sequences, const CommunitySet& train_set,
                  ModelConfig config, const EpochCallback& on_epoch) {
  if (train_set.empty()) throw Error("training needs at least one community");
  if (sequences.size() != graph.num_nodes()) throw Error("need one content sequence per node");
  if (config.num_communities == 0) config.num_communities = train_set.size();
  if (config.num_communities != train_set.size())
    throw Error("config K=" + std::to_string(config.num_communities) + " but " + std::to_string(train_set.size()) +
                " training communities were given");
  if (config.vocab_size == 0) {
    for (const auto& seq : sequences)
      for (auto tok : seq.tokens) config.vocab_size = std::max<std::size_t>(config.vocab_size, tok);
  }

  TrainResult result{ConeModel(config), {}};
  ConeModel& model = result.model;
  const LabelMatrix labels = build_labels(graph.num_nodes(), train_set);
  const TransitionMatrix tk = regularization_matrix(graph, config.k_transitions);
  auto params = model.parameters();

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    nn::Tape t;
    nn::Var loss = model.loss(t, sequences, tk, labels);
    const double value = t.value(loss)[0];
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "training diverged at epoch " << epoch << ": loss is " << value;
      if (!result.loss_trace.empty()) msg << " (previous " << result.loss_trace.back() << ")";
      throw DivergenceError(msg.str());
    }
    result.loss_trace.push_back(value);
    if (on_epoch) on_epoch(epoch, value);
    t.backward(loss);
    t.accumulate_grads(params);
    nn::adagrad_step(params, config.rho);
  }
  return result;
}

EmbeddingMatrix embed(const ConeModel& model, const Graph& graph, std::span<const ContentSequence> sequences) {
  if (sequences.size() != graph.num_nodes()) throw Error("need one content sequence per node");
  return regularize(encode_contents(model, sequences), regularization_matrix(graph, model.config().k_transitions));
}

}  // namespace cone
