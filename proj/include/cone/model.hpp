#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cone/community.hpp"
#include "cone/content.hpp"
#include "cone/graph.hpp"
#include "cone/layers.hpp"
#include "cone/tape.hpp"
#include "cone/transition.hpp"

namespace cone {

enum class EncoderKind { kLstm, kFeedforward };

std::string to_string(EncoderKind kind);
EncoderKind parse_encoder(const std::string& name);

struct ModelConfig {
  EncoderKind encoder = EncoderKind::kLstm;
  int k_transitions = 2;
  std::size_t hidden = 16;     // p, LSTM output width
  std::size_t cells = 2;       // d, LSTM cells averaged by mean pooling
  std::size_t input_dim = 16;  // token embedding width fed to each LSTM cell
  std::vector<std::size_t> ff_widths{64, 32, 16};
  double rho = 0.1;
  std::size_t epochs = 300;
  std::size_t max_length = kDefaultMaxLength;
  std::uint64_t seed = 1;
  std::size_t vocab_size = 0;       // V; token indices run 1..V
  std::size_t num_communities = 0;  // K, the softmax width

  /// Throws Error naming the first out-of-range field.
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

enum class EmbeddingRole : std::uint8_t { kContent = 0, kRegularized = 1 };

/// p x n embedding matrix; column i belongs to node i.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t dim, std::size_t nodes, EmbeddingRole role);

  /// From an (n x p) row-per-node buffer.
  static EmbeddingMatrix from_node_rows(const nn::Tensor& rows, EmbeddingRole role);

  std::size_t dim() const { return dim_; }
  std::size_t nodes() const { return nodes_; }
  EmbeddingRole role() const { return role_; }
  void set_role(EmbeddingRole role) { role_ = role; }

  double& at(std::size_t r, std::size_t c) { return data_[r * nodes_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * nodes_ + c]; }
  std::vector<double> column(std::size_t c) const;

  /// (n x p) copy with one row per node.
  nn::Tensor node_rows() const;

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::size_t nodes_ = 0;
  EmbeddingRole role_ = EmbeddingRole::kContent;
  std::vector<double> data_;  // row-major p x n
};

/// Soft targets: a node in m training communities gets 1/m on each of them.
/// Nodes in no training community are left out of the mask.
struct LabelMatrix {
  nn::Tensor targets;  // n x K
  std::vector<std::size_t> mask;
};

LabelMatrix build_labels(std::size_t num_nodes, const CommunitySet& train);

/// Content encoder (d LSTM cells or a feedforward stack) plus softmax weights W (K x p).
class ConeModel {
 public:
  /// Allocates and initializes every block from config.seed.
  explicit ConeModel(ModelConfig config);

  const ModelConfig& config() const { return config_; }
  std::size_t embedding_dim() const;

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;
  nn::Parameter* find(const std::string& name);

  nn::Parameter& softmax_weights() { return softmax_; }
  const nn::Parameter& softmax_weights() const { return softmax_; }

  /// h_i for one node on the given tape.
  nn::Var encode(nn::Tape& t, const ContentSequence& seq) const;

  /// Mean softmax cross-entropy of W s_i over the supervised nodes, recorded on the tape.
  /// `transition` and `labels` must outlive the tape.
  nn::Var loss(nn::Tape& t, std::span<const ContentSequence> sequences, const TransitionMatrix& transition,
               const LabelMatrix& labels) const;

 private:
  ModelConfig config_;
  std::vector<nn::LstmCell> cells_;
  nn::FeedforwardEncoder feedforward_;
  nn::Parameter softmax_;
};

/// H: column i is the mean of the d cell outputs on sequence i.
/// Uses up to CONE_THREADS worker threads; results do not depend on the count.
EmbeddingMatrix encode_contents(const ConeModel& model, std::span<const ContentSequence> sequences);

/// S = H T^k. A step-0 (identity) matrix returns H unchanged.
EmbeddingMatrix regularize(const EmbeddingMatrix& h, const TransitionMatrix& transition);

/// Convenience: S = H T^k computed from the one-step matrix; k = 0 is the identity.
EmbeddingMatrix regularize(const EmbeddingMatrix& h, const TransitionMatrix& one_step, int k);

/// T^k for the model's k (identity when k = 0).
TransitionMatrix regularization_matrix(const Graph& g, int k);

/// Mean softmax cross-entropy of W s_i against the masked label rows.
double forward_loss(const ConeModel& model, const EmbeddingMatrix& s, const LabelMatrix& labels);

struct TrainResult {
  ConeModel model;
  std::vector<double> loss_trace;  // loss before each epoch's update
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

/// Full-batch training: T^k once, then per epoch encode -> regularize -> loss ->
/// backward -> AdaGrad. config.vocab_size and num_communities are filled in when zero.
TrainResult train(const Graph& graph, std::span<const ContentSequence> sequences, const CommunitySet& train_set,
                  ModelConfig config, const EpochCallback& on_epoch = {});

/// Out-of-sample embedding: encode, then regularize with this graph's T^k.
EmbeddingMatrix embed(const ConeModel& model, const Graph& graph, std::span<const ContentSequence> sequences);

/// Worker count from CONE_THREADS (default 1).
std::size_t worker_threads();

}  // namespace cone
