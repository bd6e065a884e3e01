#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cone/analysis.hpp"
#include "cone/graph.hpp"

namespace cone {

inline constexpr std::size_t kDefaultMaxLength = 512;

/// Token indices of one node's contents, each in [1, V]. Index 0 is padding and never emitted.
struct ContentSequence {
  NodeIndex node = 0;
  std::vector<std::uint32_t> tokens;

  bool operator==(const ContentSequence&) const = default;
};

/// Bijective token <-> index table with indices in [1, size()].
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  std::optional<std::uint32_t> index_of(std::string_view token) const;
  const std::string& token(std::uint32_t index) const { return tokens_.at(index - 1); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Keeps tokens seen at least `min_count` times, most frequent first, ties lexicographic.
Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus, std::size_t min_count);

/// s_i = { j | a_ij != 0 } as 1-based indices in ascending column order, truncated to max_len.
ContentSequence attrs_to_sequence(const NodeAttributes& attrs, NodeIndex node,
                                  std::size_t max_len = kDefaultMaxLength);

std::vector<ContentSequence> attrs_to_sequences(const NodeAttributes& attrs,
                                                std::size_t max_len = kDefaultMaxLength);

/// Turns raw text into normalized terms. Implementations must be pure.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> terms(std::string_view text) const = 0;
};

/// Lowercase, split on non-alphanumerics, drop stop words, strip plural/-ing/-ed suffixes.
class SimpleTokenizer : public Tokenizer {
 public:
  SimpleTokenizer();  // bundled English stop-word list
  explicit SimpleTokenizer(std::unordered_set<std::string> stop_words);

  static SimpleTokenizer from_stop_word_file(const std::string& path);

  std::vector<std::string> terms(std::string_view text) const override;
  bool is_stop_word(const std::string& word) const { return stop_words_.count(word) > 0; }

 private:
  std::unordered_set<std::string> stop_words_;
};

/// Suffix-stripping stemmer for plurals, -ing and -ed.
std::string stem(std::string word);

const std::vector<std::string>& default_stop_words();

/// Concatenates the node's documents in order, tokenizes, maps through the
/// vocabulary (dropping unknown terms) and truncates to max_len.
ContentSequence text_to_sequence(const std::vector<std::string>& texts, const Vocabulary& vocab, NodeIndex node,
                                 const Tokenizer& tokenizer, std::size_t max_len = kDefaultMaxLength);
ContentSequence text_to_sequence(const std::vector<std::string>& texts, const Vocabulary& vocab, NodeIndex node,
                                 std::size_t max_len = kDefaultMaxLength);

}  // namespace cone
