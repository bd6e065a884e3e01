#include "cone/content.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "cone/error.hpp"

namespace cone {

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<std::uint32_t>(i + 1)).second)
      throw Error("duplicate vocabulary token: " + tokens_[i]);
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& corpus, std::size_t min_count) {
  if (min_count < 1) throw Error("min_count must be >= 1");
  std::map<std::string, std::size_t> freq;
  for (const auto& doc : corpus)
    for (const auto& t : doc) ++freq[t];
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [t, c] : freq)
    if (c >= min_count) kept.emplace_back(t, c);
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [t, c] : kept) tokens.push_back(t);
  return Vocabulary(std::move(tokens));
}

ContentSequence attrs_to_sequence(const NodeAttributes& attrs, NodeIndex node, std::size_t max_len) {
  ContentSequence seq{node, {}};
  for (const auto& [col, v] : attrs.row(node)) {
    if (seq.tokens.size() >= max_len) break;
    if (v != 0.0) seq.tokens.push_back(col + 1);
  }
  return seq;
}

std::vector<ContentSequence> attrs_to_sequences(const NodeAttributes& attrs, std::size_t max_len) {
  std::vector<ContentSequence> out;
  out.reserve(attrs.rows());
  for (std::size_t i = 0; i < attrs.rows(); ++i) out.push_back(attrs_to_sequence(attrs, static_cast<NodeIndex>(i), max_len));
  return out;
}

const std::vector<std::string>& default_stop_words() {
  static const std::vector<std::string> words = {
      "a",       "about",   "above",  "after",   "again",  "against", "all",    "am",      "an",
      "and",     "any",     "are",    "as",      "at",     "be",      "because", "been",   "before",
      "being",   "below",   "between", "both",   "but",    "by",      "can",    "could",   "did",
      "do",      "does",    "doing",  "down",    "during", "each",    "few",    "for",     "from",
      "further", "had",     "has",    "have",    "having", "he",      "her",    "here",    "hers",
      "herself", "him",     "himself", "his",    "how",    "i",       "if",     "in",      "into",
      "is",      "it",      "its",    "itself",  "just",   "me",      "more",   "most",    "my",
      "myself",  "no",      "nor",    "not",     "now",    "of",      "off",    "on",      "once",
      "only",    "or",      "other",  "our",     "ours",   "ourselves", "out",  "over",    "own",
      "same",    "she",     "should", "so",      "some",   "such",    "than",   "that",    "the",
      "their",   "theirs",  "them",   "themselves", "then", "there",  "these",  "they",    "this",
      "those",   "through", "to",     "too",     "under",  "until",   "up",     "very",    "was",
      "we",      "were",    "what",   "when",    "where",  "which",   "while",  "who",     "whom",
      "why",     "will",    "with",   "would",   "you",    "your",    "yours",  "yourself", "yourselves",
  };
  return words;
}

SimpleTokenizer::SimpleTokenizer()
    : stop_words_(default_stop_words().begin(), default_stop_words().end()) {}

SimpleTokenizer::SimpleTokenizer(std::unordered_set<std::string> stop_words) : stop_words_(std::move(stop_words)) {}

SimpleTokenizer SimpleTokenizer::from_stop_word_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stop-word file " + path);
  std::unordered_set<std::string> words;
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return SimpleTokenizer(std::move(words));
}

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return is_vowel(c) || c == 'y'; });
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string stem(std::string w) {
  // plurals
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies") && w.size() > 4) {
    w.replace(w.size() - 3, 3, "y");
  } else if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && w.size() > 3) {
    w.pop_back();
  }
  // -ing / -ed, only when a vowel remains in the stem
  for (std::string_view suffix : {std::string_view("ing"), std::string_view("ed")}) {
    if (ends_with(w, suffix) && w.size() > suffix.size() + 2 && has_vowel(std::string_view(w).substr(0, w.size() - suffix.size()))) {
      w.resize(w.size() - suffix.size());
      const std::size_t n = w.size();
      if (n >= 2 && w[n - 1] == w[n - 2] && !is_vowel(w[n - 1]) && w[n - 1] != 'l' && w[n - 1] != 's' && w[n - 1] != 'z')
        w.pop_back();
      break;
    }
  }
  return w;
}

std::vector<std::string> SimpleTokenizer::terms(std::string_view text) const {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !is_stop_word(cur)) out.push_back(stem(cur));
    cur.clear();
  };
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

ContentSequence text_to_sequence(const std::vector<std::string>& texts, const Vocabulary& vocab, NodeIndex node,
                                 const Tokenizer& tokenizer, std::size_t max_len) {
  ContentSequence seq{node, {}};
  for (const auto& doc : texts) {
    for (const auto& term : tokenizer.terms(doc)) {
      if (seq.tokens.size() >= max_len) return seq;
      if (auto idx = vocab.index_of(term)) seq.tokens.push_back(*idx);
    }
  }
  return seq;
}

ContentSequence text_to_sequence(const std::vector<std::string>& texts, const Vocabulary& vocab, NodeIndex node,
                                 std::size_t max_len) {
  static const SimpleTokenizer tokenizer;
  return text_to_sequence(texts, vocab, node, tokenizer, max_len);
}

}  // namespace cone
