#include "cone/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "cone/error.hpp"

namespace cone {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_int(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    throw Error("bad value for " + key + ": '" + v + "' (expected an integer)");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty() || !std::isfinite(out))
    throw Error("bad value for " + key + ": '" + v + "' (expected a number)");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("bad value for " + key + ": '" + v + "' (expected true or false)");
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_int<std::size_t>(key, item));
  }
  return out;
}

std::string format_list(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

struct Field {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define STR_FIELD(key, member) \
  Field { key, [](RunConfig& c, const std::string& v) { c.member = v; }, [](const RunConfig& c) { return c.member; } }
#define INT_FIELD(key, member)                                                                          \
  Field {                                                                                               \
    key, [](RunConfig& c, const std::string& v) { c.member = parse_int<decltype(c.member)>(key, v); }, \
        [](const RunConfig& c) { return std::to_string(c.member); }                                     \
  }
#define REAL_FIELD(key, member)                                                          \
  Field {                                                                                \
    key, [](RunConfig& c, const std::string& v) { c.member = parse_real(key, v); },     \
        [](const RunConfig& c) { return format_double(c.member); }                       \
  }
#define BOOL_FIELD(key, member)                                                          \
  Field {                                                                                \
    key, [](RunConfig& c, const std::string& v) { c.member = parse_bool(key, v); },     \
        [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); }      \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      STR_FIELD("edges", edges),
      STR_FIELD("attrs", attrs),
      STR_FIELD("nodes", nodes),
      STR_FIELD("communities", communities),
      STR_FIELD("ego_dir", ego_dir),
      BOOL_FIELD("directed", directed),
      STR_FIELD("train", train),
      STR_FIELD("test", test),
      STR_FIELD("model", model_path),
      STR_FIELD("detected", detected),
      STR_FIELD("truth", truth),
      STR_FIELD("out", out),
      INT_FIELD("seed", seed),
      Field{"pattern", [](RunConfig& c, const std::string& v) { c.planted.pattern = parse_pattern(v); },
            [](const RunConfig& c) { return to_string(c.planted.pattern); }},
      INT_FIELD("num_communities", planted.num_communities),
      INT_FIELD("community_size", planted.community_size),
      INT_FIELD("noise_edges", planted.noise_edges),
      INT_FIELD("signature_size", planted.signature_size),
      INT_FIELD("member_block_size", planted.member_block_size),
      INT_FIELD("noise_pool", planted.noise_pool),
      INT_FIELD("noise_per_node", planted.noise_per_node),
      REAL_FIELD("dropout", planted.dropout),
      Field{"encoder", [](RunConfig& c, const std::string& v) { c.model.encoder = parse_encoder(v); },
            [](const RunConfig& c) { return to_string(c.model.encoder); }},
      INT_FIELD("k_transitions", model.k_transitions),
      INT_FIELD("hidden", model.hidden),
      INT_FIELD("cells", model.cells),
      INT_FIELD("input_dim", model.input_dim),
      Field{"ff_widths", [](RunConfig& c, const std::string& v) { c.model.ff_widths = parse_list("ff_widths", v); },
            [](const RunConfig& c) { return format_list(c.model.ff_widths); }},
      REAL_FIELD("rho", model.rho),
      INT_FIELD("epochs", model.epochs),
      INT_FIELD("max_length", model.max_length),
      REAL_FIELD("train_fraction", train_fraction),
      INT_FIELD("k_clusters", k_clusters),
      Field{"candidates",
            [](RunConfig& c, const std::string& v) {
              if (v == "auto")
                c.candidates.reset();
              else
                c.candidates = parse_list("candidates", v);
            },
            [](const RunConfig& c) { return c.candidates ? format_list(*c.candidates) : std::string("auto"); }},
      INT_FIELD("folds", folds),
      INT_FIELD("min_size", min_size),
      BOOL_FIELD("exclude_train", exclude_train),
      STR_FIELD("metric", metric),
      INT_FIELD("bins", bins),
  };
  return table;
}

const Field& field(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.name) return f;
  throw Error("unknown config key '" + key + "'");
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(source, lineno, "expected key=value");
    std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ParseError(source, lineno, "empty key");
    out.emplace_back(std::move(key), trim(t.substr(eq + 1)));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string model_config_to_text(const ModelConfig& c) {
  std::ostringstream out;
  out << "encoder=" << to_string(c.encoder) << '\n'
      << "k_transitions=" << c.k_transitions << '\n'
      << "hidden=" << c.hidden << '\n'
      << "cells=" << c.cells << '\n'
      << "input_dim=" << c.input_dim << '\n'
      << "ff_widths=" << format_list(c.ff_widths) << '\n'
      << "rho=" << format_double(c.rho) << '\n'
      << "epochs=" << c.epochs << '\n'
      << "max_length=" << c.max_length << '\n'
      << "seed=" << c.seed << '\n'
      << "vocab_size=" << c.vocab_size << '\n'
      << "num_communities=" << c.num_communities << '\n';
  return out.str();
}

ModelConfig model_config_from_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  ModelConfig c;
  for (const auto& [k, v] : parse_key_values(in, source)) {
    if (k == "encoder") c.encoder = parse_encoder(v);
    else if (k == "k_transitions") c.k_transitions = parse_int<int>(k, v);
    else if (k == "hidden") c.hidden = parse_int<std::size_t>(k, v);
    else if (k == "cells") c.cells = parse_int<std::size_t>(k, v);
    else if (k == "input_dim") c.input_dim = parse_int<std::size_t>(k, v);
    else if (k == "ff_widths") c.ff_widths = parse_list(k, v);
    else if (k == "rho") c.rho = parse_real(k, v);
    else if (k == "epochs") c.epochs = parse_int<std::size_t>(k, v);
    else if (k == "max_length") c.max_length = parse_int<std::size_t>(k, v);
    else if (k == "seed") c.seed = parse_int<std::uint64_t>(k, v);
    else if (k == "vocab_size") c.vocab_size = parse_int<std::size_t>(k, v);
    else if (k == "num_communities") c.num_communities = parse_int<std::size_t>(k, v);
    else throw Error(source + ": unknown model config key '" + k + "'");
  }
  return c;
}

void RunConfig::set(const std::string& key, const std::string& value) { field(key).set(*this, value); }

std::string RunConfig::get(const std::string& key) const { return field(key).get(*this); }

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& f : fields()) v.emplace_back(f.name);
    return v;
  }();
  return names;
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.name) + "=" + f.get(*this) + "\n";
  return out;
}

RunConfig RunConfig::from_text(const std::string& text, const std::string& source) {
  RunConfig c;
  std::istringstream in(text);
  for (const auto& [k, v] : parse_key_values(in, source)) c.set(k, v);
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  RunConfig c;
  c.apply_file(path);
  return c;
}

void RunConfig::apply_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  for (const auto& [k, v] : parse_key_values(in, path)) {
    try {
      set(k, v);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw Error(path + ": " + e.what());
    }
  }
}

}  // namespace cone
