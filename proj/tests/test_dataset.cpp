#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cone/analysis.hpp"
#include "cone/archive.hpp"
#include "cone/config.hpp"
#include "cone/dataset.hpp"
#include "cone/error.hpp"
#include "cone/planted.hpp"
#include "test_util.hpp"

namespace cone {
namespace {

using test::TempDir;

// One ego "0" with alters 1, 2, 3, two features and one circle.
void write_ego(const TempDir& dir, const std::string& ego = "0", const std::string& circles = "friends\t1\t2\n") {
  dir.write(ego + ".featnames", "0 gender;anonymized feature 77\n1 school;id;anonymized feature 3\n");
  dir.write(ego + ".egofeat", "1 0\n");
  dir.write(ego + ".feat", "1 1 1\n2 0 1\n3 0 0\n");
  dir.write(ego + ".edges", "1 2\n2 1\n2 3\n");
  dir.write(ego + ".circles", circles);
}

TEST(Attributes, ReadAndWriteRoundTrip) {
  auto g = test::graph_of({{"a", "b"}, {"b", "c"}});
  std::istringstream in("# columns 5\na 0 3\nc 4\n");
  auto attrs = read_attributes(in, g);
  EXPECT_EQ(attrs.rows(), 3u);
  EXPECT_EQ(attrs.columns(), 5u);
  EXPECT_DOUBLE_EQ(attrs.get(0, 3), 1.0);
  EXPECT_TRUE(attrs.row(1).empty());
  std::ostringstream out;
  write_attributes(out, attrs, g);
  std::istringstream back(out.str());
  EXPECT_EQ(read_attributes(back, g), attrs);
}

TEST(Attributes, UnknownNodesAreListed) {
  auto g = test::graph_of({{"a", "b"}});
  std::istringstream in("zz 0\na 1\nyy 2\n");
  try {
    read_attributes(in, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("yy"), std::string::npos);
  }
  std::istringstream bad("a x\n");
  EXPECT_THROW(read_attributes(bad, g), ParseError);
}

TEST(Communities, ReadRejectsUnknownMembers) {
  auto g = test::graph_of({{"a", "b"}, {"b", "c"}});
  std::istringstream ok("team a c\n# comment\nsolo b\n");
  auto set = read_communities(ok, g);
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set.communities[0].members, (std::vector<NodeIndex>{0, 2}));
  std::istringstream bad("team a q\n");
  EXPECT_THROW(read_communities(bad, g), ParseError);
  std::istringstream empty("team\n");
  EXPECT_THROW(read_communities(empty, g), ParseError);
}

TEST(Generic, LoadsFixture) {
  TempDir dir("generic");
  dir.write("edges.txt", "a b\nb c\n");
  dir.write("attrs.txt", "a 0\nb 0 1\n");
  dir.write("comms.txt", "g1 a b\n");
  auto ds = load_generic({dir.file("edges.txt"), dir.file("attrs.txt"), dir.file("comms.txt"), ""});
  EXPECT_EQ(ds.graph.num_nodes(), 3u);
  EXPECT_EQ(ds.attrs.rows(), 3u);
  EXPECT_EQ(ds.communities.size(), 1u);

  auto bare = load_generic({dir.file("edges.txt"), "", "", ""});
  EXPECT_EQ(bare.attrs.rows(), 3u);
  for (const auto& s : attrs_to_sequences(bare.attrs)) EXPECT_TRUE(s.tokens.empty());

  dir.write("bad.txt", "g1 a nobody\n");
  EXPECT_THROW(load_generic({dir.file("edges.txt"), "", dir.file("bad.txt"), ""}), Error);
  EXPECT_THROW(load_generic({dir.file("missing.txt"), "", "", ""}), Error);
}

TEST(Generic, WriteThenLoadIsIdentity) {
  PlantedConfig pc;
  pc.noise_edges = 5;
  auto ds = generate_planted(pc);
  TempDir dir("roundtrip");
  auto paths = write_generic(ds, dir.str());
  auto back = load_generic(paths);
  back.name = ds.name;
  EXPECT_EQ(back.graph, ds.graph);
  EXPECT_EQ(back.attrs.rows(), ds.attrs.rows());
  for (std::size_t i = 0; i < ds.attrs.rows(); ++i) EXPECT_EQ(back.attrs.row(i), ds.attrs.row(i));
  EXPECT_EQ(back.communities.communities, ds.communities.communities);
}

TEST(Ego, MinimalNetwork) {
  TempDir dir("ego");
  write_ego(dir);
  auto ds = load_ego_dataset(dir.str());
  EXPECT_EQ(ds.graph.num_nodes(), 4u);
  ASSERT_EQ(ds.communities.size(), 1u);
  EXPECT_EQ(ds.communities.communities[0].id, "0/friends");
  EXPECT_EQ(ds.communities.communities[0].size(), 2u);
  // alter-alter edges 1-2 (deduplicated) and 2-3, plus ego links to each alter
  EXPECT_EQ(ds.graph.num_edges(), 5u);
  EXPECT_EQ(ds.attrs.columns(), 2u);
  const auto ego = *ds.graph.index_of("0");
  EXPECT_DOUBLE_EQ(ds.attrs.get(ego, 0), 1.0);
  EXPECT_DOUBLE_EQ(ds.attrs.get(ego, 1), 0.0);
}

TEST(Ego, EmptyCirclesFile) {
  TempDir dir("ego-empty");
  write_ego(dir, "0", "");
  auto ds = load_ego_dataset(dir.str());
  EXPECT_EQ(ds.graph.num_nodes(), 4u);
  EXPECT_EQ(ds.communities.size(), 0u);
}

TEST(Ego, InconsistentWidthIsAnError) {
  TempDir dir("ego-width");
  write_ego(dir);
  dir.write("0.feat", "1 1 1\n2 0\n3 0 0\n");
  EXPECT_THROW(load_ego_dataset(dir.str()), ParseError);
}

TEST(Ego, IncompleteEgoIsSkipped) {
  TempDir dir("ego-skip");
  write_ego(dir, "0");
  write_ego(dir, "10");
  std::filesystem::remove(dir.file("10.circles"));
  auto ds = load_ego_dataset(dir.str());
  EXPECT_EQ(ds.communities.size(), 1u);
  EXPECT_FALSE(ds.graph.index_of("10"));
}

TEST(Ego, MergesOnGlobalIdsOrNamespaces) {
  TempDir dir("ego-merge");
  write_ego(dir, "0");
  write_ego(dir, "5");
  auto merged = load_ego_dataset(dir.str());
  EXPECT_EQ(merged.graph.num_nodes(), 5u);  // 0, 5 and the shared alters 1..3
  EXPECT_EQ(merged.communities.size(), 2u);
  auto spaced = load_ego_dataset(dir.str(), {true, ""});
  EXPECT_EQ(spaced.graph.num_nodes(), 8u);
  auto single = load_ego_dataset(dir.str(), {false, "5"});
  EXPECT_EQ(single.communities.size(), 1u);
}

TEST(Planted, Densities) {
  PlantedConfig co;
  co.community_size = 6;
  auto ds = generate_planted(co);
  for (const auto& c : ds.communities.communities) EXPECT_DOUBLE_EQ(density(c, ds.graph), 0.6);
  PlantedConfig star;
  star.pattern = PlantedPattern::kStar;
  star.community_size = 5;
  auto st = generate_planted(star);
  for (const auto& c : st.communities.communities) EXPECT_DOUBLE_EQ(density(c, st.graph), 0.4);
}

TEST(Planted, StructureAndAttributes) {
  PlantedConfig pc;
  pc.pattern = PlantedPattern::kBridge;
  pc.num_communities = 4;
  pc.community_size = 5;
  pc.noise_edges = 7;
  auto ds = generate_planted(pc);
  EXPECT_EQ(ds.graph.num_nodes(), 4u * 5u + 2u);
  EXPECT_EQ(ds.graph.num_edges(), 4u * 4u + 2u * 2u + 7u);
  EXPECT_EQ(ds.communities.size(), 4u);
  for (std::size_t v = 0; v < ds.attrs.rows(); ++v) EXPECT_FALSE(ds.attrs.row(v).empty());
  // center signatures are exclusive to their own community
  const auto& c0 = ds.communities.communities[0];
  for (std::size_t v = 0; v < ds.attrs.rows(); ++v)
    if (v != c0.members[0]) {
      EXPECT_DOUBLE_EQ(ds.attrs.get(v, 0), 0.0);
    }
}

TEST(Planted, DeterministicAndValidated) {
  PlantedConfig pc;
  pc.noise_edges = 10;
  pc.dropout = 0.3;
  EXPECT_EQ(generate_planted(pc), generate_planted(pc));
  pc.seed = 2;
  EXPECT_NE(generate_planted(pc).graph, generate_planted(PlantedConfig{}).graph);

  PlantedConfig tiny;
  tiny.community_size = 2;
  EXPECT_THROW(generate_planted(tiny), Error);
  tiny.community_size = 3;
  EXPECT_THROW(generate_planted(tiny), Error);
  tiny.pattern = PlantedPattern::kStar;
  EXPECT_NO_THROW(generate_planted(tiny));
  PlantedConfig odd;
  odd.pattern = PlantedPattern::kBridge;
  odd.num_communities = 3;
  EXPECT_THROW(generate_planted(odd), Error);
  PlantedConfig crowded;
  crowded.num_communities = 2;
  crowded.community_size = 4;
  crowded.noise_edges = 17;
  EXPECT_THROW(generate_planted(crowded), Error);
  crowded.noise_edges = 16;  // every cross pair
  EXPECT_EQ(generate_planted(crowded).graph.num_edges(), 2u * 5u + 16u);
}

ConeModel sample_model() {
  ModelConfig cfg;
  cfg.hidden = 5;
  cfg.input_dim = 3;
  cfg.vocab_size = 7;
  cfg.num_communities = 3;
  cfg.seed = 42;
  return ConeModel(cfg);
}

TEST(Archive, ModelRoundTripIsBitExact) {
  const ConeModel m = sample_model();
  const auto bytes = serialize_model(m);
  const ConeModel back = deserialize_model(bytes);
  EXPECT_EQ(back.config(), m.config());
  auto a = m.parameters();
  auto b = back.parameters();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i]->name, b[i]->name);
    EXPECT_EQ(a[i]->value, b[i]->value);
  }
  EXPECT_EQ(serialize_model(back), bytes);

  TempDir dir("archive");
  save_model(dir.file("m.cone"), m);
  EXPECT_EQ(serialize_model(load_model(dir.file("m.cone"))), bytes);
}

TEST(Archive, TruncationIsDetected) {
  const auto bytes = serialize_model(sample_model());
  for (std::size_t cut : {bytes.size() - 1, bytes.size() / 2, std::size_t{9}}) {
    std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<long>(cut));
    try {
      deserialize_model(part);
      FAIL() << cut;
    } catch (const ArchiveError& e) {
      EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos) << e.what();
    }
  }
  auto flipped = bytes;
  flipped[20] ^= 0x40;
  EXPECT_THROW(deserialize_model(flipped), ArchiveError);
  EXPECT_THROW(deserialize_model(std::vector<std::uint8_t>{'N', 'O', 'P', 'E', 0, 0, 0, 0}), ArchiveError);
}

TEST(Archive, ShapeMismatchNamesTheBlock) {
  const auto bytes = serialize_model(sample_model());
  // swap the embedded config for one with a different hidden size and re-seal the file
  auto u32_at = [&](std::size_t off) {
    return std::uint32_t(bytes[off]) | std::uint32_t(bytes[off + 1]) << 8 | std::uint32_t(bytes[off + 2]) << 16 |
           std::uint32_t(bytes[off + 3]) << 24;
  };
  const std::uint32_t len = u32_at(8);
  std::string text(bytes.begin() + 12, bytes.begin() + 12 + len);
  ModelConfig cfg = model_config_from_text(text);
  cfg.hidden = 6;
  const std::string swapped = model_config_to_text(cfg);
  std::vector<std::uint8_t> out(bytes.begin(), bytes.begin() + 8);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(swapped.size() >> (8 * i)));
  out.insert(out.end(), swapped.begin(), swapped.end());
  out.insert(out.end(), bytes.begin() + 12 + len, bytes.end() - 4);
  const std::uint32_t crc = crc32_of(out);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(crc >> (8 * i)));
  try {
    deserialize_model(out);
    FAIL();
  } catch (const ArchiveError& e) {
    EXPECT_NE(std::string(e.what()).find("shape mismatch in block 'cell0."), std::string::npos) << e.what();
  }
}

TEST(Archive, VersionIsChecked) {
  auto bytes = serialize_model(sample_model());
  bytes[4] = 9;
  bytes.resize(bytes.size() - 4);
  const std::uint32_t crc = crc32_of(bytes);
  for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(crc >> (8 * i)));
  try {
    deserialize_model(bytes);
    FAIL();
  } catch (const ArchiveError& e) {
    EXPECT_NE(std::string(e.what()).find("version 9"), std::string::npos);
  }
}

TEST(Archive, EmbeddingsRoundTrip) {
  EmbeddingFile f{EmbeddingMatrix(2, 3, EmbeddingRole::kRegularized), {"x", "y", "z"}};
  for (std::size_t i = 0; i < f.matrix.data().size(); ++i) f.matrix.data()[i] = 0.1 * static_cast<double>(i) - 0.25;
  auto back = deserialize_embeddings(serialize_embeddings(f));
  EXPECT_EQ(back, f);
  TempDir dir("emb");
  save_embeddings(dir.file("e.cemb"), f);
  EXPECT_EQ(load_embeddings(dir.file("e.cemb")), f);

  EmbeddingFile empty{EmbeddingMatrix(2, 0, EmbeddingRole::kContent), {}};
  EXPECT_THROW(serialize_embeddings(empty), ArchiveError);
  EmbeddingFile mismatched{EmbeddingMatrix(2, 2, EmbeddingRole::kContent), {"a"}};
  EXPECT_THROW(serialize_embeddings(mismatched), ArchiveError);
}

TEST(Archive, Crc32KnownValue) {
  const std::string s = "123456789";
  EXPECT_EQ(crc32_of(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size())), 0xCBF43926u);
}

}  // namespace
}  // namespace cone
