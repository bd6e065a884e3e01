#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cone/model.hpp"

namespace cone {

inline constexpr std::uint32_t kModelArchiveVersion = 1;
inline constexpr std::uint32_t kEmbeddingArchiveVersion = 1;

/// Binary model archive: config plus every parameter block, CRC32-protected.
/// Byte layout is documented in docs/formats.md.
std::vector<std::uint8_t> serialize_model(const ConeModel& model);
ConeModel deserialize_model(std::span<const std::uint8_t> bytes, const std::string& source = "<archive>");

void save_model(const std::string& path, const ConeModel& model);
ConeModel load_model(const std::string& path);

struct EmbeddingFile {
  EmbeddingMatrix matrix;
  std::vector<std::string> node_ids;  // column i belongs to node_ids[i]

  bool operator==(const EmbeddingFile&) const = default;
};

std::vector<std::uint8_t> serialize_embeddings(const EmbeddingFile& file);
EmbeddingFile deserialize_embeddings(std::span<const std::uint8_t> bytes, const std::string& source = "<embeddings>");

void save_embeddings(const std::string& path, const EmbeddingFile& file);
EmbeddingFile load_embeddings(const std::string& path);

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);

}  // namespace cone
